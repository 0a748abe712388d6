"""
Eve's information under the symmetric attack
============================================

The probe states left after Alice's encoding form a 4x4 Gram matrix whose
spectrum fixes S(rho_BE); Eve's information is S - 1.
"""
import numpy as np

from muubqkd import (
    AttackParams,
    eve_information_general,
    eve_information_numeric,
    eve_information_optimal,
    gram_matrix,
    lm05_eve_information,
)

p = AttackParams.symmetric(0.25, cos_y=1.0)
print("attack:", p)
print("alpha =", round(p.alpha, 12) + 0.0)
print("Gram eigenvalues:", np.round(np.linalg.eigvalsh(gram_matrix(p)), 6))
print("I_E (eigensolver) =", eve_information_numeric(p))
print("I_E (closed form) =", eve_information_optimal(0.25))

# cos y = 1 is Eve's best choice: other values give her less
for cos_y in (1.0, 0.5, 0.0, -0.5):
    print(f"cos y = {cos_y:+.1f}: I_E = {eve_information_general(0.25, cos_y):.6f}")

# compared with the orthogonal-encoding baseline
q = np.linspace(0, 0.25, 6)
print(" Q      muub2    lm05")
for qi, a, b in zip(q, eve_information_optimal(q), lm05_eve_information(q)):
    print(f"{qi:.3f}  {a:.5f}  {b:.5f}")
