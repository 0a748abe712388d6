"""
Unitary bases and conclusive exclusion
======================================

Two sets of qubit unitaries, {I, Y} and {ry(pi/2), ry(-pi/2)}, are mutually
unbiased: every cross pair has the same Hilbert-Schmidt overlap.
"""
import math

import numpy as np

from muubqkd import I2, R, Y, EquatorBasis, muub_overlap, ry

# |Tr(U^dag V)|^2 for each cross pair
for name_u, u in (("I", I2), ("Y", Y)):
    for name_v, z in (("ry(+pi/2)", math.pi / 2), ("ry(-pi/2)", -math.pi / 2)):
        print(f"{name_u:>2} vs {name_v}: {muub_overlap(u, ry(z)):.12f}")

# a unitary with itself is maximally overlapping
print("I vs I:", muub_overlap(I2, I2))

# Alice encodes with I or R = ry(-pi/2). Bob prepared |0> in the basis at
# angle theta and measures either in that basis or in its rotated image.
theta = 0.7
basis = EquatorBasis(theta)
k0 = basis.states[0]
for enc_name, enc in (("I", I2), ("R", R)):
    out = enc @ k0
    same = np.abs(np.array(basis.states).conj() @ out) ** 2
    rot = np.abs(np.array(basis.rotated()).conj() @ out) ** 2
    print(f"encoding {enc_name}: same-basis probs {np.round(same, 3)}, rotated-basis probs {np.round(rot, 3)}")

# Seeing |1> in the same basis rules out I, so the bit is 1; seeing R|1> in
# the rotated basis rules out R, so the bit is 0. One round in four is
# conclusive on average.
