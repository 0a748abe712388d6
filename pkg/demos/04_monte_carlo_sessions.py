"""
Simulated sessions
==================

Monte Carlo runs of the protocol with channel noise and an active
eavesdropper, compared against the exact predictions.
"""
import math

from muubqkd import (
    AttackParams,
    NoiseSpec,
    SessionConfig,
    attack_induced_error,
    run_lm05_session,
    run_session,
)


def show(label, s):
    print(f"{label:<28} sift={s.sift_rate:.4f} q_hat={s.q_hat:.4f} q_ab_hat={s.q_ab_hat:.4f}")


show("noiseless", run_session(SessionConfig(n_pulses=100_000, seed=1)))

delta = 0.5
show("forward rotation 0.5 rad", run_session(SessionConfig(n_pulses=100_000, noise_forward=NoiseSpec.rotation(delta), seed=2)))
print("  expected q_hat:", round(math.sin(delta / 2) ** 2, 4))

attack = AttackParams.symmetric(0.25, 1.0)
show("symmetric attack Q = 1/4", run_session(SessionConfig(n_pulses=100_000, attack=attack, seed=3)))
print("  expected (q_hat, q_ab_hat):", tuple(round(v, 4) for v in attack_induced_error(0.0, attack, 0)))

show("LM05 noiseless", run_lm05_session(SessionConfig(n_pulses=100_000, seed=4)))
show("LM05 backward depol 0.2", run_lm05_session(SessionConfig(n_pulses=100_000, noise_backward=NoiseSpec.depolarize(0.2), seed=5)))
