"""
Where a secret key survives
===========================

The key rate 1 - I_E(Q) - h(Q_AB) is positive over part of the
(Q, Q_AB) rectangle [0, 1/4] x [0, 1/2]. Its area measures robustness.
"""
import numpy as np

from muubqkd import classify_point, keyrate_grid, qab_bound, threshold_area

for protocol in ("muub2", "lm05"):
    areas = [threshold_area(protocol, res) for res in (250, 500, 1000, 2000)]
    print(protocol, "area by resolution:", np.round(areas, 6))

# the region boundary at a coarse resolution, one row per Q value
grid = keyrate_grid("muub2", 10, 50)
for q, row in zip(grid.q, grid.rate):
    edge = grid.q_ab[row > 0].max(initial=0.0)
    print(f"Q = {q:.4f}: key survives up to Q_AB ~ {edge:.3f}")

# even under Eve's strongest attack some backward error is tolerable
print("Q_AB bound at Q = 1/4:", qab_bound())
for q_ab in (0.05, 0.10):
    print((0.25, q_ab), classify_point("muub2", 0.25, q_ab))
