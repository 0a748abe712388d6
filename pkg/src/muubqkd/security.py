"""Key rates and the (Q, Q_AB) secure-region geometry for both protocols.

The secret key rate per sifted bit is ``1 - I_E(Q) - h(Q_AB)``. Its
positive region inside ``[0, 0.25] x [0, 0.5]`` measures how much channel
noise a protocol tolerates; the region's area is used as the security
threshold.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attack import eve_information_optimal, lm05_eve_information
from .entropy import binary_entropy
from .errors import DomainError

PROTOCOLS = ("muub2", "lm05")
Q_MAX = 0.25
QAB_MAX = 0.5

#: Fraction of transmitted qubits that end up in the sifted key.
SIFT_YIELD = {"muub2": 0.25, "lm05": 1.0}


def _check_protocol(protocol: str) -> None:
    if protocol not in PROTOCOLS:
        raise DomainError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")


def eve_information(protocol: str, q):
    _check_protocol(protocol)
    if protocol == "muub2":
        return eve_information_optimal(q)
    return lm05_eve_information(q)


def key_rate(protocol: str, q, q_ab, per_raw_pulse: bool = False):
    """Secret key rate; negative values are returned unclamped.

    With ``per_raw_pulse`` the rate is scaled by the protocol's sift yield,
    which does not move the zero contour.
    """
    qab = np.asarray(q_ab, dtype=float)
    if np.any(~(qab >= 0.0)) or np.any(qab > QAB_MAX):
        raise DomainError("q_ab must lie in [0, 0.5]")
    rate = 1.0 - eve_information(protocol, q) - binary_entropy(qab)
    if per_raw_pulse:
        rate = rate * SIFT_YIELD[protocol]
    return float(rate) if np.ndim(rate) == 0 else rate


@dataclass(frozen=True)
class KeyRatePoint:
    q: float
    q_ab: float
    i_e: float
    rate: float


@dataclass(frozen=True, eq=False)
class KeyRateGrid:
    """Key rate at the midpoints of a ``q_cells x qab_cells`` grid.

    Array axes are ``(q, q_ab)``.
    """

    protocol: str
    q: np.ndarray
    q_ab: np.ndarray
    i_e: np.ndarray
    rate: np.ndarray

    @property
    def cell_area(self) -> float:
        return (Q_MAX / len(self.q)) * (QAB_MAX / len(self.q_ab))

    def points(self):
        for i, q in enumerate(self.q):
            for j, qab in enumerate(self.q_ab):
                yield KeyRatePoint(float(q), float(qab), float(self.i_e[i]), float(self.rate[i, j]))

    def positive_area(self) -> float:
        return float(np.count_nonzero(self.rate > 0.0)) * self.cell_area


def midpoints(upper: float, cells: int) -> np.ndarray:
    return (np.arange(cells) + 0.5) * (upper / cells)


def keyrate_grid(protocol: str, q_cells: int = 200, qab_cells: int = 200,
                 per_raw_pulse: bool = False) -> KeyRateGrid:
    _check_protocol(protocol)
    if q_cells < 1 or qab_cells < 1:
        raise DomainError("grid needs at least one cell per axis")
    q = midpoints(Q_MAX, q_cells)
    qab = midpoints(QAB_MAX, qab_cells)
    i_e = eve_information(protocol, q)
    rate = 1.0 - i_e[:, None] - binary_entropy(qab)[None, :]
    if per_raw_pulse:
        rate = rate * SIFT_YIELD[protocol]
    return KeyRateGrid(protocol, q, qab, i_e, rate)


def threshold_area(protocol: str, resolution: int = 2000, chunk: int = 256) -> float:
    """Area of ``{key_rate > 0}`` in the ``[0, 0.25] x [0, 0.5]`` plane.

    Midpoint rule on a ``resolution x resolution`` grid, evaluated in row
    chunks so the full grid is never held in memory.
    """
    _check_protocol(protocol)
    if resolution < 100:
        raise DomainError(f"resolution must be at least 100, got {resolution}")
    q = midpoints(Q_MAX, resolution)
    h_ab = binary_entropy(midpoints(QAB_MAX, resolution))
    i_e = eve_information(protocol, q)
    count = 0
    for lo in range(0, resolution, chunk):
        rate = 1.0 - i_e[lo:lo + chunk, None] - h_ab[None, :]
        count += int(np.count_nonzero(rate > 0.0))
    return count * (Q_MAX / resolution) * (QAB_MAX / resolution)


def inverse_binary_entropy(target: float, tol: float = 1e-10) -> float:
    """Smallest ``q`` in ``[0, 0.5]`` with ``h(q) = target``, by bisection."""
    if target <= 0.0:
        return 0.0
    if target >= 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def qab_bound(max_eve_information: float | None = None) -> float:
    """Largest ``Q_AB`` giving a positive rate when Eve's information is maximal.

    Solves ``h(Q_AB) = 1 - max I_E``. The default uses the new protocol's
    maximum at ``Q = 0.25``, giving about 0.0791.
    """
    if max_eve_information is None:
        max_eve_information = float(eve_information_optimal(Q_MAX))
    return inverse_binary_entropy(1.0 - max_eve_information)


def ie_curve(protocol: str, steps: int = 100) -> list[tuple[float, float]]:
    if steps < 2:
        raise DomainError("steps must be at least 2")
    q = np.linspace(0.0, Q_MAX, steps)
    return [(float(a), float(b)) for a, b in zip(q, eve_information(protocol, q))]


def classify_point(protocol: str, q_hat: float, q_ab_hat: float) -> tuple[float, str]:
    rate = key_rate(protocol, q_hat, q_ab_hat)
    return rate, "distillable" if rate > 0.0 else "non-distillable"


def dominance_margin(q_cells: int = 200, qab_cells: int = 200) -> float:
    """Minimum of ``rate(muub2) - rate(lm05)`` over a grid; non-negative when
    the new protocol dominates everywhere."""
    a = keyrate_grid("muub2", q_cells, qab_cells).rate
    b = keyrate_grid("lm05", q_cells, qab_cells).rate
    return float(np.min(a - b))
