"""Qubit states and single-qubit operators.

States are length-2 complex numpy arrays and operators are 2x2 complex
arrays. Everything here works in radians.

Bob's preparation bases live on the real great circle of the Poincare sphere:

    |0^q> = cos(theta/2)|0> + sin(theta/2)|1>
    |1^q> = sin(theta/2)|0> - cos(theta/2)|1>

Alice's two encodings are the identity and ``ry(-pi/2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

Ket2 = np.ndarray
Unitary2 = np.ndarray

EXACT_TOL = 1e-12
SPECTRAL_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def ry(zeta: float) -> Unitary2:
    """Rotation about the y axis, ``cos(zeta/2) I - i sin(zeta/2) Y``."""
    if not math.isfinite(zeta):
        raise DomainError(f"rotation angle must be finite, got {zeta!r}")
    return math.cos(zeta / 2) * I2 - 1j * math.sin(zeta / 2) * Y


#: Alice's non-trivial encoding; carries logical bit 1.
R = ry(-math.pi / 2)


def ket(a0: complex, a1: complex) -> Ket2:
    """Build a normalized qubit state, rejecting vectors that are not unit length."""
    v = np.array([a0, a1], dtype=complex)
    norm = np.vdot(v, v).real
    if abs(norm - 1.0) > EXACT_TOL:
        raise DomainError(f"state is not normalized (|v|^2 = {norm!r})")
    return v


def equator_state(theta: float, phi: float = 0.0) -> Ket2:
    """``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""
    return np.array(
        [math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)], dtype=complex
    )


def basis_states(theta: float) -> tuple[Ket2, Ket2]:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return (
        np.array([c, s], dtype=complex),
        np.array([s, -c], dtype=complex),
    )


@dataclass(frozen=True)
class EquatorBasis:
    """A measurement/preparation basis labelled by its angle ``theta``."""

    theta: float

    @property
    def states(self) -> tuple[Ket2, Ket2]:
        return basis_states(self.theta)

    def rotated(self) -> tuple[Ket2, Ket2]:
        """The ``R``-image of this basis, ``(R|0^q>, R|1^q>)``."""
        k0, k1 = self.states
        return R @ k0, R @ k1


def is_unitary(u: np.ndarray, tol: float = EXACT_TOL) -> bool:
    u = np.asarray(u)
    if u.shape != (2, 2):
        return False
    return bool(np.allclose(u.conj().T @ u, I2, rtol=0.0, atol=tol))


def muub_overlap(u: Unitary2, v: Unitary2) -> float:
    """Hilbert-Schmidt overlap ``|Tr(U^dagger V)|^2``.

    Two bases of unitaries are mutually unbiased when this is the same
    constant for every cross pair; for the qubit pair ``{I, Y}`` against
    ``{ry(pi/2), ry(-pi/2)}`` the constant is 2.

    >>> round(muub_overlap(I2, ry(-math.pi / 2)), 12)
    2.0
    """
    if not (is_unitary(u) and is_unitary(v)):
        raise DomainError("muub_overlap requires unitary arguments")
    return float(abs(np.trace(np.asarray(u).conj().T @ np.asarray(v))) ** 2)


def encode_overlap(theta: float, phi: float) -> float:
    """Fidelity between ``|psi(theta, phi)>`` and its ``R``-encoded image.

    Computed directly as ``|<psi| R |psi>|^2``. The closed form is
    ``1/2 + sin^2(theta) sin^2(phi) / 2``, so states on the real circle
    (``phi = 0``) reach the minimum of 1/2.
    """
    psi = equator_state(theta, phi)
    return float(abs(np.vdot(psi, R @ psi)) ** 2)


def encode_overlap_closed(theta: float, phi: float) -> float:
    return 0.5 + math.sin(theta) ** 2 * math.sin(phi) ** 2 / 2


def same_up_to_phase(u: Ket2, v: Ket2, tol: float = SPECTRAL_TOL) -> bool:
    return abs(abs(np.vdot(u, v)) - 1.0) <= tol


def born_probability(state: Ket2, basis: EquatorBasis) -> float:
    """Probability of outcome 0 when ``state`` is measured in ``basis``."""
    k0, _ = basis.states
    return snap_probability(float(abs(np.vdot(k0, state)) ** 2))


def snap_probability(p):
    """Clamp to [0, 1] and snap values within ``EXACT_TOL`` of an endpoint.

    Keeps deterministic outcomes deterministic despite rounding in the
    amplitudes. Works elementwise on arrays.
    """
    p = np.clip(p, 0.0, 1.0)
    p = np.where(p < EXACT_TOL, 0.0, p)
    p = np.where(p > 1.0 - EXACT_TOL, 1.0, p)
    return float(p) if np.ndim(p) == 0 else p


def measure(state: Ket2, basis: EquatorBasis, rng: np.random.Generator) -> int:
    """Sample a projective measurement; consumes one uniform draw from ``rng``."""
    return 0 if rng.random() < born_probability(state, basis) else 1
