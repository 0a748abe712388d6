"""Eve's symmetric collective attack on the forward path.

Eve couples each travelling qubit to a probe,

    U|b>|E> = |b>|E_bb> + |b~>|E_bb~>,

with ``<E_bb|E_bb> = F`` and ``<E_bb~|E_bb~> = Q = 1 - F``. All probe overlaps
can be made real, so the probe lives in a real 4-dimensional space:

    <E_00|E_11> = F cos x      <E_01|E_10> = Q cos y

with every fidelity/error cross term zero. After Alice's encoding Eve holds
an equal mixture of four Bob-probe pure states; the spectrum of their Gram
matrix gives ``S(rho_BE)`` and Eve's information ``S(rho_BE) - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import binary_entropy, von_neumann_entropy
from .errors import DomainError
from .qstate import EXACT_TOL, I2, R, basis_states

SQRT2 = math.sqrt(2.0)

#: Index = key bit: 0 -> identity, 1 -> ry(-pi/2).
ENCODINGS = (I2, R)


def fidelity_from_angles(x: float, y: float) -> float:
    """Fidelity of the attack that disturbs every real-circle state equally.

    ``F = (1 + cos y) / (2 + cos y - cos x)``.
    """
    denom = 2.0 + math.cos(y) - math.cos(x)
    if denom <= EXACT_TOL:
        raise DomainError(f"degenerate attack angles (denominator {denom!r})")
    return (1.0 + math.cos(y)) / denom


@dataclass(frozen=True)
class AttackParams:
    """Attack strength ``Q`` and probe-overlap angles ``x``, ``y`` (radians)."""

    Q: float
    x: float
    y: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.Q, self.x, self.y)):
            raise DomainError("attack parameters must be finite")
        if not 0.0 <= self.Q <= 0.5 + EXACT_TOL:
            raise DomainError(f"Q must lie in [0, 0.5], got {self.Q!r}")

    @classmethod
    def from_angles(cls, x: float, y: float) -> "AttackParams":
        """Symmetric attack with ``F`` fixed by the two angles."""
        q = 1.0 - fidelity_from_angles(x, y)
        return cls(Q=0.0 if abs(q) < EXACT_TOL else q, x=x, y=y)

    @classmethod
    def symmetric(cls, Q: float, cos_y: float = 1.0) -> "AttackParams":
        """Symmetric attack of strength ``Q``; ``cos x`` is solved from
        ``F (1 - cos x) = Q (1 + cos y)``. ``cos_y = 1`` is Eve's optimum."""
        if not 0.0 <= Q <= 0.5:
            raise DomainError(f"Q must lie in [0, 0.5], got {Q!r}")
        if not -1.0 <= cos_y <= 1.0:
            raise DomainError(f"cos_y must lie in [-1, 1], got {cos_y!r}")
        cos_x = 1.0 - Q * (1.0 + cos_y) / (1.0 - Q)
        return cls(Q=Q, x=math.acos(min(1.0, max(-1.0, cos_x))), y=math.acos(cos_y))

    @classmethod
    def from_cosines(cls, Q: float, cos_x: float, cos_y: float) -> "AttackParams":
        for name, c in (("cos_x", cos_x), ("cos_y", cos_y)):
            if not -1.0 - EXACT_TOL <= c <= 1.0 + EXACT_TOL:
                raise DomainError(f"{name} must lie in [-1, 1], got {c!r}")
        return cls(
            Q=Q,
            x=math.acos(min(1.0, max(-1.0, cos_x))),
            y=math.acos(min(1.0, max(-1.0, cos_y))),
        )

    @property
    def F(self) -> float:
        return 1.0 - self.Q

    @property
    def cos_x(self) -> float:
        return math.cos(self.x)

    @property
    def cos_y(self) -> float:
        return math.cos(self.y)

    @property
    def alpha(self) -> float:
        """``F cos x - Q cos y``, the only parameter the Gram spectrum sees."""
        return self.F * self.cos_x - self.Q * self.cos_y

    def is_symmetric(self, tol: float = EXACT_TOL) -> bool:
        return abs(self.F * (1 - self.cos_x) - self.Q * (1 + self.cos_y)) <= tol


@dataclass(frozen=True, eq=False)
class AncillaSet:
    """Eve's four unnormalized probe states ``E_ij`` (``i`` sent, ``j`` received)."""

    e00: np.ndarray
    e01: np.ndarray
    e10: np.ndarray
    e11: np.ndarray

    def as_array(self) -> np.ndarray:
        """Rows ordered ``E00, E01, E10, E11``."""
        return np.stack([self.e00, self.e01, self.e10, self.e11])

    def overlaps(self) -> np.ndarray:
        """4x4 matrix of probe inner products in ``as_array`` order."""
        a = self.as_array()
        return a.conj() @ a.T


def build_ancillas(params: AttackParams) -> AncillaSet:
    sf, sq = math.sqrt(params.F), math.sqrt(max(params.Q, 0.0))
    cx, sx = math.cos(params.x / 2), math.sin(params.x / 2)
    cy, sy = math.cos(params.y / 2), math.sin(params.y / 2)
    return AncillaSet(
        e00=sf * np.array([cx, sx, 0.0, 0.0]),
        e01=sq * np.array([0.0, 0.0, cy, sy]),
        e10=sq * np.array([0.0, 0.0, cy, -sy]),
        e11=sf * np.array([cx, -sx, 0.0, 0.0]),
    )


def basis_change_ancillas(theta: float, anc: AncillaSet) -> AncillaSet:
    """Re-express the probe states for a preparation basis at angle ``theta``.

    ``E^q_ij`` is the probe amplitude attached to ``|j^q>`` when Bob sent
    ``|i^q>``. At ``theta = 0`` this flips the sign of ``E01`` and ``E10``,
    which compensates ``|1^q> = -|1>``; the joint states are unchanged.
    """
    c1 = math.cos(theta / 2) ** 2
    c2 = math.cos(theta / 2) * math.sin(theta / 2)
    c3 = math.sin(theta / 2) ** 2
    e00, e01, e10, e11 = anc.e00, anc.e01, anc.e10, anc.e11
    return AncillaSet(
        e00=c1 * e00 + c2 * e01 + c2 * e10 + c3 * e11,
        e01=c2 * e00 - c1 * e01 + c3 * e10 - c2 * e11,
        e10=c2 * e00 + c3 * e01 - c1 * e10 - c2 * e11,
        e11=c3 * e00 - c2 * e01 - c2 * e10 + c1 * e11,
    )


def _encoded_states(k0, k1, e00, e01, e10, e11) -> np.ndarray:
    psi0 = np.kron(k0, e00) + np.kron(k1, e01)
    psi1 = np.kron(k0, e10) + np.kron(k1, e11)
    r_e = np.kron(R, np.eye(len(e00)))
    return np.stack([psi0, psi1, r_e @ psi0, r_e @ psi1])


def bob_eve_states(anc: AncillaSet, theta: float | None = None) -> np.ndarray:
    """The four joint states after encoding, as rows of a ``(4, 2*d)`` array.

    Rows are ``Psi0, Psi1`` (Bob's two basis states after the probe
    coupling, identity encoding) followed by their ``R``-encoded images.
    With ``theta=None`` Bob's states are ``|0>, |1>``, which reproduces the
    closed-form ``gram_matrix``. Otherwise they are ``|0^q>, |1^q>`` and
    the probes are first re-expressed with ``basis_change_ancillas``; at
    ``theta = 0`` that flips the sign of ``Psi1`` and ``Psi3`` only.
    """
    if theta is None:
        return _encoded_states(np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                               anc.e00, anc.e01, anc.e10, anc.e11)
    q = basis_change_ancillas(theta, anc)
    k0, k1 = basis_states(theta)
    return _encoded_states(k0, k1, q.e00, q.e01, q.e10, q.e11)


def gram_from_states(states: np.ndarray, weights=None) -> np.ndarray:
    """``G_ij = sqrt(p_i p_j) <phi_i|phi_j>``; equal weights by default."""
    states = np.asarray(states)
    n = states.shape[0]
    w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
    sw = np.sqrt(w)
    return (sw[:, None] * sw[None, :]) * (states.conj() @ states.T)


def gram_matrix(params: AttackParams) -> np.ndarray:
    """Closed-form Gram matrix of the equal four-state mixture."""
    a = params.alpha / SQRT2
    b = 1.0 / SQRT2
    m = np.array(
        [
            [1.0, 0.0, b, a],
            [0.0, 1.0, -a, b],
            [b, -a, 1.0, 0.0],
            [a, b, 0.0, 1.0],
        ]
    )
    return m / 4.0


@dataclass(frozen=True)
class GramSpectrum:
    """Closed-form eigenvalues; each of ``lambda_plus``/``lambda_minus`` is doubly degenerate."""

    alpha: float
    a: float
    lambda_plus: float
    lambda_minus: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array(
            [self.lambda_minus, self.lambda_minus, self.lambda_plus, self.lambda_plus]
        )


def lambda_closed(alpha: float) -> GramSpectrum:
    if not abs(alpha) <= 1.0 + 1e-9:
        raise DomainError(f"|alpha| must be at most 1, got {alpha!r}")
    alpha = max(-1.0, min(1.0, alpha))
    a = math.sqrt(alpha * alpha + 1.0)
    root = SQRT2 * a
    return GramSpectrum(
        alpha=alpha, a=a, lambda_plus=(2.0 + root) / 8.0, lambda_minus=max(0.0, (2.0 - root) / 8.0)
    )


def numeric_spectrum(params: AttackParams, theta: float | None = None) -> np.ndarray:
    """Ascending eigenvalues of the Gram matrix built from explicit joint states."""
    return np.linalg.eigvalsh(gram_from_states(bob_eve_states(build_ancillas(params), theta)))


def eve_information_numeric(params: AttackParams, theta: float | None = None) -> float:
    """``S(rho_BE) - 1`` from the explicit-state Gram matrix."""
    g = gram_from_states(bob_eve_states(build_ancillas(params), theta))
    return von_neumann_entropy(g) - 1.0


def eve_information_from_alpha(alpha: float) -> float:
    return binary_entropy(2.0 * lambda_closed(alpha).lambda_minus)


def eve_information_general(Q: float, cos_y: float) -> float:
    """Eve's information under a symmetric attack of strength ``Q``.

    Uses ``alpha = 1 - 2Q(1 + cos y)`` and ``I_E = h((2 - a sqrt 2) / 4)``
    with ``a = sqrt(alpha^2 + 1)``.
    """
    if not 0.0 <= Q <= 0.5:
        raise DomainError(f"Q must lie in [0, 0.5], got {Q!r}")
    if not -1.0 <= cos_y <= 1.0:
        raise DomainError(f"cos_y must lie in [-1, 1], got {cos_y!r}")
    alpha = 1.0 - 2.0 * Q * (1.0 + cos_y)
    a = math.sqrt(alpha * alpha + 1.0)
    return binary_entropy(max(0.0, (2.0 - a * SQRT2) / 4.0))


def eve_information_optimal(Q):
    """Eve's information at her best setting ``cos y = 1``.

    Vectorized over ``Q``. Rises monotonically from 0 to about 0.6009 at
    ``Q = 0.25``; larger ``Q`` is rejected.
    """
    q = np.asarray(Q, dtype=float)
    if np.any(~(q >= 0.0)) or np.any(q > 0.25):
        raise DomainError("Q must lie in [0, 0.25]")
    arg = 0.5 * (1.0 - np.sqrt((1.0 - 4.0 * q) ** 2 + 1.0) / SQRT2)
    return binary_entropy(np.maximum(arg, 0.0))


def lm05_eve_information(Q):
    """Eve's information against the orthogonal-encoding baseline, ``h(1 - 2Q)``."""
    q = np.asarray(Q, dtype=float)
    if np.any(~(q >= 0.0)) or np.any(q > 0.25):
        raise DomainError("Q must lie in [0, 0.25]")
    return binary_entropy(1.0 - 2.0 * q)


# -- joint qubit/probe evolution ------------------------------------------------
#
# A joint state is an array ``(..., 2, d)``: row ``k`` is the probe vector
# paired with computational state ``|k>``.


def attack_forward(states: np.ndarray, anc: AncillaSet) -> np.ndarray:
    """Apply Eve's probe coupling to qubit state(s) of shape ``(..., 2)``."""
    states = np.asarray(states)
    a0 = states[..., 0, None]
    a1 = states[..., 1, None]
    row0 = a0 * anc.e00 + a1 * anc.e10
    row1 = a0 * anc.e01 + a1 * anc.e11
    return np.stack([row0, row1], axis=-2)


def apply_qubit(u: np.ndarray, joint: np.ndarray) -> np.ndarray:
    """Act with a 2x2 operator (or a stack of them) on the qubit factor."""
    return np.einsum("...kl,...lm->...km", u, joint)


def outcome_probability(ket: np.ndarray, joint: np.ndarray) -> np.ndarray:
    """Probability that a qubit measurement finds ``ket`` (probe traced out)."""
    amp = np.einsum("...k,...km->...m", np.conj(ket), joint)
    return np.sum(np.abs(amp) ** 2, axis=-1)


def attack_induced_error(
    theta: float, params: AttackParams, encoding: int
) -> tuple[float, float]:
    """Exact error rates caused by the forward attack alone.

    Returns ``(q_forward, q_backward_conclusive)``: the flip probability of
    a ``theta``-basis state measured right after the attack, and the error
    rate among conclusive decodings when Alice applies ``encoding`` (0 for
    identity, 1 for ``R``). Both are averaged over Bob's two preparation
    bits; the second also over his two measurement choices.
    """
    anc = build_ancillas(params)
    u_a = ENCODINGS[encoding]
    kets = basis_states(theta)
    rotated = (R @ kets[0], R @ kets[1])

    q_fwd = 0.0
    p_conc = 0.0
    p_wrong = 0.0
    for bit in (0, 1):
        joint = attack_forward(kets[bit], anc)
        q_fwd += float(outcome_probability(kets[1 - bit], joint)) / 2
        back = apply_qubit(u_a, joint)
        # same basis: a flip rules out the identity -> key bit 1
        p = float(outcome_probability(kets[1 - bit], back)) / 4
        p_conc += p
        p_wrong += p * (encoding != 1)
        # rotated basis: a flip rules out R -> key bit 0
        p = float(outcome_probability(rotated[1 - bit], back)) / 4
        p_conc += p
        p_wrong += p * (encoding != 0)
    q_bc = p_wrong / p_conc if p_conc > 0 else 0.0
    return q_fwd, q_bc
