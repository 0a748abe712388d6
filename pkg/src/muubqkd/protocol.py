"""Monte Carlo sessions of the two-encoding bidirectional protocol and LM05.

A round starts with Bob preparing ``|b^q>`` in a basis drawn from
``config.bases``. With probability ``control_prob`` Alice runs a control
round (CM) and measures the qubit herself; otherwise (EM) she applies her
encoding and sends it back for Bob's decoding measurement.

Per round order: forward noise, Eve's probe coupling, Alice, backward
noise, Bob.

Rounds are simulated in fixed blocks of ``BLOCK_SIZE``. Block ``k`` draws
from its own generator seeded by ``(seed, k)``, so any block can be
simulated or re-simulated alone and block summaries combine in any order.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterator, Optional

import numpy as np

from .attack import AttackParams, apply_qubit, attack_forward, build_ancillas, outcome_probability
from .errors import ConfigError
from .qstate import EXACT_TOL, I2, R, Y, basis_states, equator_state, ry, snap_probability

BLOCK_SIZE = 8192
PROTOCOLS = ("muub2", "lm05")

EM, CM = 0, 1
SAME, ROTATED = 0, 1
INCONCLUSIVE = -1

IY = 1j * Y
LM05_ENCODINGS = (I2, IY)
MUUB2_ENCODINGS = (I2, R)
ENCODING_NAMES = {"muub2": ("I", "R"), "lm05": ("I", "iY")}


@dataclass(frozen=True)
class NoiseSpec:
    """Channel noise on one path.

    ``rotation`` applies ``ry(value)`` to every qubit (the fixed-waveplate
    emulation of noise). ``depolarize`` replaces the qubit, with
    probability ``value``, by a uniformly random real-circle state.
    """

    kind: str = "none"
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "rotation", "depolarize"):
            raise ConfigError(f"unknown noise kind {self.kind!r}")
        if not math.isfinite(self.value):
            raise ConfigError("noise parameter must be finite")
        if self.kind == "depolarize" and not 0.0 <= self.value <= 1.0:
            raise ConfigError(f"depolarizing probability must be in [0, 1], got {self.value}")

    @classmethod
    def rotation(cls, delta: float) -> "NoiseSpec":
        return cls("rotation", delta)

    @classmethod
    def depolarize(cls, p: float) -> "NoiseSpec":
        return cls("depolarize", p)

    @classmethod
    def parse(cls, text: str) -> "NoiseSpec":
        """Parse ``none``, ``rot:<radians>`` or ``depol:<p>``."""
        text = text.strip()
        if text == "none":
            return cls()
        head, sep, tail = text.partition(":")
        if not sep:
            raise ConfigError(f"bad noise spec {text!r}")
        try:
            value = float(tail)
        except ValueError:
            raise ConfigError(f"bad noise parameter in {text!r}") from None
        if head == "rot":
            return cls.rotation(value)
        if head == "depol":
            return cls.depolarize(value)
        raise ConfigError(f"bad noise spec {text!r}")

    def __str__(self) -> str:
        if self.kind == "none":
            return "none"
        prefix = "rot" if self.kind == "rotation" else "depol"
        return f"{prefix}:{self.value!r}"


def apply_noise(state: np.ndarray, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.kind == "rotation":
        return ry(spec.value) @ state
    if spec.kind == "depolarize" and rng.random() < spec.value:
        return equator_state(rng.uniform(0.0, 2.0 * math.pi))
    return state


@dataclass(frozen=True)
class SessionConfig:
    n_pulses: int = 100_000
    control_prob: float = 0.5
    bases: tuple = (0.0, math.pi / 2)
    noise_forward: NoiseSpec = field(default_factory=NoiseSpec)
    noise_backward: NoiseSpec = field(default_factory=NoiseSpec)
    attack: Optional[AttackParams] = None
    seed: int = 0
    protocol: str = "muub2"
    # Alice picks her CM basis at random and mismatched rounds are discarded.
    cm_random_basis: bool = False
    # Report sift_rate per pulse instead of per EM round.
    normalize_by_total: bool = False

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(float(b) for b in self.bases))
        if not isinstance(self.n_pulses, (int, np.integer)) or self.n_pulses < 1:
            raise ConfigError(f"n_pulses must be a positive integer, got {self.n_pulses!r}")
        if not 0.0 <= self.control_prob <= 1.0:
            raise ConfigError(f"control_prob must be in [0, 1], got {self.control_prob!r}")
        if not self.bases:
            raise ConfigError("at least one basis is required")
        for i, a in enumerate(self.bases):
            if not math.isfinite(a):
                raise ConfigError("basis angles must be finite")
            for b in self.bases[:i]:
                d = math.remainder(a - b, math.pi)
                if abs(d) < 1e-9:
                    raise ConfigError(f"bases {b!r} and {a!r} coincide modulo pi")
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")


def sift(prep_basis: float, prep_bit: int, meas_choice: int, outcome_bit: int) -> Optional[int]:
    """Bob's decoding rule for one encoding-mode round.

    Bob's measured state ``psi_b`` excludes an encoding ``U`` when
    ``<psi_b|U|psi_f> = 0``. The round is conclusive when exactly one of
    the two encodings is excluded and the key bit is that of the other.
    Returns the key bit, or ``None`` for an inconclusive round.

    A rotated measurement uses the basis ``{R|0^q>, R|1^q>}``.
    """
    kets = basis_states(prep_basis)
    psi_f = kets[prep_bit]
    psi_b = kets[outcome_bit] if meas_choice == SAME else R @ kets[outcome_bit]
    excluded = [abs(np.vdot(psi_b, u @ psi_f)) < 1e-9 for u in MUUB2_ENCODINGS]
    if sum(excluded) != 1:
        return None
    return 1 if excluded[0] else 0


@dataclass(frozen=True)
class SiftRecord:
    round: int
    mode: str
    prep_basis: float
    prep_bit: int
    alice_encoding: Optional[str]
    bob_meas_basis: str
    outcome_bit: int
    verdict: str
    key_bit: Optional[int]
    correct: Optional[bool]


LOG_COLUMNS = (
    "round", "mode", "theta", "prep_bit", "encoding", "meas_choice", "outcome", "verdict", "correct",
)


@dataclass(eq=False)
class RoundLog:
    """Per-round arrays for a whole session.

    ``verdict`` holds the key bit for conclusive EM rounds and -1 otherwise;
    ``used`` marks rounds contributing to an estimate (conclusive EM rounds,
    CM rounds whose basis matched).
    """

    protocol: str
    round: np.ndarray
    mode: np.ndarray
    basis_index: np.ndarray
    theta: np.ndarray
    prep_bit: np.ndarray
    encoding: np.ndarray
    meas_choice: np.ndarray
    outcome: np.ndarray
    verdict: np.ndarray
    used: np.ndarray
    error: np.ndarray

    def __len__(self) -> int:
        return len(self.round)

    @classmethod
    def concatenate(cls, logs: list["RoundLog"]) -> "RoundLog":
        names = [f for f in cls.__dataclass_fields__ if f != "protocol"]
        return cls(logs[0].protocol, **{n: np.concatenate([getattr(l, n) for l in logs]) for n in names})

    def records(self) -> Iterator[SiftRecord]:
        enc_names = ENCODING_NAMES[self.protocol]
        for i in range(len(self)):
            em = self.mode[i] == EM
            used = bool(self.used[i])
            if em:
                verdict = f"conclusive:{self.verdict[i]}" if used else "inconclusive"
                meas = "same" if self.meas_choice[i] == SAME else "rotated"
            else:
                verdict = "check" if used else "discarded"
                meas = "same" if used else "other"
            yield SiftRecord(
                round=int(self.round[i]),
                mode="EM" if em else "CM",
                prep_basis=float(self.theta[i]),
                prep_bit=int(self.prep_bit[i]),
                alice_encoding=enc_names[self.encoding[i]] if em else None,
                bob_meas_basis=meas,
                outcome_bit=int(self.outcome[i]),
                verdict=verdict,
                key_bit=int(self.verdict[i]) if em and used else None,
                correct=(not bool(self.error[i])) if used else None,
            )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(LOG_COLUMNS)
        for r in self.records():
            w.writerow([
                r.round,
                r.mode,
                f"{r.prep_basis:.9g}",
                r.prep_bit,
                r.alice_encoding or "-",
                r.bob_meas_basis,
                r.outcome_bit,
                r.verdict,
                "-" if r.correct is None else int(r.correct),
            ])
        return buf.getvalue()


@dataclass(frozen=True)
class SessionStats:
    """Counts from a session; rates are derived from them.

    Adding two stats objects of the same protocol merges their counts.
    """

    protocol: str
    n_pulses: int
    n_em: int
    n_cm: int
    n_cm_checked: int
    n_cm_errors: int
    n_conclusive: int
    n_conclusive_errors: int
    cm_checked_by_basis: tuple
    cm_errors_by_basis: tuple
    normalize_by_total: bool = False

    @property
    def n_inconclusive(self) -> int:
        return self.n_em - self.n_conclusive

    @property
    def n_cm_discarded(self) -> int:
        return self.n_cm - self.n_cm_checked

    @property
    def q_hat(self) -> float:
        return self.n_cm_errors / self.n_cm_checked if self.n_cm_checked else 0.0

    @property
    def q_ab_hat(self) -> float:
        return self.n_conclusive_errors / self.n_conclusive if self.n_conclusive else 0.0

    @property
    def sift_rate(self) -> float:
        denom = self.n_pulses if self.normalize_by_total else self.n_em
        return self.n_conclusive / denom if denom else 0.0

    def __add__(self, other: "SessionStats") -> "SessionStats":
        if (self.protocol, self.normalize_by_total) != (other.protocol, other.normalize_by_total):
            raise ValueError("cannot merge stats from different protocols or normalizations")
        if len(self.cm_checked_by_basis) != len(other.cm_checked_by_basis):
            raise ValueError("cannot merge stats over different basis sets")
        counts = {
            k: getattr(self, k) + getattr(other, k)
            for k in ("n_pulses", "n_em", "n_cm", "n_cm_checked", "n_cm_errors",
                      "n_conclusive", "n_conclusive_errors")
        }
        return SessionStats(
            protocol=self.protocol,
            cm_checked_by_basis=tuple(a + b for a, b in zip(self.cm_checked_by_basis, other.cm_checked_by_basis)),
            cm_errors_by_basis=tuple(a + b for a, b in zip(self.cm_errors_by_basis, other.cm_errors_by_basis)),
            normalize_by_total=self.normalize_by_total,
            **counts,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["cm_checked_by_basis"] = list(self.cm_checked_by_basis)
        d["cm_errors_by_basis"] = list(self.cm_errors_by_basis)
        d.update(
            n_inconclusive=self.n_inconclusive,
            n_cm_discarded=self.n_cm_discarded,
            q_hat=self.q_hat,
            q_ab_hat=self.q_ab_hat,
            sift_rate=self.sift_rate,
        )
        return d


def summarize(log: RoundLog, config: SessionConfig) -> SessionStats:
    em = log.mode == EM
    cm = ~em
    checked = cm & log.used
    conclusive = em & log.used
    nb = len(config.bases)
    return SessionStats(
        protocol=log.protocol,
        n_pulses=len(log),
        n_em=int(em.sum()),
        n_cm=int(cm.sum()),
        n_cm_checked=int(checked.sum()),
        n_cm_errors=int((checked & log.error).sum()),
        n_conclusive=int(conclusive.sum()),
        n_conclusive_errors=int((conclusive & log.error).sum()),
        cm_checked_by_basis=tuple(int(v) for v in np.bincount(log.basis_index[checked], minlength=nb)),
        cm_errors_by_basis=tuple(
            int(v) for v in np.bincount(log.basis_index[checked & log.error], minlength=nb)
        ),
        normalize_by_total=config.normalize_by_total,
    )


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(block,)))


def _kets(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.stack([c, s], axis=-1).astype(complex), np.stack([s, -c], axis=-1).astype(complex)


def _circle_states(angle: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(angle / 2), np.sin(angle / 2)], axis=-1).astype(complex)


def _sample(p0: np.ndarray, u: np.ndarray) -> np.ndarray:
    return (u >= snap_probability(p0)).astype(np.int8)


def simulate_block(config: SessionConfig, block: int) -> RoundLog:
    """Simulate rounds ``[block * BLOCK_SIZE, ...)`` of a session."""
    start = block * BLOCK_SIZE
    n = min(BLOCK_SIZE, config.n_pulses - start)
    if n <= 0:
        raise ValueError(f"block {block} is beyond the session")
    rng = _block_rng(config.seed, block)
    bases = np.asarray(config.bases)
    nb = len(bases)

    # fixed draw order; every round consumes the same variates whatever its mode
    u_mode = rng.random(n)
    basis_idx = rng.integers(nb, size=n)
    prep_bit = rng.integers(2, size=n, dtype=np.int8)
    encoding = rng.integers(2, size=n, dtype=np.int8)
    meas_choice = rng.integers(2, size=n, dtype=np.int8)
    alice_idx = rng.integers(nb, size=n)
    fwd_hit, fwd_angle = rng.random(n), rng.uniform(0.0, 2 * math.pi, n)
    bwd_hit, bwd_angle = rng.random(n), rng.uniform(0.0, 2 * math.pi, n)
    u_alice = rng.random(n)
    u_bob = rng.random(n)

    mode = np.where(u_mode < config.control_prob, CM, EM).astype(np.int8)
    theta = bases[basis_idx]
    k0, k1 = _kets(theta)
    psi = np.where(prep_bit[:, None] == 1, k1, k0)

    # forward path
    fwd = config.noise_forward
    if fwd.kind == "rotation":
        psi = psi @ ry(fwd.value).T
    elif fwd.kind == "depolarize":
        psi = np.where((fwd_hit < fwd.value)[:, None], _circle_states(fwd_angle), psi)
    if config.attack is not None:
        joint = attack_forward(psi, build_ancillas(config.attack))
    else:
        joint = psi[:, :, None]

    # control mode: Alice measures
    if config.cm_random_basis:
        a0, _ = _kets(bases[alice_idx])
        cm_match = alice_idx == basis_idx
    else:
        a0 = k0
        cm_match = np.ones(n, dtype=bool)
    cm_outcome = _sample(outcome_probability(a0, joint), u_alice)

    # encoding mode: Alice encodes, Bob decodes
    table = MUUB2_ENCODINGS if config.protocol == "muub2" else LM05_ENCODINGS
    back = apply_qubit(np.where(encoding[:, None, None] == 1, table[1], table[0]), joint)
    bwd = config.noise_backward
    if bwd.kind == "rotation":
        back = apply_qubit(ry(bwd.value), back)
    if config.protocol == "muub2":
        m0 = np.where(meas_choice[:, None] == SAME, k0, k0 @ R.T)
    else:
        m0 = k0
        meas_choice = np.full(n, SAME, dtype=np.int8)
    p0 = outcome_probability(m0, back)
    if bwd.kind == "depolarize":
        hit = bwd_hit < bwd.value
        p_rand = np.abs(np.sum(m0.conj() * _circle_states(bwd_angle), axis=-1)) ** 2
        p0 = np.where(hit, p_rand, p0)
    em_outcome = _sample(p0, u_bob)

    flipped = em_outcome != prep_bit
    if config.protocol == "muub2":
        em_used = flipped
        key_bit = np.where(meas_choice == SAME, 1, 0).astype(np.int8)
    else:
        em_used = np.ones(n, dtype=bool)
        key_bit = flipped.astype(np.int8)

    is_em = mode == EM
    outcome = np.where(is_em, em_outcome, cm_outcome).astype(np.int8)
    used = np.where(is_em, em_used, cm_match)
    verdict = np.where(is_em & em_used, key_bit, INCONCLUSIVE).astype(np.int8)
    error = np.where(is_em, key_bit != encoding, cm_outcome != prep_bit) & used
    return RoundLog(
        protocol=config.protocol,
        round=np.arange(start, start + n),
        mode=mode,
        basis_index=basis_idx,
        theta=theta,
        prep_bit=prep_bit,
        encoding=np.where(is_em, encoding, -1).astype(np.int8),
        meas_choice=np.where(is_em, meas_choice, -1).astype(np.int8),
        outcome=outcome,
        verdict=verdict,
        used=used,
        error=error,
    )


def n_blocks(config: SessionConfig) -> int:
    return -(-config.n_pulses // BLOCK_SIZE)


def simulate_rounds(config: SessionConfig) -> RoundLog:
    return RoundLog.concatenate([simulate_block(config, k) for k in range(n_blocks(config))])


def run_session(config: SessionConfig) -> SessionStats:
    """Run a full session and return its aggregate statistics.

    Deterministic in ``config`` (the seed included).
    """
    stats = None
    for k in range(n_blocks(config)):
        s = summarize(simulate_block(config, k), config)
        stats = s if stats is None else stats + s
    return stats


def run_lm05_session(config: SessionConfig) -> SessionStats:
    return run_session(replace(config, protocol="lm05"))
