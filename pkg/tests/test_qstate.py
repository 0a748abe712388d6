import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from muubqkd.errors import DomainError
from muubqkd.qstate import (
    I2,
    R,
    Y,
    EquatorBasis,
    basis_states,
    encode_overlap,
    encode_overlap_closed,
    is_unitary,
    ket,
    measure,
    muub_overlap,
    ry,
    same_up_to_phase,
)

angles = st.floats(-4 * math.pi, 4 * math.pi, allow_nan=False)
S = 1 / math.sqrt(2)


def ry_expm(zeta):
    return scipy.linalg.expm(-0.5j * zeta * Y)


def test_ry_zero_is_identity():
    assert np.allclose(ry(0.0), I2, atol=1e-15)


def test_ry_minus_half_pi_examples():
    # hand-evaluated: ry(-pi/2) = [[1, 1], [-1, 1]] / sqrt(2)
    assert np.allclose(ry(-math.pi / 2) @ [1, 0], [S, -S], atol=1e-12)
    assert np.allclose(ry(-math.pi / 2) @ [S, S], [1, 0], atol=1e-12)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_ry_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        ry(bad)


def test_ry_matches_matrix_exponential():
    for zeta in np.linspace(-2 * math.pi, 2 * math.pi, 37):
        assert np.allclose(ry(zeta), ry_expm(zeta), atol=1e-12)


def test_ry_unitary_sweep():
    for zeta in np.linspace(-3 * math.pi, 3 * math.pi, 100):
        u = ry(zeta)
        assert np.allclose(u.conj().T @ u, I2, rtol=0, atol=1e-12)


@given(angles, angles)
def test_ry_composition(a, b):
    assert np.allclose(ry(a) @ ry(b), ry(a + b), rtol=0, atol=1e-12)


def test_basis_states_examples():
    k0, k1 = basis_states(0.0)
    assert np.allclose(k0, [1, 0]) and np.allclose(k1, [0, -1])
    k0, k1 = basis_states(math.pi / 2)
    assert np.allclose(k0, [S, S]) and np.allclose(k1, [S, -S])


@given(angles)
def test_basis_states_orthonormal(theta):
    k0, k1 = EquatorBasis(theta).states
    assert abs(np.vdot(k0, k1)) < 1e-12
    assert abs(np.vdot(k0, k0) - 1) < 1e-12 and abs(np.vdot(k1, k1) - 1) < 1e-12


@given(angles, angles)
def test_ry_moves_basis_angle(theta, zeta):
    # ry(zeta) takes the theta basis to the theta + zeta basis, labels kept
    for a, b in zip(basis_states(theta), basis_states(theta + zeta)):
        assert np.allclose(ry(zeta) @ a, b, atol=1e-12)


def test_muub_overlap_examples():
    assert muub_overlap(I2, ry(-math.pi / 2)) == pytest.approx(2.0, abs=1e-12)
    assert muub_overlap(Y, ry(-math.pi / 2)) == pytest.approx(2.0, abs=1e-12)
    assert muub_overlap(I2, I2) == pytest.approx(4.0, abs=1e-12)


def test_muub_constant_over_all_pairs():
    for u in (I2, Y):
        for z in (math.pi / 2, -math.pi / 2):
            assert abs(muub_overlap(u, ry(z)) - 2.0) < 1e-12


def test_muub_overlap_rejects_non_unitary():
    with pytest.raises(DomainError):
        muub_overlap(2 * I2, I2)
    assert not is_unitary(np.ones((2, 2)))


def test_encode_overlap_examples():
    for theta in np.linspace(0, 2 * math.pi, 9):
        assert encode_overlap(theta, 0.0) == pytest.approx(0.5, abs=1e-12)
    assert encode_overlap(math.pi / 2, math.pi / 2) == pytest.approx(1.0, abs=1e-12)


def test_encode_overlap_closed_form_random():
    rng = np.random.default_rng(20)
    for theta, phi in rng.uniform(-math.pi, math.pi, size=(1000, 2)):
        psi = np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])
        direct = abs(psi.conj() @ ry_expm(-math.pi / 2) @ psi) ** 2
        assert abs(encode_overlap(theta, phi) - direct) < 1e-12
        assert abs(encode_overlap_closed(theta, phi) - direct) < 1e-12


def test_ket_validates_norm():
    assert np.allclose(ket(S, S), [S, S])
    with pytest.raises(DomainError):
        ket(1, 1)


def test_same_up_to_phase():
    k0, _ = basis_states(0.3)
    assert same_up_to_phase(k0, np.exp(0.7j) * k0)
    assert not same_up_to_phase(k0, basis_states(0.3)[1])


def _freq(state, theta, n, seed):
    rng = np.random.default_rng(seed)
    basis = EquatorBasis(theta)
    return sum(measure(state, basis, rng) for _ in range(n)) / n


def test_measure_eigenstate_is_deterministic():
    rng = np.random.default_rng(1)
    assert all(measure(np.array([1, 0], complex), EquatorBasis(0.0), rng) == 0 for _ in range(1000))


@pytest.mark.parametrize(
    "state, theta",
    [
        (np.array([1, 0], complex), math.pi / 2),
        (R @ np.array([1, 0], complex), 0.0),
    ],
)
def test_measure_unbiased_frequencies(state, theta):
    n = 100_000
    f1 = _freq(state, theta, n, seed=5)
    assert abs(f1 - 0.5) <= 3 * math.sqrt(0.25 / n)


def test_measure_is_reproducible():
    state = R @ np.array([1, 0], complex)
    assert _freq(state, 0.0, 500, seed=9) == _freq(state, 0.0, 500, seed=9)
