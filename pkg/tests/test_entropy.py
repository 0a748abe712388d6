import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import entropy as scipy_entropy

from muubqkd.entropy import binary_entropy, entropy_of_spectrum, von_neumann_entropy
from muubqkd.errors import DomainError


def test_binary_entropy_endpoints():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0


def test_binary_entropy_frozen_values():
    # frozen from scipy.stats.entropy([p, 1 - p], base=2)
    assert binary_entropy(0.8) == pytest.approx(0.7219280948873623, abs=1e-12)
    assert binary_entropy(0.1464466) == pytest.approx(0.6008759, abs=1e-6)
    assert binary_entropy(0.1) == pytest.approx(0.46899559358928117, abs=1e-12)


@given(st.floats(0.0, 1.0))
def test_binary_entropy_matches_scipy(p):
    assert binary_entropy(p) == pytest.approx(scipy_entropy([p, 1 - p], base=2), abs=1e-12)


def test_binary_entropy_vectorized():
    out = binary_entropy(np.array([0.0, 0.5, 1.0]))
    assert out.shape == (3,)
    assert np.allclose(out, [0, 1, 0])


@pytest.mark.parametrize("bad", [-0.1, 1.1, np.nan])
def test_binary_entropy_domain(bad):
    with pytest.raises(DomainError):
        binary_entropy(bad)


def test_von_neumann_examples():
    assert von_neumann_entropy(np.diag([1.0, 0, 0, 0])) == 0.0
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-12)


def test_von_neumann_rejects_invalid():
    with pytest.raises(DomainError):
        von_neumann_entropy(np.diag([1.1, -0.1]))
    with pytest.raises(DomainError):
        von_neumann_entropy(np.eye(2))
    with pytest.raises(DomainError):
        von_neumann_entropy(np.ones((2, 3)))


def test_von_neumann_random_density_matches_scipy():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    lam = np.linalg.eigvalsh(rho)
    assert von_neumann_entropy(rho) == pytest.approx(scipy_entropy(lam, base=2), abs=1e-10)


def test_spectrum_entropy_ignores_round_off_negatives():
    assert entropy_of_spectrum([0.5, 0.5, -1e-15]) == pytest.approx(1.0)
