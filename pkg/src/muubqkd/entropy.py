"""Shannon and von Neumann entropies in bits."""
from __future__ import annotations

import numpy as np

from .errors import DomainError

PSD_TOL = 1e-9
TRACE_TOL = 1e-9
CLIP_TOL = 1e-12


def binary_entropy(p):
    """``h(p) = -p log2 p - (1-p) log2 (1-p)`` with ``0 log 0 = 0``.

    Accepts a scalar or an array; returns the same shape.

    >>> binary_entropy(0.5)
    1.0
    """
    arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("binary_entropy requires probabilities in [0, 1]")
    out = np.zeros_like(arr)
    inner = (arr > 0.0) & (arr < 1.0)
    q = arr[inner]
    out[inner] = -q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q)
    return float(out) if out.ndim == 0 else out


def entropy_of_spectrum(eigenvalues) -> float:
    """``-sum(l log2 l)`` over a probability spectrum; tiny negatives are clipped."""
    lam = np.asarray(eigenvalues, dtype=float)
    lam = np.where(lam < CLIP_TOL, 0.0, lam)
    nz = lam[lam > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def von_neumann_entropy(matrix) -> float:
    """Von Neumann entropy of a density (or Gram) matrix.

    Raises:
        DomainError: the matrix is not square and Hermitian, has an
            eigenvalue below ``-1e-9``, or a trace away from 1 by more
            than ``1e-9``.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.allclose(m, m.conj().T, rtol=0.0, atol=PSD_TOL):
        raise DomainError("matrix is not Hermitian")
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise DomainError(f"trace must be 1, got {tr!r}")
    lam = np.linalg.eigvalsh(m)
    if lam.min() < -PSD_TOL:
        raise DomainError(f"matrix has negative eigenvalue {lam.min()!r}")
    return entropy_of_spectrum(lam)
