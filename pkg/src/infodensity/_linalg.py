"""Shared dense linear-algebra helpers built on Cholesky factorizations.

Log-determinants are always taken from Cholesky factors, never from raw
determinant products, so they stay finite for large well-conditioned
matrices.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NotPositiveDefinite


def symmetrize(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def cholesky_lower(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Lower Cholesky factor of a symmetric matrix with explicit pivot checks.

    Every pivot (the Schur-complement diagonal before the square root) must
    exceed d * eps * max(diag); otherwise NotPositiveDefinite is raised with
    the failing pivot index. No jitter, no repair.
    """
    a = np.asarray(a, dtype=float)
    d = a.shape[0]
    threshold = d * np.finfo(float).eps * float(np.max(np.diagonal(a)))
    L = np.zeros_like(a)
    for j in range(d):
        pivot = a[j, j] - L[j, :j] @ L[j, :j]
        if not pivot > threshold:
            raise NotPositiveDefinite(
                f"{what} is not positive definite: pivot {pivot:.6g} at index {j} "
                f"is not above threshold {threshold:.6g}",
                pivot_index=j,
            )
        L[j, j] = np.sqrt(pivot)
        if j + 1 < d:
            L[j + 1 :, j] = (a[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def logdet_from_lower(L: np.ndarray) -> float:
    return 2.0 * float(np.sum(np.log(np.diagonal(L))))


def solve_pd_from_lower(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve (L L^T) x = b via two triangular solves."""
    y = solve_triangular(L, b, lower=True)
    return solve_triangular(L.T, y, lower=False)


def rel_close(a: float, b: float, tol: float) -> bool:
    """Mixed absolute/relative comparison: |a-b| <= tol * max(1, |a|, |b|)."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
