"""Partitioned Gaussian model types and the coupling matrices derived from them.

A model is a mean vector, a positive-definite covariance, and a partition of
the coordinates into N >= 2 blocks. From it we build:

* the regression-coefficient blocks C_{m|n} = S_mn S_nn^{-1},
* the coupling matrix G = S * blockdiag(S_11..S_NN)^{-1} - I with
  exact-zero diagonal blocks (``GammaMatrix``),
* the quadratic-form kernel P = blockdiag(...)^{-1} - S^{-1} with
  S P = G (``PhiMatrix``),
* the correlation-normalized model, which shares G's spectrum.

All types are frozen dataclasses holding read-only arrays; every operation is
a pure function of its inputs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ._linalg import cholesky_lower, solve_pd_from_lower, symmetrize
from .errors import BadPartition, DimensionMismatch, NotPositiveDefinite, NotSymmetric, SameBlock

SYMMETRY_RTOL = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Partition:
    """Block sizes of a partition, with derived starting offsets.

    Blocks are indexed 0..n_blocks-1.
    """

    block_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.block_sizes)
        if len(sizes) < 2:
            raise BadPartition(f"need at least 2 blocks, got {len(sizes)}")
        if any(s < 1 for s in sizes):
            raise BadPartition(f"every block size must be >= 1, got {sizes}")
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def n_blocks(self) -> int:
        return len(self.block_sizes)

    @property
    def dimension(self) -> int:
        return sum(self.block_sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for s in self.block_sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    def block_slice(self, n: int) -> slice:
        if not 0 <= n < self.n_blocks:
            raise IndexError(f"block index {n} out of range for {self.n_blocks} blocks")
        start = self.offsets[n]
        return slice(start, start + self.block_sizes[n])


@dataclass(frozen=True)
class GaussianModel:
    """Validated partitioned Gaussian model (construct via ``validate_model``)."""

    mean: np.ndarray
    covariance: np.ndarray
    partition: Partition

    @property
    def dimension(self) -> int:
        return self.partition.dimension

    def covariance_block(self, m: int, n: int) -> np.ndarray:
        return self.covariance[self.partition.block_slice(m), self.partition.block_slice(n)]

    def diagonal_block(self, n: int) -> np.ndarray:
        return self.covariance_block(n, n)


@dataclass(frozen=True)
class GammaMatrix:
    """Coupling matrix with exact-zero diagonal blocks and its real spectrum.

    ``eigenvalues`` is sorted ascending; it is computed from a symmetric
    matrix similar to ``matrix``, so it is real and all entries exceed -1 for
    a valid model.
    """

    matrix: np.ndarray
    partition: Partition
    eigenvalues: np.ndarray

    def block(self, m: int, n: int) -> np.ndarray:
        return self.matrix[self.partition.block_slice(m), self.partition.block_slice(n)]


@dataclass(frozen=True)
class PhiMatrix:
    """Symmetric quadratic-form kernel satisfying covariance @ matrix = coupling."""

    matrix: np.ndarray


def validate_model(mean, covariance, block_sizes) -> GaussianModel:
    """Validate raw inputs and return a symmetrized, PD-checked model.

    Asymmetry up to a relative 1e-8 is repaired by averaging with the
    transpose; anything larger raises NotSymmetric. Positive definiteness is
    established by Cholesky pivots both for the full matrix and for every
    diagonal block.
    """
    cov = np.array(covariance, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise DimensionMismatch(f"covariance must be square, got shape {cov.shape}")
    d = cov.shape[0]
    mu = np.zeros(d) if mean is None else np.array(mean, dtype=float).reshape(-1)
    if mu.shape != (d,):
        raise DimensionMismatch(f"mean has length {mu.shape[0]}, covariance is {d}x{d}")

    partition = Partition(tuple(int(s) for s in block_sizes))
    if partition.dimension != d:
        raise BadPartition(
            f"block sizes {partition.block_sizes} sum to {partition.dimension}, "
            f"covariance is {d}x{d}"
        )

    scale = float(np.max(np.abs(cov))) if cov.size else 0.0
    asym = float(np.max(np.abs(cov - cov.T)))
    if scale > 0 and asym > SYMMETRY_RTOL * scale:
        raise NotSymmetric(
            f"covariance asymmetry {asym:.3g} exceeds {SYMMETRY_RTOL:g} * max|entry| = "
            f"{SYMMETRY_RTOL * scale:.3g}"
        )
    cov = symmetrize(cov)

    cholesky_lower(cov, what="covariance")
    model = GaussianModel(mean=_frozen(mu), covariance=_frozen(cov), partition=partition)
    for n in range(partition.n_blocks):
        try:
            cholesky_lower(model.diagonal_block(n), what=f"diagonal block {n}")
        except NotPositiveDefinite as exc:  # implied by full PD; asserted independently
            raise NotPositiveDefinite(
                f"diagonal block {n} failed positive definiteness: {exc}",
                pivot_index=exc.pivot_index,
            ) from exc
    return model


def regression_block(model: GaussianModel, m: int, n: int) -> np.ndarray:
    """Regression coefficients of block m on block n: S_mn S_nn^{-1}."""
    if m == n:
        raise SameBlock(f"regression block requires distinct blocks, got m = n = {m}")
    s_mn = model.covariance_block(m, n)
    L_nn = cholesky_lower(model.diagonal_block(n))
    # Solve S_nn X^T = S_mn^T, exploiting symmetry of S_nn.
    return solve_pd_from_lower(L_nn, s_mn.T).T


def compute_gamma(model: GaussianModel) -> GammaMatrix:
    """Assemble the coupling matrix from regression blocks.

    Diagonal blocks are written as exact zeros, making the trace exactly zero
    and keeping loop-enumeration cross-checks clean. Eigenvalues come from
    the symmetric similar matrix B G B^{-1} with B = blockdiag(S_nn^{-1/2}),
    which is real-symmetric by construction.
    """
    p = model.partition
    d = p.dimension
    g = np.zeros((d, d))
    for n in range(p.n_blocks):
        L_nn = cholesky_lower(model.diagonal_block(n))
        col = p.block_slice(n)
        # One solve gives S_{:,n} S_nn^{-1}; diagonal block overwritten below.
        g[:, col] = solve_pd_from_lower(L_nn, model.covariance[:, col].T).T
        g[col, col] = 0.0

    root, inv_root = _block_inverse_roots(model)
    similar = symmetrize(inv_root @ g @ root)
    eigenvalues = np.linalg.eigvalsh(similar)
    return GammaMatrix(matrix=_frozen(g), partition=p, eigenvalues=_frozen(eigenvalues))


def _block_inverse_roots(model: GaussianModel):
    """Block-diagonal symmetric square root of blockdiag(S_nn) and its inverse."""
    p = model.partition
    d = p.dimension
    root = np.zeros((d, d))
    inv_root = np.zeros((d, d))
    for n in range(p.n_blocks):
        w, v = np.linalg.eigh(model.diagonal_block(n))
        if w.min() <= 0:
            raise NotPositiveDefinite(
                f"diagonal block {n} has non-positive eigenvalue {w.min():.3g}"
            )
        sl = p.block_slice(n)
        root[sl, sl] = (v * np.sqrt(w)) @ v.T
        inv_root[sl, sl] = (v / np.sqrt(w)) @ v.T
    return root, inv_root


def compute_phi(model: GaussianModel) -> PhiMatrix:
    """Quadratic-form kernel, computed as S^{-1} G so that S P = G holds tightly.

    The result is symmetrized; it agrees with the definition
    blockdiag(S_nn)^{-1} - S^{-1} to within solver roundoff, and is exactly
    zero whenever the coupling matrix is exactly zero.
    """
    gamma = compute_gamma(model)
    L = cholesky_lower(model.covariance)
    phi = solve_pd_from_lower(L, gamma.matrix)
    return PhiMatrix(matrix=_frozen(symmetrize(phi)))


def to_correlation_model(model: GaussianModel):
    """Split the covariance into scale factors and a unit-diagonal model.

    Returns ``(scales, corr_model)`` where ``scales[k]`` is the standard
    deviation of coordinate k and ``corr_model`` has covariance
    R = D^{-1} S D^{-1} with the same partition. The coupling matrices of the
    two models are similar (G = D G~ D^{-1}), so they share eigenvalues, CGF,
    and cumulants.
    """
    scales = np.sqrt(np.diagonal(model.covariance))
    corr = model.covariance / np.outer(scales, scales)
    corr_model = validate_model(model.mean / scales, corr, model.partition.block_sizes)
    return _frozen(scales), corr_model


def model_fingerprint(model: GaussianModel) -> str:
    """Stable hex digest of (partition, mean, covariance).

    Hashes the little-endian IEEE-754 bytes of the symmetrized inputs, so the
    value is reproducible across runs and platforms.
    """
    h = hashlib.sha256()
    h.update(b"infodensity-model-v1")
    h.update(np.asarray(model.partition.block_sizes, dtype="<i8").tobytes())
    h.update(np.asarray(model.mean, dtype="<f8").tobytes())
    h.update(np.ascontiguousarray(model.covariance, dtype="<f8").tobytes())
    return h.hexdigest()
