"""Multiinformation, its density, the CGF with exact domain, and cumulants.

For a partitioned Gaussian model the log-ratio of the joint density to the
product of block marginals is

    value(x) = I + (x - mu)^T P (x - mu) / 2,

where I is the multiinformation and P the quadratic-form kernel. Its
cumulant-generating function is

    cgf(t) = t I - ln|I_d - t G| / 2,

finite exactly on the open interval where 1 - t*lambda > 0 for every
eigenvalue lambda of the coupling matrix G. Cumulants follow as
kappa_1 = I and kappa_l = (l-1)!/2 * sum(lambda^l) for l >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import logsumexp

from ._linalg import cholesky_lower, logdet_from_lower, solve_pd_from_lower
from .errors import CumulantOverflow, DimensionMismatch, EigenvalueOutOfRange, OutOfDomain
from .model import GammaMatrix, GaussianModel, compute_gamma, compute_phi

# (l-1)! stays exactly representable territory up to here; beyond, log-space.
_EXACT_FACTORIAL_MAX_ORDER = 20
_LOG_DBL_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class CumulantSequence:
    """Cumulants kappa_1..kappa_L in nats^l, 1-indexed via ``kappa``."""

    values: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.values)

    def kappa(self, l: int) -> float:
        if not 1 <= l <= self.order:
            raise IndexError(f"order {l} outside 1..{self.order}")
        return self.values[l - 1]


@dataclass(frozen=True)
class CgfDomain:
    """Open interval (lower, upper) on which the CGF is finite; 0 is interior."""

    lower: float
    upper: float

    def contains(self, t: float) -> bool:
        return self.lower < t < self.upper

    @property
    def half_width(self) -> float:
        """Half-width of the largest symmetric interval around 0 inside the domain."""
        return min(-self.lower, self.upper)


def multiinformation(model: GaussianModel) -> float:
    """Multiinformation in nats via Cholesky log-determinants.

    Equals (sum_n ln|S_nn| - ln|S|) / 2; zero iff the blocks are mutually
    independent.
    """
    logdet_full = logdet_from_lower(cholesky_lower(model.covariance))
    logdet_blocks = sum(
        logdet_from_lower(cholesky_lower(model.diagonal_block(n)))
        for n in range(model.partition.n_blocks)
    )
    return 0.5 * (logdet_blocks - logdet_full)


def multiinformation_from_gamma(gamma: GammaMatrix) -> float:
    """Multiinformation recovered from the coupling spectrum: -sum ln(1+lambda)/2."""
    lam = np.asarray(gamma.eigenvalues)
    if np.any(lam <= -1.0):
        raise EigenvalueOutOfRange(
            f"eigenvalue {lam.min():.6g} <= -1; not the spectrum of a valid coupling matrix"
        )
    return -0.5 * float(np.sum(np.log1p(lam)))


def density_at(model: GaussianModel, x) -> float:
    """Evaluate the multiinformation density at a point, in nats."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (model.dimension,):
        raise DimensionMismatch(f"point has length {x.shape[0]}, model dimension is {model.dimension}")
    phi = compute_phi(model).matrix
    r = x - model.mean
    return multiinformation(model) + 0.5 * float(r @ phi @ r)


def density_at_direct(model: GaussianModel, x) -> float:
    """Same quantity from its definition, ln f(x) - sum_n ln f_n(x_n).

    Independent of the quadratic-form path; used as its oracle.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (model.dimension,):
        raise DimensionMismatch(f"point has length {x.shape[0]}, model dimension is {model.dimension}")
    total = _gaussian_logpdf(x, model.mean, model.covariance)
    for n in range(model.partition.n_blocks):
        sl = model.partition.block_slice(n)
        total -= _gaussian_logpdf(x[sl], model.mean[sl], model.diagonal_block(n))
    return total


def _gaussian_logpdf(x, mean, cov) -> float:
    L = cholesky_lower(cov)
    y = solve_triangular(L, x - mean, lower=True)
    k = len(x)
    return -0.5 * (k * math.log(2.0 * math.pi) + logdet_from_lower(L) + float(y @ y))


def cgf_domain(gamma: GammaMatrix) -> CgfDomain:
    """Exact maximal open interval where the CGF is finite.

    1 - t*lambda must stay positive for every eigenvalue, so the upper end is
    1/lambda_max when lambda_max > 0 (else +inf) and the lower end 1/lambda_min
    when lambda_min < 0 (else -inf).
    """
    lam = np.asarray(gamma.eigenvalues)
    lam_max = float(lam.max())
    lam_min = float(lam.min())
    upper = 1.0 / lam_max if lam_max > 0 else math.inf
    lower = 1.0 / lam_min if lam_min < 0 else -math.inf
    return CgfDomain(lower=lower, upper=upper)


def cgf(model: GaussianModel, t: float, gamma: GammaMatrix | None = None) -> float:
    """Cumulant-generating function of the density at t, in nats.

    Evaluated as t*I - sum(ln(1 - t*lambda))/2 over the coupling spectrum.
    Raises OutOfDomain for t on or outside the boundary of the finite range.
    """
    if gamma is None:
        gamma = compute_gamma(model)
    domain = cgf_domain(gamma)
    if not domain.contains(t):
        raise OutOfDomain(t, domain)
    lam = np.asarray(gamma.eigenvalues)
    return t * multiinformation(model) - 0.5 * float(np.sum(np.log1p(-t * lam)))


def cumulants(model: GaussianModel, order: int, gamma: GammaMatrix | None = None) -> CumulantSequence:
    """Cumulants of the density up to the requested order.

    kappa_1 is the multiinformation; higher orders use the eigenvalue power
    sums of the coupling matrix. Factorials switch to log-space beyond order
    20, and an order whose magnitude bound (l-1)! * sum|lambda|^l exceeds the
    double range raises CumulantOverflow rather than saturating.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if gamma is None:
        gamma = compute_gamma(model)
    lam = np.asarray(gamma.eigenvalues)
    values = [multiinformation(model)]
    abs_lam = np.abs(lam)
    nonzero = abs_lam > 0.0
    log_abs = np.log(abs_lam[nonzero]) if np.any(nonzero) else None
    for l in range(2, order + 1):
        values.append(_kappa_from_spectrum(lam, log_abs, l))
    return CumulantSequence(values=tuple(values))


def _kappa_from_spectrum(lam: np.ndarray, log_abs: np.ndarray | None, l: int) -> float:
    if log_abs is None:
        return 0.0
    log_bound = math.lgamma(l) - math.log(2.0) + float(logsumexp(l * log_abs))
    if log_bound > _LOG_DBL_MAX:
        raise CumulantOverflow(l)
    if l <= _EXACT_FACTORIAL_MAX_ORDER:
        return math.factorial(l - 1) / 2.0 * float(np.sum(lam**l))
    power_sum = float(np.sum(lam**l))
    if power_sum == 0.0:
        return 0.0
    magnitude = math.exp(math.lgamma(l) - math.log(2.0) + math.log(abs(power_sum)))
    return math.copysign(magnitude, power_sum)


def variance(model: GaussianModel) -> float:
    """Variance of the density from the pairwise block sum.

    sum_{m<n} tr(S_mn S_nn^{-1} S_nm S_mm^{-1}), i.e. the trace of the
    product of the two opposing regression blocks for every pair. Equals
    tr(G^2)/2 and the second cumulant.
    """
    p = model.partition
    # reg_cols[n] holds S_{:,n} S_nn^{-1}; its m-th block of rows is the
    # regression block of m on n, so one solve per block serves every pair.
    reg_cols = []
    for n in range(p.n_blocks):
        L_nn = cholesky_lower(model.diagonal_block(n))
        col = p.block_slice(n)
        reg_cols.append(solve_pd_from_lower(L_nn, model.covariance[:, col].T).T)
    total = 0.0
    for m in range(p.n_blocks):
        row_m = p.block_slice(m)
        for n in range(m + 1, p.n_blocks):
            reg_mn = reg_cols[n][row_m]
            reg_nm = reg_cols[m][p.block_slice(n)]
            total += float(np.sum(reg_mn * reg_nm.T))  # tr(reg_mn @ reg_nm)
    return total


def cgf_numeric_cumulants(model: GaussianModel, order: int, step: float | None = None) -> CumulantSequence:
    """Finite-difference cumulant estimates from the CGF at 0 (cross-check oracle).

    Order l uses the minimal central stencil of l+1 points (integer offsets
    for even l, half-integer for odd l), accurate to O(step^2). The default
    step is 1e-3 times the smaller of 1 and the symmetric half-width of the
    CGF domain. OutOfDomain is raised when a stencil node would leave the
    domain.
    """
    if not 1 <= order <= 6:
        raise ValueError(f"order must be in 1..6, got {order}")
    gamma = compute_gamma(model)
    domain = cgf_domain(gamma)
    if step is None:
        step = 1e-3 * min(1.0, domain.half_width)
    values = []
    for l in range(1, order + 1):
        reach = (l / 2.0) * step
        if not (domain.contains(reach) and domain.contains(-reach)):
            raise OutOfDomain(reach, domain)
        acc = 0.0
        for k in range(l + 1):
            node = (l / 2.0 - k) * step
            acc += (-1.0) ** k * math.comb(l, k) * cgf(model, node, gamma=gamma)
        values.append(acc / step**l)
    return CumulantSequence(values=tuple(values))
