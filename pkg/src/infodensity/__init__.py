"""Exact cumulant analysis of the multiinformation density of partitioned
Gaussian models, validated by loop enumeration, matrix powers, finite
differences, and seeded Monte Carlo."""

from .errors import (
    BadPartition,
    BatchTooSmall,
    BlockNotScalar,
    CombinatorialLimit,
    CumulantOverflow,
    DimensionMismatch,
    EigenvalueOutOfRange,
    InfoDensityError,
    NotPositiveDefinite,
    NotSymmetric,
    OutOfDomain,
    SameBlock,
    ZeroVariance,
)
from .homogeneous import (
    HomogeneousModel,
    asymptotic_standardized_limit,
    homogeneous_covariance,
    homogeneous_cumulant,
    homogeneous_gamma_power,
    homogeneous_mean,
    normality_diagnostic,
    standardized_cumulant,
)
from .loops import (
    DEFAULT_LOOP_CAP,
    DirectedLoop,
    enumerate_loops,
    iter_loops,
    loop_trace,
    rooted_loop_count,
    trace_via_loops,
)
from .measures import (
    CgfDomain,
    CumulantSequence,
    cgf,
    cgf_domain,
    cgf_numeric_cumulants,
    cumulants,
    density_at,
    density_at_direct,
    multiinformation,
    multiinformation_from_gamma,
    variance,
)
from .model import (
    GammaMatrix,
    GaussianModel,
    Partition,
    PhiMatrix,
    compute_gamma,
    compute_phi,
    model_fingerprint,
    regression_block,
    to_correlation_model,
    validate_model,
)
from .sampling import (
    KStatistics,
    SampleBatch,
    k_statistics,
    kstat_sampling_variances,
    mc_validate,
    sample_density,
)
from .two_block import (
    CanonicalSpectrum,
    TwoBlockModel,
    as_two_block,
    block_chain_traces,
    canonical_correlations,
    multiple_correlation,
    scalar_pair_cgf,
    two_block_trace,
)

__version__ = "0.1.0"

__all__ = [
    "BadPartition",
    "BatchTooSmall",
    "BlockNotScalar",
    "CanonicalSpectrum",
    "CgfDomain",
    "CombinatorialLimit",
    "CumulantOverflow",
    "CumulantSequence",
    "DEFAULT_LOOP_CAP",
    "DimensionMismatch",
    "DirectedLoop",
    "EigenvalueOutOfRange",
    "GammaMatrix",
    "GaussianModel",
    "HomogeneousModel",
    "InfoDensityError",
    "KStatistics",
    "NotPositiveDefinite",
    "NotSymmetric",
    "OutOfDomain",
    "Partition",
    "PhiMatrix",
    "SameBlock",
    "SampleBatch",
    "TwoBlockModel",
    "ZeroVariance",
    "as_two_block",
    "asymptotic_standardized_limit",
    "block_chain_traces",
    "canonical_correlations",
    "cgf",
    "cgf_domain",
    "cgf_numeric_cumulants",
    "compute_gamma",
    "compute_phi",
    "cumulants",
    "density_at",
    "density_at_direct",
    "enumerate_loops",
    "homogeneous_covariance",
    "homogeneous_cumulant",
    "homogeneous_gamma_power",
    "homogeneous_mean",
    "iter_loops",
    "k_statistics",
    "kstat_sampling_variances",
    "loop_trace",
    "mc_validate",
    "model_fingerprint",
    "multiinformation",
    "multiinformation_from_gamma",
    "multiple_correlation",
    "normality_diagnostic",
    "regression_block",
    "rooted_loop_count",
    "sample_density",
    "scalar_pair_cgf",
    "standardized_cumulant",
    "to_correlation_model",
    "trace_via_loops",
    "two_block_trace",
    "validate_model",
    "variance",
]
