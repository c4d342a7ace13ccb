"""Dyck paths, pattern-avoiding permutations, and the excursion limit laws of
their fixed-point statistics: exact combinatorics plus a Monte Carlo harness."""

__version__ = "0.1.0"

from .combinatorics import (
    SegmentSpec,
    catalan,
    count_segment,
    gaussian_binomial_estimate,
    prob_fixed_asymptotic,
    prob_fixed_exact,
    prob_height_at,
)
from .dyck import (
    DyckPath,
    ExcursionDecomposition,
    RegularityReport,
    decompose,
    enumerate_paths,
    height,
    local_min_at_center,
    regularity_check,
    sample_uniform,
)
from .excursion import (
    ExcursionSample,
    limit_functional_F,
    marginal_cdf,
    marginal_density,
    path_functional,
    sample_excursion,
)
from .fixedpoints import (
    EmpiricalMeasure,
    FixedPointProfile123,
    fixed_points,
    profile_123,
    predict_lower_fixed_point,
    scaled_fp_measure_123,
    scaled_fp_measure_231,
    theta_almost,
    theta_interval,
)
from .permutations import (
    PatternViolation,
    Permutation,
    bjs,
    complement,
    contains,
    enumerate_avoiders,
    find_pattern,
    invert_231,
    reverse_complement,
    to_231,
)

__all__ = [
    "__version__",
    "catalan",
    "SegmentSpec",
    "count_segment",
    "gaussian_binomial_estimate",
    "prob_height_at",
    "prob_fixed_exact",
    "prob_fixed_asymptotic",
    "DyckPath",
    "ExcursionDecomposition",
    "RegularityReport",
    "sample_uniform",
    "enumerate_paths",
    "decompose",
    "height",
    "local_min_at_center",
    "regularity_check",
    "Permutation",
    "PatternViolation",
    "contains",
    "find_pattern",
    "enumerate_avoiders",
    "bjs",
    "to_231",
    "invert_231",
    "complement",
    "reverse_complement",
    "FixedPointProfile123",
    "EmpiricalMeasure",
    "fixed_points",
    "theta_interval",
    "theta_almost",
    "profile_123",
    "predict_lower_fixed_point",
    "scaled_fp_measure_231",
    "scaled_fp_measure_123",
    "ExcursionSample",
    "sample_excursion",
    "marginal_density",
    "marginal_cdf",
    "limit_functional_F",
    "path_functional",
]
