"""Reliability analysis: FORM, error-bound constants and probability estimators."""

from .form import FormResult, find_mlfp, mlfp_distance
from .bounds import (
    BoundReport,
    DiscretizationSpec,
    assemble_bounds,
    c1,
    c2,
    c21,
    c21_sharp,
    c22,
    c4,
    estimate_c3,
    estimate_c_fe,
    linear_case_bound,
    lipschitz_bound,
)
from .estimators import (
    EstimatorMethod,
    ProbabilityEstimate,
    band_probability_mc,
    monte_carlo,
    quadrature_pf,
    sis,
    sis_replicates,
    symmetric_difference_mc,
)

__all__ = [
    # FORM
    "FormResult",
    "find_mlfp",
    "mlfp_distance",
    # Bounds
    "DiscretizationSpec",
    "BoundReport",
    "c1",
    "c2",
    "c21",
    "c21_sharp",
    "c22",
    "c4",
    "lipschitz_bound",
    "linear_case_bound",
    "estimate_c_fe",
    "estimate_c3",
    "assemble_bounds",
    # Estimators
    "EstimatorMethod",
    "ProbabilityEstimate",
    "quadrature_pf",
    "monte_carlo",
    "symmetric_difference_mc",
    "band_probability_mc",
    "sis",
    "sis_replicates",
]
