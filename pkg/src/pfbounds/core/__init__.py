"""Core numerics: normal distribution, random field, solvers, limit states."""

from .errors import (
    PfBoundsError,
    DomainError,
    KleConstructionError,
    EllipticityError,
    AssemblyError,
    SingularityError,
    GradientError,
    DegenerateGradientError,
    PreconditionError,
    StepSizeTooLargeError,
    ConvergenceError,
    FitError,
    ExperimentStageError,
)
from .normal_tools import (
    GaussianScalar,
    std_normal_pdf,
    std_normal_cdf,
    std_normal_quantile,
    cdf_bounds_gordon,
    cdf_bounds_sharp,
)
from .random_field import ExpCovKle, DiffusionKind, build_kle, field_value, diffusion_value
from .fem1d import (
    Mesh1D,
    FemSolution,
    BandedSystem,
    assemble_system,
    solve,
    flux,
    point_value,
    zero_load_right_flux,
)
from .ode_steppers import SchemeKind, OdeScheme, integrate_to_one, mlfp_closed_form, oscillating_branch
from .limit_state import (
    DiscretizationTag,
    LimitStateEvaluator,
    LinearGaussianLsf,
    OdeLsf,
    Bvp2dLsf,
    DiffusionLsf,
    as_parameter_vector,
    make_ode_lsf,
    make_bvp2d_lsf,
    make_diffusion_lsf,
    fd_gradient,
)

__all__ = [
    "PfBoundsError",
    "DomainError",
    "KleConstructionError",
    "EllipticityError",
    "AssemblyError",
    "SingularityError",
    "GradientError",
    "DegenerateGradientError",
    "PreconditionError",
    "StepSizeTooLargeError",
    "ConvergenceError",
    "FitError",
    "ExperimentStageError",
    "GaussianScalar",
    "std_normal_pdf",
    "std_normal_cdf",
    "std_normal_quantile",
    "cdf_bounds_gordon",
    "cdf_bounds_sharp",
    "ExpCovKle",
    "DiffusionKind",
    "build_kle",
    "field_value",
    "diffusion_value",
    "Mesh1D",
    "FemSolution",
    "BandedSystem",
    "assemble_system",
    "solve",
    "flux",
    "point_value",
    "zero_load_right_flux",
    "SchemeKind",
    "OdeScheme",
    "integrate_to_one",
    "mlfp_closed_form",
    "oscillating_branch",
    "DiscretizationTag",
    "LimitStateEvaluator",
    "LinearGaussianLsf",
    "OdeLsf",
    "Bvp2dLsf",
    "DiffusionLsf",
    "as_parameter_vector",
    "make_ode_lsf",
    "make_bvp2d_lsf",
    "make_diffusion_lsf",
    "fd_gradient",
]
