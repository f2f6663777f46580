"""pfbounds - Discretization error bounds for rare-event failure probabilities."""

__version__ = "0.1.0"
__author__ = "pfbounds developers"

# Export main APIs
from .core import (
    LimitStateEvaluator,
    LinearGaussianLsf,
    OdeScheme,
    SchemeKind,
    build_kle,
    make_bvp2d_lsf,
    make_diffusion_lsf,
    make_ode_lsf,
)
from .reliability import (
    DiscretizationSpec,
    assemble_bounds,
    estimate_c3,
    find_mlfp,
    monte_carlo,
    quadrature_pf,
    sis,
)
from .utils import RunConfig, fit_order, load_config

__all__ = [
    # Core
    "LimitStateEvaluator",
    "LinearGaussianLsf",
    "OdeScheme",
    "SchemeKind",
    "build_kle",
    "make_ode_lsf",
    "make_bvp2d_lsf",
    "make_diffusion_lsf",
    # Reliability
    "find_mlfp",
    "DiscretizationSpec",
    "estimate_c3",
    "assemble_bounds",
    "quadrature_pf",
    "monte_carlo",
    "sis",
    # Utils
    "RunConfig",
    "load_config",
    "fit_order",
]
