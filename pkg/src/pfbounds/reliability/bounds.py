"""
A-priori bounds on the discretization error of failure probabilities.

Constants are named after the quantities they bound:

- c1: absolute error |P_f - P_f,h| <= c1 h^s from a Lipschitz constant C_L
- c21, c21_sharp, c22, c2: Lipschitz constants of the CDF of an affine-linear
  limit state, relative to the failure probability
- c3: distance between the exact and discretized limit surfaces per h^s
- c4: Gaussian measure of a thin shell around a half-space boundary
"""

import logging
from typing import Iterable, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import special

from ..core.errors import DegenerateGradientError, DomainError, StepSizeTooLargeError
from ..core.limit_state import LimitStateEvaluator, as_parameter_vector
from ..core.normal_tools import std_normal_cdf
from .form import FormResult

logger = logging.getLogger(__name__)


class DiscretizationSpec(BaseModel):
    """Error model |G - G_h| <= c_fe h^s."""

    h: float = Field(..., gt=0, description="Discretization parameter")
    s: float = Field(..., gt=0, description="Convergence order")
    c_fe: float = Field(..., gt=0, description="Error constant, possibly estimated")

    model_config = {"frozen": True}

    @property
    def h_s(self) -> float:
        return self.h**self.s

    def with_c_fe(self, c_fe: float) -> "DiscretizationSpec":
        return DiscretizationSpec(h=self.h, s=self.s, c_fe=c_fe)

    def validity_threshold(self, beta: float) -> float:
        """Largest h for which beta - c_fe h^s stays positive."""
        return (beta / self.c_fe) ** (1.0 / self.s)

    def check_interval(self, beta: float) -> None:
        """Raise unless -beta + c_fe h^s < 0."""
        if not beta - self.c_fe * self.h_s > 0.0:
            raise StepSizeTooLargeError(self.h, self.validity_threshold(max(beta, 0.0)))


class BoundReport(BaseModel):
    """All constants and assembled bounds for one discretization level."""

    beta_h: float
    beta: float
    n: int = Field(..., ge=1)
    h: float
    s: float
    c3: float = Field(..., gt=0)
    c21: float = Field(..., gt=0)
    c21_sharp: float = Field(..., gt=0)
    c22: float = Field(..., gt=0)
    c2: float = Field(..., gt=0)
    c4: float = Field(..., ge=1)
    bound_abs: float = Field(..., ge=0)
    bound_rel_form: float = Field(..., ge=0)
    p_form_h: float = Field(..., ge=0, le=1)

    @model_validator(mode="after")
    def _check_assembly(self):
        expected = self.c2 * self.c4 * self.h**self.s * self.p_form_h
        if not np.isclose(self.bound_abs, expected, rtol=1e-12, atol=0.0):
            raise ValueError("bound_abs must equal c2 * c4 * h^s * p_form_h")
        return self


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (np.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be > 0, got {value}")
    return value


def c1(c_l: float, spec: DiscretizationSpec, one_sided: bool = False) -> float:
    """
    Constant of the absolute error bound |P_f - P_f,h| <= c1 h^s.

    ``one_sided=True`` is the case G_h >= G (or G_h <= G) everywhere, where
    only one half of the band {|G| <= c_fe h^s} contributes.
    """
    c_l = _positive("C_L", c_l)
    factor = 1.0 if one_sided else 2.0
    return factor * c_l * spec.c_fe


def c21(beta: float, sigma: float, c_fe: float) -> float:
    """(beta/sigma^2 + 1/beta + 1/(beta sigma^2) + 1/beta^3) * c_fe."""
    beta, sigma, c_fe = _positive("beta", beta), _positive("sigma", sigma), _positive("C_FE", c_fe)
    s2 = sigma * sigma
    return (beta / s2 + 1.0 / beta + 1.0 / (beta * s2) + 1.0 / beta**3) * c_fe


def c21_sharp(beta: float, sigma: float, c_fe: float) -> float:
    """Counterpart of c21 built on the sharper CDF bounds; bounded as beta -> 0."""
    beta, sigma, c_fe = _positive("beta", beta), _positive("sigma", sigma), _positive("C_FE", c_fe)
    z = beta / sigma
    root4 = np.sqrt(4.0 + z * z)
    root2 = np.sqrt(2.0 + z * z)
    ratio = (root4 + z) / (root2 + z)
    inner = beta / sigma**2 + (beta / root2 + sigma) / (sigma**2 * root2 + beta * sigma)
    return float(ratio * inner * c_fe)


def c22(beta: float, sigma: float, spec: DiscretizationSpec) -> float:
    """
    Non-asymptotic Lipschitz constant; tends to c21 as h -> 0.

    Raises:
        StepSizeTooLargeError: beta - c_fe h^s <= 0
    """
    beta, sigma = _positive("beta", beta), _positive("sigma", sigma)
    spec.check_interval(beta)
    shift = spec.c_fe * spec.h_s
    s2 = sigma * sigma
    growth = np.exp((2.0 * beta * shift - shift * shift) / (2.0 * s2))
    return float((beta + 1.0 / beta) * (1.0 / s2 + 1.0 / (beta - shift) ** 2) * growth * spec.c_fe)


def c2(beta: float, sigma: float, spec: DiscretizationSpec) -> float:
    """c21 + c22."""
    return c21(beta, sigma, spec.c_fe) + c22(beta, sigma, spec)


def c4(n: int) -> float:
    """1 + sqrt(pi) Gamma((n+1)/2) / Gamma(n/2), and 1 for n = 1."""
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")
    n = int(n)
    if n == 1:
        return 1.0
    return float(1.0 + np.sqrt(np.pi) * np.exp(special.gammaln((n + 1) / 2.0) - special.gammaln(n / 2.0)))


def lipschitz_bound(beta: float, sigma: float, sharp: bool = False) -> float:
    """Upper bound on the local Lipschitz constant of the CDF of G = alpha^T U + beta at 0."""
    constant = c21_sharp(beta, sigma, 1.0) if sharp else c21(beta, sigma, 1.0)
    return constant * std_normal_cdf(-beta / sigma)


def linear_case_bound(
    beta: float,
    sigma: float,
    spec: DiscretizationSpec,
    sharp: bool = False,
    one_sided: bool = False,
) -> float:
    """Absolute error bound c1 h^s for an affine-linear limit state."""
    return c1(lipschitz_bound(beta, sigma, sharp), spec, one_sided) * spec.h_s


def estimate_c_fe(
    exact: LimitStateEvaluator,
    approx: LimitStateEvaluator,
    h: float,
    s: float,
    samples: int = 100,
    seed: int = 0,
    extra_points: Iterable = (),
) -> float:
    """Sampled max of |G - G_h| / h^s over standard-normal draws plus ``extra_points``."""
    rng = np.random.default_rng(seed)
    probe = rng.standard_normal((samples, exact.dimension))
    extra = [as_parameter_vector(p, exact.dimension) for p in extra_points]
    if extra:
        probe = np.vstack([probe, np.array(extra)])
    with np.errstate(over="ignore", invalid="ignore"):
        gap = np.abs(exact.evaluate_batch(probe) - approx.evaluate_batch(probe))
    gap = gap[np.isfinite(gap)]
    value = float(gap.max()) / h**s if gap.size else 0.0
    # |G - G_h| can vanish identically on the probe set, e.g. at nodes
    return max(value, np.finfo(float).tiny)


def estimate_c3(
    exact: LimitStateEvaluator,
    approx: LimitStateEvaluator,
    mlfp_h,
    nu_h: float = 1.0,
    mlfp=None,
    c_fe: Optional[float] = None,
    samples: int = 100,
    seed: int = 0,
) -> float:
    """
    Practical estimate of the surface-distance constant.

    c3 = C_FE * max_p ||grad G_h(p)|| / (nu_h^2 ||grad G(p)||^2) over the
    design points p in {mlfp_h, mlfp}. When the approximation does not declare
    C_FE it is estimated by ``estimate_c_fe`` on 100 standard-normal draws
    augmented with the same design points, where |G - G_h| is largest near
    the limit surface.

    Raises:
        DegenerateGradientError: The exact gradient vanishes at a design point
    """
    if not 0.0 < nu_h <= 1.0:
        raise DomainError(f"nu_h must lie in (0, 1], got {nu_h}")
    tag = approx.tag
    if tag.exact:
        raise DomainError("the approximate limit state must carry a discretization tag")

    points = [as_parameter_vector(mlfp_h, exact.dimension)]
    if mlfp is not None:
        points.append(as_parameter_vector(mlfp, exact.dimension))

    ratio = 0.0
    for point in points:
        grad = exact.gradient(point)
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm == 0.0:
            raise DegenerateGradientError(f"exact gradient vanishes at {point}")
        ratio = max(ratio, float(np.linalg.norm(approx.gradient(point))) / (nu_h**2 * grad_norm**2))

    if c_fe is None:
        c_fe = tag.c_fe
    if c_fe is None:
        c_fe = estimate_c_fe(exact, approx, tag.h, tag.s, samples, seed, points)
    logger.debug("c3 estimate for %s: C_FE=%.6g gradient ratio=%.6g", approx.name, c_fe, ratio)
    return c_fe * ratio


def assemble_bounds(
    form_h: FormResult,
    spec: DiscretizationSpec,
    c3: float,
    n: int,
    beta_exact: Optional[float] = None,
) -> BoundReport:
    """
    Assemble the relative bounds at one level.

    bound_abs = c2(b_h, 1, C_FE=c3) * c4(n) * h^s * P_f,h^FORM bounds
    |P_f - P_f,h|; bound_rel_form = c2(b, 1, C_FE=c3) * h^s bounds the relative
    error of the FORM probabilities. ``beta_exact`` defaults to b_h.

    Raises:
        StepSizeTooLargeError: b_h - c3 h^s <= 0
    """
    c3 = _positive("c3", c3)
    scaled = spec.with_c_fe(c3)
    beta_h = form_h.beta
    beta = beta_h if beta_exact is None else float(beta_exact)
    scaled.check_interval(beta_h)

    c21_value = c21(beta_h, 1.0, c3)
    c22_value = c22(beta_h, 1.0, scaled)
    c2_value = c21_value + c22_value
    c4_value = c4(n)
    return BoundReport(
        beta_h=beta_h,
        beta=beta,
        n=n,
        h=spec.h,
        s=spec.s,
        c3=c3,
        c21=c21_value,
        c21_sharp=c21_sharp(beta_h, 1.0, c3),
        c22=c22_value,
        c2=c2_value,
        c4=c4_value,
        bound_abs=c2_value * c4_value * spec.h_s * form_h.p_form,
        bound_rel_form=c2(beta, 1.0, scaled) * spec.h_s,
        p_form_h=form_h.p_form,
    )
