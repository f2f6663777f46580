"""
Limit-state functions G (exact) and G_h (discretized) in standard-normal space.

Failure is the event G(u) <= 0. Each evaluator carries a DiscretizationTag
(h, s, C_FE) that the bound computations read.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DomainError, GradientError
from .fem1d import Mesh1D, point_value, solve, zero_load_right_flux, flux
from .normal_tools import std_normal_cdf
from .ode_steppers import OdeScheme, integrate_to_one, mlfp_closed_form, oscillating_branch
from .random_field import DiffusionKind, ExpCovKle, diffusion_value

logger = logging.getLogger(__name__)

FD_STEP = 1e-5

# Keeps (batch x quadrature points) arrays of the diffusion model near 32 MB
_MAX_BATCH_VALUES = 4_000_000


def as_parameter_vector(u, n: Optional[int] = None) -> np.ndarray:
    """Validate and convert to a finite float64 vector of length n."""
    u_arr = np.asarray(u, dtype=float).reshape(-1)
    if u_arr.size < 1 or not np.all(np.isfinite(u_arr)):
        raise DomainError(f"parameter vector must be non-empty and finite, got {u!r}")
    if n is not None and u_arr.size != n:
        raise DomainError(f"parameter vector has dimension {u_arr.size}, expected {n}")
    return u_arr


def _as_batch(U, n: int) -> np.ndarray:
    U_arr = np.asarray(U, dtype=float)
    if U_arr.ndim == 1:
        U_arr = U_arr.reshape(-1, n) if n > 1 else U_arr[:, None]
    if U_arr.ndim != 2 or U_arr.shape[1] != n:
        raise DomainError(f"batch must have shape (N, {n}), got {np.shape(U)}")
    return U_arr


@dataclass(frozen=True)
class DiscretizationTag:
    """h = None marks the exact model; c_fe = None means the constant is unknown."""

    h: Optional[float] = None
    s: Optional[float] = None
    c_fe: Optional[float] = None

    @property
    def exact(self) -> bool:
        return self.h is None


class LimitStateEvaluator(ABC):
    """Common interface of every limit-state function."""

    dimension: int
    tag: DiscretizationTag
    name: str = "lsf"

    @abstractmethod
    def evaluate(self, u) -> float:
        """G(u)."""

    def evaluate_batch(self, U) -> np.ndarray:
        """G at each row of an (N, n) array."""
        U_arr = _as_batch(U, self.dimension)
        return np.array([self.evaluate(row) for row in U_arr])

    def analytic_gradient(self, u) -> Optional[np.ndarray]:
        return None

    @property
    def has_analytic_gradient(self) -> bool:
        return self.analytic_gradient(np.zeros(self.dimension)) is not None

    def gradient(self, u) -> np.ndarray:
        """Analytic gradient when available, central differences otherwise."""
        u = as_parameter_vector(u, self.dimension)
        grad = self.analytic_gradient(u)
        return fd_gradient(self, u) if grad is None else grad

    def __call__(self, u) -> float:
        return self.evaluate(u)


class LinearGaussianLsf(LimitStateEvaluator):
    """G(u) = alpha^T u + beta with beta > 0."""

    def __init__(self, alpha, beta: float, tag: DiscretizationTag = DiscretizationTag()):
        self.alpha = as_parameter_vector(alpha)
        if not beta > 0.0:
            raise DomainError(f"beta must be > 0 so that G(0) > 0, got {beta}")
        self.beta = float(beta)
        self.dimension = self.alpha.size
        self.tag = tag
        self.name = "linear"

    @property
    def sigma2(self) -> float:
        return float(self.alpha @ self.alpha)

    def failure_probability(self) -> float:
        """Exact half-space probability Phi(-beta / ||alpha||)."""
        if self.sigma2 == 0.0:
            return 0.0
        return std_normal_cdf(-self.beta / np.sqrt(self.sigma2))

    def evaluate(self, u) -> float:
        return float(self.alpha @ as_parameter_vector(u, self.dimension) + self.beta)

    def evaluate_batch(self, U) -> np.ndarray:
        return _as_batch(U, self.dimension) @ self.alpha + self.beta

    def analytic_gradient(self, u) -> np.ndarray:
        return self.alpha.copy()


class OdeLsf(LimitStateEvaluator):
    """G(u) = y_max - y(1; u) for y' = -u y, y(0) = 1."""

    def __init__(self, y_max: float, scheme: Optional[OdeScheme] = None):
        if not y_max > 1.0:
            raise DomainError(f"y_max must be > 1, got {y_max}")
        self.y_max = float(y_max)
        self.scheme = scheme
        self.dimension = 1
        if scheme is None:
            self.tag = DiscretizationTag()
            self.name = "ode-exact"
        else:
            self.tag = DiscretizationTag(h=scheme.h, s=scheme.order)
            self.name = f"ode-{scheme.kind.value}"

    @property
    def threshold(self) -> float:
        """Nearest failure boundary: every u <= threshold fails."""
        return mlfp_closed_form(self.scheme, self.y_max)

    def failure_probability(self) -> float:
        """P[G <= 0]: Phi(threshold) plus the oscillating branch of even step counts."""
        p = std_normal_cdf(self.threshold)
        branch = None if self.scheme is None else oscillating_branch(self.scheme, self.y_max)
        if branch is not None:
            lo, hi = branch
            p += std_normal_cdf(-lo) if np.isinf(hi) else std_normal_cdf(hi) - std_normal_cdf(lo)
        return float(p)

    def _terminal_value(self, u):
        if self.scheme is None:
            return np.exp(-np.asarray(u, dtype=float))
        return integrate_to_one(self.scheme, u)

    def evaluate(self, u) -> float:
        u = as_parameter_vector(u, 1)[0]
        return float(self.y_max - self._terminal_value(u))

    def evaluate_batch(self, U) -> np.ndarray:
        return self.y_max - self._terminal_value(_as_batch(U, 1)[:, 0])

    def analytic_gradient(self, u) -> Optional[np.ndarray]:
        if self.scheme is not None:
            return None
        return np.exp(-as_parameter_vector(u, 1))


def _bvp_exact_shape(x: float) -> float:
    # Solution of -w'' = 1 - x, w(0) = w(1) = 0
    return x**3 / 6.0 - x**2 / 2.0 + x / 3.0


def _bvp_load(x: np.ndarray) -> np.ndarray:
    return 1.0 - x


class Bvp2dLsf(LimitStateEvaluator):
    """
    G(u) = y(x_hat; u) - y_max for -(exp(u1/3 - 3) y')' = 1 - x, y(0) = 0, y(1) = u2.

    The coefficient is constant in x, so y = u2 x + exp(3 - u1/3) w with w
    independent of u. The finite-element variants keep this structure exactly,
    which gives a closed-form limit surface u2(u1) for every variant.
    """

    def __init__(
        self,
        degree: Optional[int] = None,
        level: Optional[int] = None,
        y_max: float = -1.0 / 3.0,
        x_hat: float = 1.0 / 3.0,
    ):
        if degree is not None and degree not in (1, 2):
            raise DomainError(f"element degree must be 1 or 2, got {degree}")
        if degree is not None and level is None:
            raise DomainError("a mesh level is required for finite-element variants")
        if not 0.0 < x_hat < 1.0:
            raise DomainError(f"x_hat must lie in (0, 1), got {x_hat}")
        self.degree = degree
        self.mesh = None if degree is None else Mesh1D(level)
        self.y_max = float(y_max)
        self.x_hat = float(x_hat)
        self.dimension = 2
        if degree is None:
            self.tag = DiscretizationTag()
            self.name = "bvp2d-exact"
        else:
            self.tag = DiscretizationTag(h=self.mesh.h, s=degree + 1.0)
            self.name = f"bvp2d-p{degree}"

    @cached_property
    def shape_value(self) -> float:
        """w(x_hat), exact or from the finite-element solution with a = 1."""
        if self.degree is None:
            return _bvp_exact_shape(self.x_hat)
        sol = solve(lambda x: np.ones_like(x), _bvp_load, (0.0, 0.0), self.mesh, self.degree)
        value = point_value(sol, self.x_hat)
        logger.debug("%s shape value w_h(%.6g) = %.15e", self.name, self.x_hat, value)
        return value

    def surface_u2(self, u1):
        """u2 on the limit surface G = 0 as a function of u1."""
        u1 = np.asarray(u1, dtype=float)
        return (self.y_max - np.exp(3.0 - u1 / 3.0) * self.shape_value) / self.x_hat

    def evaluate(self, u) -> float:
        u1, u2 = as_parameter_vector(u, 2)
        if self.degree is None:
            y = u2 * self.x_hat + np.exp(3.0 - u1 / 3.0) * self.shape_value
            return float(y - self.y_max)
        a = np.exp(u1 / 3.0 - 3.0)
        sol = solve(lambda x: np.full_like(x, a), _bvp_load, (0.0, u2), self.mesh, self.degree)
        return point_value(sol, self.x_hat) - self.y_max

    def evaluate_batch(self, U) -> np.ndarray:
        U_arr = _as_batch(U, 2)
        y = U_arr[:, 1] * self.x_hat + np.exp(3.0 - U_arr[:, 0] / 3.0) * self.shape_value
        return y - self.y_max

    def analytic_gradient(self, u) -> Optional[np.ndarray]:
        if self.degree is not None:
            return None
        u1, _ = as_parameter_vector(u, 2)
        scale = np.exp(3.0 - u1 / 3.0) * self.shape_value
        return np.array([-scale / 3.0, self.x_hat])


class DiffusionLsf(LimitStateEvaluator):
    """
    G(u) = q_max - q_h(1; u) for -(exp(Z_n) y')' = 0, y(0) = 1, y(1) = 0.

    Linear elements on the mesh of the given level.
    """

    def __init__(self, kle: ExpCovKle, q_max: float, level: int):
        self.kle = kle
        self.q_max = float(q_max)
        self.mesh = Mesh1D(level)
        self.dimension = kle.n
        self.tag = DiscretizationTag(h=self.mesh.h, s=1.0)
        self.name = f"diffusion-n{kle.n}-l{level}"

    @cached_property
    def _quadrature_basis(self) -> np.ndarray:
        return self.kle.basis(self.mesh.quadrature_points().ravel())

    @cached_property
    def _right_basis(self) -> np.ndarray:
        return self.kle.basis(1.0)[0]

    def coefficient(self, u):
        """The lognormal coefficient x -> exp(Z_n(x; u))."""
        u = as_parameter_vector(u, self.dimension)
        return lambda x: diffusion_value(self.kle, DiffusionKind.LOGNORMAL, u, x)

    def evaluate(self, u) -> float:
        sol = solve(self.coefficient(u), np.zeros_like, (1.0, 0.0), self.mesh, 1)
        return self.q_max - flux(sol, 1.0)

    def evaluate_batch(self, U) -> np.ndarray:
        U_arr = _as_batch(U, self.dimension)
        n_points = self._quadrature_basis.shape[0]
        chunk = max(1, _MAX_BATCH_VALUES // n_points)
        out = np.empty(U_arr.shape[0])
        for start in range(0, U_arr.shape[0], chunk):
            block = U_arr[start : start + chunk]
            a_quad = np.exp(self.kle.mean + block @ self._quadrature_basis.T)
            a_quad = a_quad.reshape(block.shape[0], self.mesh.n_elements, -1)
            a_right = np.exp(self.kle.mean + block @ self._right_basis)
            out[start : start + chunk] = self.q_max - zero_load_right_flux(a_quad, a_right, (1.0, 0.0))
        return out


def make_ode_lsf(scheme: Optional[OdeScheme], y_max: float = 40.0) -> OdeLsf:
    """ODE limit state; ``scheme=None`` is the exact model."""
    return OdeLsf(y_max, scheme)


def make_bvp2d_lsf(
    degree: Optional[int] = None,
    level: Optional[int] = None,
    y_max: float = -1.0 / 3.0,
    x_hat: float = 1.0 / 3.0,
) -> Bvp2dLsf:
    """Two-parameter boundary-value limit state; ``degree=None`` is exact."""
    return Bvp2dLsf(degree, level, y_max, x_hat)


def make_diffusion_lsf(kle: ExpCovKle, q_max: float, level: int) -> DiffusionLsf:
    """Flow-rate limit state of the lognormal diffusion problem."""
    return DiffusionLsf(kle, q_max, level)


def fd_gradient(lsf: LimitStateEvaluator, u, step: float = FD_STEP) -> np.ndarray:
    """
    Central-difference gradient with a fixed step per coordinate.

    Raises:
        GradientError: A stencil value is not finite
    """
    u = as_parameter_vector(u, lsf.dimension)
    offsets = step * np.eye(lsf.dimension)
    stencil = np.vstack([u + offsets, u - offsets])
    with np.errstate(over="ignore", invalid="ignore"):
        values = lsf.evaluate_batch(stencil)
    if not np.all(np.isfinite(values)):
        raise GradientError(f"non-finite limit-state value in the stencil around {u}")
    n = lsf.dimension
    return (values[:n] - values[n:]) / (2.0 * step)
