"""
Standard-normal distribution helpers and Gaussian tail bounds.

The CDF is evaluated through ``scipy.special.ndtr``, which is built on the
complementary error function and keeps full relative accuracy deep in the
lower tail.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import special

from .errors import DomainError

ArrayLike = Union[float, np.ndarray]

_SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)


def _finite(x: ArrayLike, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return arr


def _like_input(value: np.ndarray, x: ArrayLike) -> ArrayLike:
    return float(value) if np.ndim(x) == 0 else value


def std_normal_pdf(x: ArrayLike) -> ArrayLike:
    """Standard-normal density."""
    arr = _finite(x)
    return _like_input(np.exp(-0.5 * arr**2) / np.sqrt(2.0 * np.pi), x)


def std_normal_cdf(x: ArrayLike) -> ArrayLike:
    """
    Standard-normal CDF Phi(x).

    Args:
        x: Finite scalar or array

    Returns:
        Phi(x), same shape as the input

    Raises:
        DomainError: If any input is NaN or infinite
    """
    arr = _finite(x)
    return _like_input(special.ndtr(arr), x)


def std_normal_quantile(p: ArrayLike) -> ArrayLike:
    """Inverse of Phi on (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any((arr <= 0.0) | (arr >= 1.0)) or not np.all(np.isfinite(arr)):
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    return _like_input(special.ndtri(arr), p)


@dataclass(frozen=True)
class GaussianScalar:
    """Scalar Gaussian N(mean, variance), e.g. W = alpha^T U."""

    mean: float
    variance: float

    def __post_init__(self):
        if not (np.isfinite(self.variance) and self.variance > 0.0):
            raise DomainError(f"variance must be > 0, got {self.variance}")

    @property
    def std(self) -> float:
        return float(np.sqrt(self.variance))

    def cdf(self, w: ArrayLike) -> ArrayLike:
        return std_normal_cdf((np.asarray(w, dtype=float) - self.mean) / self.std)


def _check_sigma(sigma: float) -> float:
    sigma = float(_finite(sigma, "sigma"))
    if sigma <= 0.0:
        raise DomainError(f"sigma must be > 0, got {sigma}")
    return sigma


def cdf_bounds_gordon(w: float, sigma: float) -> Tuple[float, float]:
    """
    Mills-ratio bounds on the N(0, sigma^2) CDF at w < 0.

    With z = w / sigma the bounds are phi(z)|z|/(z^2+1) <= Phi(z) <= phi(z)/|z|,
    so upper/lower = (z^2+1)/z^2.

    Raises:
        DomainError: If w >= 0 or sigma <= 0
    """
    w = float(_finite(w, "w"))
    sigma = _check_sigma(sigma)
    if w >= 0.0:
        raise DomainError(f"Gordon bounds are only defined for w < 0, got {w}")
    z = w / sigma
    density = std_normal_pdf(z)
    lower = density * (-z) / (z * z + 1.0)
    upper = density / (-z)
    return lower, upper


def cdf_bounds_sharp(w: float, sigma: float) -> Tuple[float, float]:
    """
    Sharper bounds on the N(0, sigma^2) CDF at w <= 0, finite at w = 0.

    Raises:
        DomainError: If w > 0 or sigma <= 0
    """
    w = float(_finite(w, "w"))
    sigma = _check_sigma(sigma)
    if w > 0.0:
        raise DomainError(f"sharp bounds are only defined for w <= 0, got {w}")
    z = w / sigma
    scale = _SQRT_2_OVER_PI * np.exp(-0.5 * z * z)
    lower = scale / (np.sqrt(4.0 + z * z) - z)
    upper = scale / (np.sqrt(2.0 + z * z) - z)
    return float(lower), float(upper)
