"""
Karhunen-Loeve expansion of a stationary Gaussian field on (0, 1).

The covariance kernel is exp(-|x - y| / lambda). Its eigenpairs are known in
closed form up to the roots of two transcendental equations, one for the
modes that are even about x = 1/2 and one for the odd modes. Each root lies in
a known interval of length pi, so every mode is found by bracketed root
finding instead of a dense eigen-solve.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np
import pandas as pd
from scipy import optimize

from .errors import DomainError, KleConstructionError

logger = logging.getLogger(__name__)

_HALF = 0.5


class DiffusionKind(str, Enum):
    """Transforms of the Gaussian field into a positive coefficient."""
    TANH_SHIFTED = "tanh-shifted"
    LOGNORMAL = "lognormal"


@dataclass(frozen=True, eq=False)
class ExpCovKle:
    """Truncated expansion Z_n = mean + std * sum_m sqrt(nu_m) z_m(x) u_m."""

    mean: float
    std: float
    correlation_length: float
    n: int
    frequencies: np.ndarray = field(repr=False)
    even: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    scales: np.ndarray = field(repr=False)

    @property
    def captured_variance(self) -> float:
        """Fraction of the unit-trace correlation operator kept by n terms."""
        return float(self.eigenvalues.sum())

    def eigenfunctions(self, x: Union[float, np.ndarray]) -> np.ndarray:
        """Values z_m(x) as an array of shape (len(x), n)."""
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any((x_arr < 0.0) | (x_arr > 1.0)) or not np.all(np.isfinite(x_arr)):
            raise DomainError("field points must lie in [0, 1]")
        phase = np.outer(x_arr - _HALF, self.frequencies)
        values = np.where(self.even, np.cos(phase), np.sin(phase))
        return values * self.scales

    def basis(self, x: Union[float, np.ndarray]) -> np.ndarray:
        """std * sqrt(nu_m) * z_m(x), shape (len(x), n)."""
        return self.eigenfunctions(x) * (self.std * np.sqrt(self.eigenvalues))

    def to_frame(self) -> pd.DataFrame:
        """Mode table (m, nu_m, cumulative fraction)."""
        return pd.DataFrame({
            "m": np.arange(1, self.n + 1),
            "nu": self.eigenvalues,
            "cumulative": np.cumsum(self.eigenvalues),
        })


def _even_equation(omega: float, c: float) -> float:
    # omega * tan(omega / 2) = c, written without poles
    return omega * np.sin(omega * _HALF) - c * np.cos(omega * _HALF)


def _odd_equation(omega: float, c: float) -> float:
    # omega + c * tan(omega / 2) = 0, written without poles
    return omega * np.cos(omega * _HALF) + c * np.sin(omega * _HALF)


def _solve_mode(mode: int, c: float, xtol: float) -> tuple:
    """Return (omega, is_even) of the mode-th eigenpair (1-based)."""
    k = (mode + 1) // 2
    is_even = mode % 2 == 1
    if is_even:
        equation = _even_equation
        lo, hi = (k - 1) * np.pi / _HALF, (k - 0.5) * np.pi / _HALF
    else:
        equation = _odd_equation
        lo, hi = (k - 0.5) * np.pi / _HALF, k * np.pi / _HALF

    f_lo, f_hi = equation(lo, c), equation(hi, c)
    if not np.sign(f_lo) * np.sign(f_hi) < 0:
        raise KleConstructionError(mode, f"no sign change on [{lo:.6g}, {hi:.6g}]")
    omega = optimize.brentq(equation, lo, hi, args=(c,), xtol=xtol, rtol=4 * np.finfo(float).eps)
    return omega, is_even


def build_kle(
    mean: float,
    std: float,
    correlation_length: float,
    n: int,
    xtol: float = 1e-12,
) -> ExpCovKle:
    """
    Build the n-term expansion of the exponential-covariance field.

    Args:
        mean: Field mean mu_Z
        std: Field standard deviation sigma_Z
        correlation_length: lambda in exp(-|x - y| / lambda)
        n: Truncation order
        xtol: Absolute tolerance on each characteristic root

    Returns:
        Immutable ExpCovKle with eigenvalues in decreasing order

    Raises:
        DomainError: Invalid parameters
        KleConstructionError: A characteristic root could not be bracketed
    """
    if not std > 0.0:
        raise DomainError(f"std must be > 0, got {std}")
    if not correlation_length > 0.0:
        raise DomainError(f"correlation length must be > 0, got {correlation_length}")
    if int(n) != n or n < 1:
        raise DomainError(f"truncation order must be a positive integer, got {n}")
    n = int(n)

    c = 1.0 / correlation_length
    frequencies = np.empty(n)
    even = np.empty(n, dtype=bool)
    for mode in range(1, n + 1):
        frequencies[mode - 1], even[mode - 1] = _solve_mode(mode, c, xtol)

    eigenvalues = 2.0 * c / (frequencies**2 + c**2)
    half_sine = np.sin(2.0 * frequencies * _HALF) / (2.0 * frequencies)
    norms = np.sqrt(np.where(even, _HALF + half_sine, _HALF - half_sine))
    # Sign convention z_m(0) >= 0
    at_zero = np.where(even, np.cos(-frequencies * _HALF), np.sin(-frequencies * _HALF))
    signs = np.where(at_zero < 0.0, -1.0, 1.0)

    kle = ExpCovKle(
        mean=float(mean),
        std=float(std),
        correlation_length=float(correlation_length),
        n=n,
        frequencies=frequencies,
        even=even,
        eigenvalues=eigenvalues,
        scales=signs / norms,
    )
    logger.debug(
        "KLE lambda=%g n=%d captures %.4f of the variance",
        correlation_length, n, kle.captured_variance,
    )
    return kle


def _check_dimension(kle: ExpCovKle, u) -> np.ndarray:
    u_arr = np.asarray(u, dtype=float)
    if u_arr.ndim not in (1, 2) or u_arr.shape[-1] != kle.n:
        raise DomainError(f"parameter dimension {u_arr.shape} does not match n={kle.n}")
    return u_arr


def field_value(kle: ExpCovKle, u, x):
    """
    Evaluate Z_n(x; u).

    ``u`` may be one parameter vector (n,) or a batch (N, n); ``x`` a scalar or
    array. The result drops the axes that were scalar on input.
    """
    u_arr = _check_dimension(kle, u)
    values = kle.mean + np.atleast_2d(u_arr) @ kle.basis(x).T
    if u_arr.ndim == 1:
        values = values[0]
    if np.ndim(x) == 0:
        values = values[..., 0]
    return float(values) if np.ndim(values) == 0 else values


def diffusion_value(kle: ExpCovKle, kind: Union[str, DiffusionKind], u, x):
    """Positive coefficient 2 + tanh(Z_n) or exp(Z_n) at x."""
    kind = DiffusionKind(kind)
    z = np.asarray(field_value(kle, u, x))
    values = 2.0 + np.tanh(z) if kind is DiffusionKind.TANH_SHIFTED else np.exp(z)
    return float(values) if values.ndim == 0 else values
