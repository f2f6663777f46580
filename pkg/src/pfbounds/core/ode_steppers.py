"""Time-steppers for y' = -u y, y(0) = 1 on [0, 1]."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from .errors import DomainError, SingularityError

ArrayLike = Union[float, np.ndarray]


class SchemeKind(str, Enum):
    """Supported one-step schemes."""
    EXPLICIT_EULER = "explicit-euler"
    CRANK_NICOLSON = "crank-nicolson"


@dataclass(frozen=True)
class OdeScheme:
    """A scheme together with a step size h whose reciprocal is an integer."""

    kind: SchemeKind
    h: float

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        if not (np.isfinite(self.h) and self.h > 0.0):
            raise DomainError(f"step size must be > 0, got {self.h}")
        steps = round(1.0 / self.h)
        if steps < 1 or abs(steps * self.h - 1.0) > 1e-12:
            raise DomainError(f"1/h must be a positive integer, got h={self.h}")

    @classmethod
    def at_level(cls, kind: Union[str, SchemeKind], level: int) -> "OdeScheme":
        return cls(SchemeKind(kind), 2.0 ** (-level))

    @property
    def steps(self) -> int:
        return int(round(1.0 / self.h))

    @property
    def order(self) -> float:
        return 1.0 if self.kind is SchemeKind.EXPLICIT_EULER else 2.0


def integrate_to_one(scheme: OdeScheme, u: ArrayLike) -> ArrayLike:
    """
    Step y' = -u y from t = 0 to t = 1 and return y_h(1).

    Accepts a scalar or an array of parameters; arrays are stepped together.

    Raises:
        SingularityError: Crank-Nicolson with 1 + h u / 2 = 0
    """
    u_arr = np.asarray(u, dtype=float)
    h = scheme.h
    if scheme.kind is SchemeKind.EXPLICIT_EULER:
        factor = 1.0 - h * u_arr
    else:
        denominator = 1.0 + 0.5 * h * u_arr
        if np.any(denominator == 0.0):
            raise SingularityError(f"Crank-Nicolson pole at h*u = -2 (h={h})")
        factor = (1.0 - 0.5 * h * u_arr) / denominator

    y = np.ones_like(u_arr)
    for _ in range(scheme.steps):
        y = y * factor
    return float(y) if np.ndim(u) == 0 else y


def mlfp_closed_form(scheme: Optional[OdeScheme], y_max: float) -> float:
    """
    Failure threshold in u: the model fails for u <= threshold, and this is
    the failure point of least norm.

    ``scheme=None`` gives the exact threshold -log(y_max).
    """
    if not y_max > 1.0:
        raise DomainError(f"y_max must be > 1, got {y_max}")
    log_y = np.log(y_max)
    if scheme is None:
        return float(-log_y)
    h = scheme.h
    # y_max**h - 1 without cancellation
    growth = np.expm1(h * log_y)
    if scheme.kind is SchemeKind.EXPLICIT_EULER:
        return float(-growth / h)
    return float(-2.0 * growth / (h * (2.0 + growth)))


def oscillating_branch(scheme: OdeScheme, y_max: float) -> Optional[Tuple[float, float]]:
    """
    Second failure interval (lo, hi) in u where the per-step factor is below -y_max^h.

    With an even number of steps the negative factor is raised to an even
    power, so y_h(1) >= y_max also holds there. Euler: u >= (1 + y_max^h)/h;
    Crank-Nicolson: between the far root and the pole -2/h. None for odd
    step counts.
    """
    if scheme.steps % 2:
        return None
    h = scheme.h
    growth = np.expm1(h * np.log(y_max))
    if scheme.kind is SchemeKind.EXPLICIT_EULER:
        return float((2.0 + growth) / h), float(np.inf)
    return float(-2.0 * (2.0 + growth) / (h * growth)), float(-2.0 / h)
