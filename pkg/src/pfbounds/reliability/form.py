"""
First-order reliability method.

The most likely failure point solves min 1/2 ||u||^2 subject to G(u) = 0. It is
located with the improved HLRF iteration: the HLRF direction is combined with
an Armijo backtracking line search on the merit function
m(u) = 1/2 ||u||^2 + c |G(u)|.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from ..core.errors import DomainError, PreconditionError, SingularityError
from ..core.limit_state import LimitStateEvaluator, as_parameter_vector
from ..core.normal_tools import std_normal_cdf

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FormResult:
    """Outcome of an MLFP search."""

    mlfp: np.ndarray
    beta: float
    p_form: float
    iterations: int
    converged: bool
    residual: float
    history: Tuple[Dict[str, Any], ...] = field(default=(), repr=False)

    @classmethod
    def from_point(cls, mlfp: np.ndarray, iterations: int, converged: bool,
                   residual: float, history=()) -> "FormResult":
        beta = float(np.linalg.norm(mlfp))
        return cls(
            mlfp=mlfp,
            beta=beta,
            p_form=std_normal_cdf(-beta),
            iterations=iterations,
            converged=converged,
            residual=residual,
            history=tuple(history),
        )


def _hlrf_direction(u: np.ndarray, g: float, grad: np.ndarray) -> np.ndarray:
    return ((grad @ u - g) / (grad @ grad)) * grad - u


def _safe_evaluate(lsf: LimitStateEvaluator, u: np.ndarray) -> float:
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            return lsf.evaluate(u)
    except SingularityError:
        return np.nan


def find_mlfp(
    lsf: LimitStateEvaluator,
    start=None,
    tol_g: float = 1e-8,
    tol_u: float = 1e-8,
    max_iter: int = 100,
    armijo: float = 0.1,
    backtrack: float = 0.5,
    max_backtracks: int = 40,
    merit_factor: float = 2.0,
) -> FormResult:
    """
    Locate the most likely failure point with the improved HLRF iteration.

    Args:
        lsf: Limit-state function with G(0) > 0
        start: Starting point (default: origin)
        tol_g: Residual tolerance relative to |G(0)|
        tol_u: Tolerance on the HLRF correction, relative to max(1, ||u||)
        max_iter: Iteration cap
        armijo: Sufficient-decrease parameter of the line search
        backtrack: Step reduction factor
        max_backtracks: Line-search cap per iteration
        merit_factor: Safety factor (> 1) on the merit penalty parameter

    Returns:
        FormResult; ``converged`` is False when the cap is hit or the line
        search stalls

    Raises:
        PreconditionError: G(0) <= 0
    """
    n = lsf.dimension
    origin_value = lsf.evaluate(np.zeros(n))
    if not origin_value > 0.0:
        raise PreconditionError(f"FORM requires G(0) > 0, got G(0) = {origin_value:.6g}")
    g_tol = tol_g * abs(origin_value)

    u = np.zeros(n) if start is None else as_parameter_vector(start, n).copy()
    g = lsf.evaluate(u)
    grad = lsf.gradient(u)
    history: List[Dict[str, Any]] = []

    for iteration in range(max_iter + 1):
        grad_norm2 = float(grad @ grad)
        if grad_norm2 == 0.0:
            logger.warning("FORM stopped on %s: zero gradient at iteration %d", lsf.name, iteration)
            return FormResult.from_point(u, iteration, False, abs(g), history)

        direction = _hlrf_direction(u, g, grad)
        if abs(g) <= g_tol and np.linalg.norm(direction) <= tol_u * max(1.0, np.linalg.norm(u)):
            result = FormResult.from_point(u, iteration, True, abs(g), history)
            logger.info(
                "FORM on %s converged in %d iterations: beta=%.8f p_form=%.6e",
                lsf.name, iteration, result.beta, result.p_form,
            )
            return result
        if iteration == max_iter:
            break

        penalty = np.linalg.norm(u) / np.sqrt(grad_norm2)
        if g != 0.0:
            penalty = max(penalty, 0.5 * float((u + direction) @ (u + direction)) / abs(g))
        penalty = merit_factor * max(penalty, np.finfo(float).tiny)
        merit = 0.5 * float(u @ u) + penalty * abs(g)
        slope = float((u + penalty * np.sign(g) * grad) @ direction)

        step = 1.0
        for _ in range(max_backtracks):
            candidate = u + step * direction
            g_candidate = _safe_evaluate(lsf, candidate)
            if np.isfinite(g_candidate):
                merit_candidate = 0.5 * float(candidate @ candidate) + penalty * abs(g_candidate)
                if merit_candidate <= merit + armijo * step * slope:
                    break
            step *= backtrack
        else:
            logger.warning("FORM line search stalled on %s at iteration %d", lsf.name, iteration)
            return FormResult.from_point(u, iteration, False, abs(g), history)

        history.append({
            "iteration": iteration + 1,
            "step": step,
            "g": g_candidate,
            "beta": float(np.linalg.norm(candidate)),
            "merit_before": merit,
            "merit_after": merit_candidate,
        })
        logger.debug("HLRF %d: step=%.3g g=%.3e beta=%.8f", iteration + 1, step, g_candidate,
                     history[-1]["beta"])
        u, g = candidate, g_candidate
        grad = lsf.gradient(u)

    logger.warning("FORM on %s did not converge in %d iterations", lsf.name, max_iter)
    return FormResult.from_point(u, max_iter, False, abs(g), history)


def mlfp_distance(a: FormResult, b: FormResult) -> float:
    """Euclidean distance between two design points."""
    if a.mlfp.shape != b.mlfp.shape:
        raise DomainError(f"dimension mismatch: {a.mlfp.shape} vs {b.mlfp.shape}")
    return float(np.linalg.norm(a.mlfp - b.mlfp))
