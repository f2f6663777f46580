"""
Statistics helpers for convergence studies and replicated estimators.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from ..core.errors import FitError


@dataclass
class ReplicateSummary:
    """Mean and spread of independent replicate estimates; mean_cov is the cov of the mean."""
    mean: float
    std: float
    cov: float
    mean_cov: float
    ci_lower: float
    ci_upper: float
    n: int


def confidence_interval(
    values: Sequence[float],
    confidence_level: float = 0.95
) -> Tuple[float, float]:
    """
    Compute confidence interval of the mean using the t-distribution.

    Args:
        values: Replicate values
        confidence_level: Confidence level (default 0.95 for 95% CI)

    Returns:
        (lower_bound, upper_bound)
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        single = float(values[0]) if values.size else 0.0
        return single, single

    mean = np.mean(values)
    std_err = stats.sem(values)
    if std_err == 0.0:
        return float(mean), float(mean)
    lower, upper = stats.t.interval(confidence_level, values.size - 1, loc=mean, scale=std_err)
    return float(lower), float(upper)


def replicate_summary(values: Sequence[float], confidence_level: float = 0.95) -> ReplicateSummary:
    """
    Summarize replicate estimates: mean, std (ddof=1), coefficient of variation
    of one replicate and of their mean (cov / sqrt(n)), and a t-interval for
    the mean.
    """
    values = np.asarray(values, dtype=float)
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    lower, upper = confidence_interval(values, confidence_level)
    cov = std / mean if mean > 0 else float("inf")
    return ReplicateSummary(
        mean=mean,
        std=std,
        cov=cov,
        mean_cov=float(cov / np.sqrt(values.size)),
        ci_lower=lower,
        ci_upper=upper,
        n=int(values.size),
    )


def fit_order(hs: Sequence[float], errs: Sequence[float], tail: int = 5) -> float:
    """
    Least-squares slope of log(err) against log(h) on the finest levels.

    Args:
        hs: Discretization parameters
        errs: Errors at those parameters
        tail: Number of finest levels (smallest h) in the fitting window

    Returns:
        Estimated convergence order

    Raises:
        FitError: Fewer than two finite positive errors in the window

    Example:
        >>> fit_order([0.5, 0.25, 0.125], [0.5, 0.25, 0.125], tail=3)
        1.0
    """
    hs = np.asarray(hs, dtype=float)
    errs = np.asarray(errs, dtype=float)
    if hs.shape != errs.shape:
        raise FitError(f"length mismatch: {hs.size} step sizes, {errs.size} errors")

    window = np.argsort(hs)[:tail]
    h_win, e_win = hs[window], errs[window]
    usable = np.isfinite(e_win) & (e_win > 0) & np.isfinite(h_win) & (h_win > 0)
    if np.count_nonzero(usable) < 2:
        raise FitError(f"need at least 2 positive errors among the finest {tail} levels")

    slope, _ = np.polyfit(np.log(h_win[usable]), np.log(e_win[usable]), 1)
    return float(slope)
