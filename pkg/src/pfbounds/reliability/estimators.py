"""
Estimators of failure probabilities P[G(U) <= 0].

- quadrature_pf: reduced-dimension oracles for the ODE and two-parameter BVP models
- monte_carlo: crude sampling baseline, plus symmetric-difference and band variants
- sis: sequential importance sampling with smoothed indicators Phi(-G / sigma_k)
  and adaptive conditional sampling (aCS) moves
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field
from scipy import integrate, optimize, special
from tqdm import tqdm

from ..core.errors import ConvergenceError, DomainError
from ..core.limit_state import Bvp2dLsf, LimitStateEvaluator, OdeLsf
from ..core.normal_tools import std_normal_pdf

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence, None]

_MC_CHUNK = 200_000
_COV_CAP = 1e10
_TARGET_ACCEPTANCE = 0.44


class EstimatorMethod(str, Enum):
    MC = "mc"
    QUADRATURE = "quadrature"
    SIS = "sis"


class ProbabilityEstimate(BaseModel):
    """
    A failure-probability estimate and its coefficient of variation.

    A single SIS run cannot estimate its own cov; ``cov`` is then None and
    ``weight_cov`` carries the final importance-weight spread. SIS replicates
    share the cov of their spread.
    """

    model_config = {"use_enum_values": True}

    value: float = Field(..., ge=0.0, le=1.0)
    cov: Optional[float] = Field(
        None, ge=0.0, description="Coefficient of variation of the estimator; inf when no failures were seen"
    )
    weight_cov: Optional[float] = Field(
        None, ge=0.0, description="Final importance-weight cov divided by sqrt(N) (SIS only)"
    )
    samples_used: int = Field(..., ge=0)
    method: EstimatorMethod
    seed: Optional[int] = Field(None, description="Base seed; replicate r ran on SeedSequence(seed).spawn(R)[r]")
    replicate: Optional[int] = None
    steps: Optional[int] = Field(None, description="Tempering steps (SIS only)")


def quadrature_pf(lsf: LimitStateEvaluator, lower: float = -12.0, upper: float = 12.0) -> ProbabilityEstimate:
    """
    Failure probability from a reduced-dimension representation.

    ODE models fail on a half-line u <= threshold, so P = Phi(threshold) plus
    the oscillating branch of even step counts. The
    two-parameter BVP fails below the surface u2 <= u2(u1), so
    P = int Phi(u2(u1)) phi(u1) du1, integrated adaptively.

    Raises:
        DomainError: The family has no reduced representation
    """
    if isinstance(lsf, OdeLsf):
        return ProbabilityEstimate(
            value=lsf.failure_probability(), cov=0.0, samples_used=0,
            method=EstimatorMethod.QUADRATURE,
        )
    if isinstance(lsf, Bvp2dLsf):
        def integrand(u1: float) -> float:
            return special.ndtr(lsf.surface_u2(u1)) * std_normal_pdf(u1)

        value, error, info = integrate.quad(
            integrand, lower, upper, epsabs=1e-15, epsrel=1e-12, limit=200, full_output=1
        )[:3]
        logger.debug("quadrature for %s: %.12e (error estimate %.1e)", lsf.name, value, error)
        return ProbabilityEstimate(
            value=value, cov=0.0, samples_used=int(info["neval"]),
            method=EstimatorMethod.QUADRATURE,
        )
    raise DomainError(f"no reduced-dimension representation for {type(lsf).__name__}")


def _binomial_cov(p: float, n: int) -> float:
    return float(np.sqrt((1.0 - p) / (n * p))) if p > 0.0 else float("inf")


def _sample_fraction(indicator, dimension: int, n_samples: int, seed: SeedLike) -> float:
    rng = np.random.default_rng(seed)
    hits = 0
    for start in range(0, n_samples, _MC_CHUNK):
        size = min(_MC_CHUNK, n_samples - start)
        hits += int(np.count_nonzero(indicator(rng.standard_normal((size, dimension)))))
    return hits / n_samples


def monte_carlo(lsf: LimitStateEvaluator, n_samples: int, seed: int) -> ProbabilityEstimate:
    """Crude Monte Carlo estimate with binomial coefficient of variation."""
    if n_samples < 1:
        raise DomainError(f"sample size must be >= 1, got {n_samples}")
    p = _sample_fraction(lambda U: lsf.evaluate_batch(U) <= 0.0, lsf.dimension, n_samples, seed)
    if p == 0.0:
        logger.warning("Monte Carlo saw no failures of %s in %d samples", lsf.name, n_samples)
    return ProbabilityEstimate(
        value=p, cov=_binomial_cov(p, n_samples), samples_used=n_samples,
        method=EstimatorMethod.MC, seed=seed,
    )


def symmetric_difference_mc(
    exact: LimitStateEvaluator,
    approx: LimitStateEvaluator,
    n_samples: int,
    seed: int,
) -> ProbabilityEstimate:
    """Monte Carlo estimate of P[A xor A_h], an upper bound on |P_f - P_f,h|."""
    if exact.dimension != approx.dimension:
        raise DomainError("limit states must share the parameter dimension")

    def disagree(U):
        return (exact.evaluate_batch(U) <= 0.0) != (approx.evaluate_batch(U) <= 0.0)

    p = _sample_fraction(disagree, exact.dimension, n_samples, seed)
    return ProbabilityEstimate(
        value=p, cov=_binomial_cov(p, n_samples), samples_used=n_samples,
        method=EstimatorMethod.MC, seed=seed,
    )


def band_probability_mc(lsf: LimitStateEvaluator, width: float, n_samples: int, seed: int) -> ProbabilityEstimate:
    """Monte Carlo estimate of P[-width < G(U) <= width]."""
    if not width > 0.0:
        raise DomainError(f"band width must be > 0, got {width}")

    def inside(U):
        g = lsf.evaluate_batch(U)
        return (g > -width) & (g <= width)

    p = _sample_fraction(inside, lsf.dimension, n_samples, seed)
    return ProbabilityEstimate(
        value=p, cov=_binomial_cov(p, n_samples), samples_used=n_samples,
        method=EstimatorMethod.MC, seed=seed,
    )


def _log_smoothed(g: np.ndarray, sigma: float) -> np.ndarray:
    """log Phi(-g / sigma); sigma = 0 is the indicator, sigma = inf is 1."""
    if sigma == 0.0:
        return np.where(g <= 0.0, 0.0, -np.inf)
    if np.isinf(sigma):
        return np.zeros_like(g)
    return special.log_ndtr(-g / sigma)


def _weights_cov(log_w: np.ndarray) -> float:
    top = np.max(log_w)
    if not np.isfinite(top):
        return _COV_CAP
    w = np.exp(log_w - top)
    return float(min(np.std(w) / np.mean(w), _COV_CAP))


def _next_sigma(g: np.ndarray, log_f: np.ndarray, sigma: float, target_cov: float) -> float:
    """Smoothing parameter whose weights hit the target coefficient of variation."""

    def excess(candidate: float) -> float:
        return _weights_cov(_log_smoothed(g, candidate) - log_f) - target_cov

    if np.isinf(sigma):
        upper = 10.0 * float(np.mean(np.abs(g))) or 1.0
        for _ in range(60):
            if excess(upper) < 0.0:
                break
            upper *= 2.0
    else:
        upper = sigma
    return optimize.bisect(excess, 0.0, upper, xtol=1e-12 * upper, maxiter=400)


def _acs_move(
    lsf: LimitStateEvaluator,
    seeds: np.ndarray,
    g_seeds: np.ndarray,
    sigma: float,
    n_samples: int,
    scale: float,
    chain_seeds: List[np.random.SeedSequence],
) -> Tuple[np.ndarray, np.ndarray, float, float]:
    """
    Grow one Markov chain per seed until n_samples states are collected.

    All chains advance together; the proposal scale adapts after every joint
    step towards an acceptance rate of 0.44. Chain i draws its proposals and
    acceptance tests from its own stream chain_seeds[i]. The seeds themselves
    are not recorded (no burn-in).
    """
    n_seeds, dimension = seeds.shape
    lengths = np.full(n_seeds, n_samples // n_seeds)
    lengths[: n_samples % n_seeds] += 1
    n_steps = int(lengths.max())

    seed_std = np.std(seeds, axis=0)
    seed_std = np.where(seed_std > 0.0, seed_std, 1.0)
    u, g = seeds.copy(), g_seeds.copy()
    log_f = _log_smoothed(g, sigma)
    states = np.empty((n_steps, n_seeds, dimension))
    values = np.empty((n_steps, n_seeds))
    accepted_total = 0.0

    streams = [np.random.default_rng(chain_seed) for chain_seed in chain_seeds]
    noise = np.stack([stream.standard_normal((n_steps, dimension)) for stream in streams], axis=1)
    uniforms = np.stack([stream.random(n_steps) for stream in streams], axis=1)

    for step in range(n_steps):
        rho = np.minimum(scale * seed_std, 1.0)
        proposal = np.sqrt(1.0 - rho**2) * u + rho * noise[step]
        with np.errstate(over="ignore", invalid="ignore"):
            g_proposal = lsf.evaluate_batch(proposal)
        log_f_proposal = np.where(np.isfinite(g_proposal), _log_smoothed(g_proposal, sigma), -np.inf)
        accept = np.log(uniforms[step]) < log_f_proposal - log_f

        u[accept] = proposal[accept]
        g[accept] = g_proposal[accept]
        log_f[accept] = log_f_proposal[accept]
        states[step], values[step] = u, g

        rate = float(np.mean(accept[lengths > step]))
        accepted_total += rate
        scale = float(np.exp(np.log(scale) + (rate - _TARGET_ACCEPTANCE) / np.sqrt(step + 1.0)))

    keep = np.arange(n_steps)[:, None] < lengths[None, :]
    return states[keep], values[keep], scale, accepted_total / n_steps


def _fresh_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    """A SeedSequence with no spawned children, so equal seeds give equal runs."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key, pool_size=seed.pool_size)
    return np.random.SeedSequence(seed)


def sis(
    lsf: LimitStateEvaluator,
    n_samples: int = 10_000,
    target_cov: float = 0.25,
    seed: SeedLike = None,
    seed_fraction: float = 0.1,
    max_steps: int = 200,
    stall_steps: int = 50,
    initial_scale: float = 0.6,
) -> ProbabilityEstimate:
    """
    Sequential importance sampling estimate of P[G(U) <= 0].

    Intermediate densities are phi(u) Phi(-G(u) / sigma_k) with sigma_k found
    by bisection so that the coefficient of variation of the incremental
    weights equals ``target_cov``. Each step resamples ceil(seed_fraction * N)
    seeds multinomially and regrows N samples with aCS chains. Tempering stops
    once the weights of the indicator against the current density reach the
    target; the estimate is prod_k S_k * mean(I / Phi(-G / sigma_last)).

    One run has no estimate of its own coefficient of variation: ``cov`` is
    None and ``weight_cov`` reports the final importance-weight coefficient
    of variation divided by sqrt(N). It ignores the tempering ratios and the
    correlation along the chains and is far below the spread of replicates;
    use ``sis_replicates`` for an estimator cov.

    Random streams: the initial samples and the resampling draw from
    SeedSequence(seed); the chains of tempering step k use the children of
    its k-th spawn, one per chain index.

    Raises:
        ConvergenceError: sigma fails to decrease for ``stall_steps`` steps or
            the failure domain is not reached within ``max_steps`` steps
    """
    if n_samples < 100:
        raise DomainError(f"SIS needs at least 100 samples, got {n_samples}")
    if not target_cov > 0.0:
        raise DomainError(f"target_cov must be > 0, got {target_cov}")
    if not 0.0 < seed_fraction <= 1.0:
        raise DomainError(f"seed_fraction must lie in (0, 1], got {seed_fraction}")

    seed_sequence = _fresh_seed_sequence(seed)
    rng = np.random.default_rng(seed_sequence)
    n_seeds = int(np.ceil(seed_fraction * n_samples))
    u = rng.standard_normal((n_samples, lsf.dimension))
    g = lsf.evaluate_batch(u)
    sigma = np.inf
    log_f = np.zeros(n_samples)
    log_pf = 0.0
    scale = initial_scale
    stalled = 0

    for step in range(max_steps + 1):
        log_ratio = np.where(g <= 0.0, -log_f, -np.inf)
        final_cov = _weights_cov(log_ratio)
        if final_cov <= target_cov:
            break
        if step == max_steps:
            raise ConvergenceError(f"SIS on {lsf.name} did not reach the failure domain in {max_steps} steps")

        sigma_next = _next_sigma(g, log_f, sigma, target_cov)
        stalled = stalled + 1 if sigma_next >= (1.0 - 1e-3) * sigma else 0
        if stalled >= stall_steps:
            raise ConvergenceError(f"SIS smoothing parameter stagnated at {sigma_next:.3e} on {lsf.name}")

        log_w = _log_smoothed(g, sigma_next) - log_f
        log_pf += special.logsumexp(log_w) - np.log(n_samples)
        weights = np.exp(log_w - np.max(log_w))
        picks = rng.choice(n_samples, size=n_seeds, replace=True, p=weights / weights.sum())

        u, g, scale, acceptance = _acs_move(
            lsf, u[picks], g[picks], sigma_next, n_samples, scale, seed_sequence.spawn(n_seeds)
        )
        log_f = _log_smoothed(g, sigma_next)
        sigma = sigma_next
        logger.debug("SIS step %d: sigma=%.4e log S=%.4f acceptance=%.2f", step + 1, sigma, log_pf, acceptance)

    log_pf += special.logsumexp(log_ratio) - np.log(n_samples)
    value = float(np.exp(log_pf))
    logger.info("SIS on %s: %.6e after %d steps", lsf.name, value, step)
    return ProbabilityEstimate(
        value=min(value, 1.0),
        weight_cov=final_cov / np.sqrt(n_samples),
        samples_used=n_samples * (step + 1),
        method=EstimatorMethod.SIS,
        seed=int(seed) if isinstance(seed, (int, np.integer)) else None,
        steps=step,
    )


def _sis_job(args) -> ProbabilityEstimate:
    lsf, seed, seed_sequence, replicate, kwargs = args
    estimate = sis(lsf, seed=seed_sequence, **kwargs)
    return estimate.model_copy(update={"seed": seed, "replicate": replicate})


def sis_replicates(
    lsf: LimitStateEvaluator,
    replicates: int,
    seed: int,
    workers: int = 1,
    progress: bool = False,
    **kwargs,
) -> List[ProbabilityEstimate]:
    """
    Independent SIS runs; replicate r uses child r of SeedSequence(seed).

    Serial and parallel runs give identical estimates. Each estimate records
    the base seed and its replicate index; with two or more replicates its
    ``cov`` is the coefficient of variation of the replicate values.
    """
    children = np.random.SeedSequence(seed).spawn(replicates)
    jobs = [(lsf, seed, child, r, kwargs) for r, child in enumerate(children)]
    desc = f"SIS {lsf.name}"
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(tqdm(pool.map(_sis_job, jobs), total=replicates, desc=desc, disable=not progress))
    else:
        results = [_sis_job(job) for job in tqdm(jobs, desc=desc, disable=not progress)]

    if replicates > 1:
        values = np.array([estimate.value for estimate in results])
        mean = float(np.mean(values))
        cov = float(np.std(values, ddof=1) / mean) if mean > 0.0 else float("inf")
        results = [estimate.model_copy(update={"cov": cov}) for estimate in results]
    return results
