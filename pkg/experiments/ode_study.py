"""
Scalar ODE study: y' = -u y on [0, 1], failure when y(1) >= y_max.

Exact and discretized failure probabilities are closed-form half-line
probabilities, so every column of the table is deterministic.
"""

from .base_experiment import BaseExperiment

from pfbounds.core import LimitStateEvaluator, OdeScheme, make_ode_lsf
from pfbounds.reliability import quadrature_pf
from pfbounds.utils import ReplicateSummary, RunConfig, replicate_summary


class OdeExperiment(BaseExperiment):
    """Explicit Euler or Crank-Nicolson convergence of P_f,h."""

    def __init__(self, config: RunConfig, verbose: bool = True):
        super().__init__(config, verbose)
        self.scheme_kind = config.scheme
        self.y_max = config.y_max

    @property
    def dimension(self) -> int:
        return 1

    def build_exact(self) -> LimitStateEvaluator:
        return make_ode_lsf(None, self.y_max)

    def build_level(self, level: int) -> LimitStateEvaluator:
        return make_ode_lsf(OdeScheme.at_level(self.scheme_kind, level), self.y_max)

    def estimate(self, lsf: LimitStateEvaluator) -> ReplicateSummary:
        return replicate_summary([quadrature_pf(lsf).value])
