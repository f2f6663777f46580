"""
Two-parameter boundary-value study with linear or quadratic elements.

P_f and P_f,h come from 1-D quadrature along the explicit limit surface.
"""

from .base_experiment import BaseExperiment

from pfbounds.core import LimitStateEvaluator, make_bvp2d_lsf
from pfbounds.reliability import quadrature_pf
from pfbounds.utils import ReplicateSummary, RunConfig, replicate_summary

DEFAULT_Y_MAX = -1.0 / 3.0
DEFAULT_X_HAT = 1.0 / 3.0


class Bvp2dExperiment(BaseExperiment):
    def __init__(self, config: RunConfig, verbose: bool = True):
        super().__init__(config, verbose)
        self.degree = config.degree
        self.y_max = DEFAULT_Y_MAX if config.y_max is None else config.y_max
        self.x_hat = DEFAULT_X_HAT if config.x_hat is None else config.x_hat

    @property
    def dimension(self) -> int:
        return 2

    def build_exact(self) -> LimitStateEvaluator:
        return make_bvp2d_lsf(None, None, self.y_max, self.x_hat)

    def build_level(self, level: int) -> LimitStateEvaluator:
        return make_bvp2d_lsf(self.degree, level, self.y_max, self.x_hat)

    def estimate(self, lsf: LimitStateEvaluator) -> ReplicateSummary:
        return replicate_summary([quadrature_pf(lsf).value])
