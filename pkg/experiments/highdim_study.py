"""
High-dimensional diffusion study.

The log-diffusion coefficient is an n-term KLE of an exponential-covariance
field; failure is an excessive outflow at x = 1. No closed form exists, so
the model on the mesh of ``reference_level`` plays the exact one and all
probabilities are SIS averages over independent replicates.
"""

from functools import cached_property

from .base_experiment import BaseExperiment

from pfbounds.core import ExpCovKle, LimitStateEvaluator, build_kle, make_diffusion_lsf
from pfbounds.reliability import sis_replicates
from pfbounds.utils import ReplicateSummary, replicate_summary


class HighDimExperiment(BaseExperiment):
    """Diffusion flow-rate study; n = 10 or 50 from the configuration."""

    @cached_property
    def kle(self) -> ExpCovKle:
        settings = self.config.kle
        return build_kle(settings.mean, settings.std, settings.correlation_length, settings.terms)

    @property
    def dimension(self) -> int:
        return self.kle.n

    def setup(self):
        super().setup()
        self._print(f"  KLE: n={self.kle.n}, lambda={self.kle.correlation_length}, "
                    f"captured variance {self.kle.captured_variance:.4f}")

    def build_exact(self) -> LimitStateEvaluator:
        return make_diffusion_lsf(self.kle, self.config.q_max, self.config.reference_level)

    def build_level(self, level: int) -> LimitStateEvaluator:
        return make_diffusion_lsf(self.kle, self.config.q_max, level)

    def estimate(self, lsf: LimitStateEvaluator) -> ReplicateSummary:
        config = self.config
        estimates = sis_replicates(
            lsf,
            config.replicates,
            config.seed,
            workers=config.workers,
            progress=self.verbose,
            n_samples=config.samples,
            target_cov=config.target_cov,
            seed_fraction=config.seed_fraction,
        )
        return replicate_summary([estimate.value for estimate in estimates])
