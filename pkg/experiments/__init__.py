"""Convergence studies and the registry that maps experiment ids to them."""

from .base_experiment import BaseExperiment, stage
from .bvp2d_study import Bvp2dExperiment
from .highdim_study import HighDimExperiment
from .ode_study import OdeExperiment

from pfbounds.utils import ConvergenceTable, RunConfig

# Registry of available experiments
EXPERIMENTS = {
    "ode": {
        "class": OdeExperiment,
        "description": "Scalar ODE y' = -u y; explicit Euler (order 1) or Crank-Nicolson (order 2)",
        "estimator": "closed form",
    },
    "bvp2d": {
        "class": Bvp2dExperiment,
        "description": "Two-parameter BVP with P1 (order 2) or P2 (order 3) point evaluation",
        "estimator": "1-D quadrature",
    },
    "highdim10": {
        "class": HighDimExperiment,
        "description": "Lognormal diffusion flow rate, 10-term KLE, lambda = 0.3",
        "estimator": "SIS replicates",
    },
    "highdim50": {
        "class": HighDimExperiment,
        "description": "Lognormal diffusion flow rate, 50-term KLE, lambda = 0.1",
        "estimator": "SIS replicates",
    },
}


def list_experiments():
    """List all available experiments."""
    print("\nAvailable Experiments:")
    print("=" * 80)

    for name, info in EXPERIMENTS.items():
        print(f"\n{name}")
        print(f"  Description: {info['description']}")
        print(f"  Estimator: {info['estimator']}")

    print("\n" + "=" * 80 + "\n")


def run_experiment(config: RunConfig, verbose: bool = True) -> ConvergenceTable:
    """
    Run the convergence study described by ``config``.

    Args:
        config: Validated run configuration
        verbose: Print progress banners and the final table

    Returns:
        ConvergenceTable with fitted orders; the report file is written

    Raises:
        ExperimentStageError: Any module error, tagged with level and stage
    """
    experiment_class = EXPERIMENTS[config.experiment.value]["class"]
    if verbose:
        print("\n" + "=" * 80)
        print(f"pfbounds - {config.experiment.value} convergence study")
        print("=" * 80)
    experiment = experiment_class(config, verbose=verbose)
    experiment.setup()
    return experiment.run()


__all__ = [
    "BaseExperiment",
    "OdeExperiment",
    "Bvp2dExperiment",
    "HighDimExperiment",
    "EXPERIMENTS",
    "list_experiments",
    "run_experiment",
    "stage",
]
