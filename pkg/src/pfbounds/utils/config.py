"""Configuration utilities."""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator

from ..core.ode_steppers import SchemeKind


class ExperimentId(str, Enum):
    """Registered convergence studies."""
    ODE = "ode"
    BVP2D = "bvp2d"
    HIGHDIM10 = "highdim10"
    HIGHDIM50 = "highdim50"

    @property
    def sampling(self) -> bool:
        return self in (ExperimentId.HIGHDIM10, ExperimentId.HIGHDIM50)


class KleSettings(BaseModel):
    """Parameters of the exponential-covariance field."""
    mean: float = Field(0.1, description="Field mean mu_Z")
    std: float = Field(0.2, gt=0, description="Field standard deviation sigma_Z")
    correlation_length: float = Field(0.3, gt=0)
    terms: int = Field(10, ge=1, description="Truncation order n")


class FormSettings(BaseModel):
    tol_g: float = Field(1e-8, gt=0, description="Residual tolerance relative to |G(0)|")
    tol_u: float = Field(1e-8, gt=0)
    max_iter: int = Field(100, ge=1)


class BoundSettings(BaseModel):
    nu_h: float = Field(1.0, gt=0, le=1)
    c_fe_samples: int = Field(100, ge=1)
    c_fe_seed: int = 0


def load_config(config_path: str = "config.yaml") -> Dict[str, Any]:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to config file

    Returns:
        Configuration dictionary
    """
    with open(config_path, "r") as f:
        config = yaml.safe_load(f)
    return config or {}


def get_experiment_config(config: Dict[str, Any], experiment_name: str) -> Dict[str, Any]:
    """
    Get configuration for specific experiment.

    Args:
        config: Full configuration dict
        experiment_name: Name of experiment

    Returns:
        Experiment configuration
    """
    experiments = config.get("experiments", {})

    if experiment_name not in experiments:
        raise ValueError(f"Experiment {experiment_name} not found in configuration")

    return dict(experiments[experiment_name] or {})


class RunConfig(BaseModel):
    """Everything needed to run one convergence study."""

    experiment: ExperimentId
    levels: Tuple[int, int] = Field(..., description="Inclusive level range (first, last)")
    scheme: Optional[SchemeKind] = None
    degree: Optional[Literal[1, 2]] = None

    # Model parameters
    y_max: Optional[float] = None
    x_hat: Optional[float] = None
    q_max: Optional[float] = None
    kle: Optional[KleSettings] = None
    reference_level: int = Field(12, ge=1)

    # Estimator settings
    samples: int = Field(10_000, ge=1)
    target_cov: float = Field(0.25, gt=0)
    replicates: int = Field(100, ge=1)
    seed: Optional[int] = None
    seed_fraction: float = Field(0.1, gt=0, le=1)
    workers: int = Field(1, ge=1)
    sym_diff_samples: int = Field(0, ge=0, description="Monte Carlo size for P[A xor A_h]; 0 disables")

    form: FormSettings = Field(default_factory=FormSettings)
    bounds: BoundSettings = Field(default_factory=BoundSettings)

    tail: int = Field(5, ge=2, description="Finest levels used for order fitting")
    mlfp_floor: float = Field(0.0, ge=0, description="MLFP distances below this are left out of the order fit")
    out: Optional[Path] = None
    format: Literal["csv", "json"] = "csv"
    results_dir: Path = Path("results")

    @field_validator("levels")
    @classmethod
    def _levels_non_empty(cls, value: Tuple[int, int]) -> Tuple[int, int]:
        first, last = value
        if first < 0 or last < first:
            raise ValueError(f"level range must be non-empty and non-negative, got {first}..{last}")
        return value

    @model_validator(mode="after")
    def _check_experiment_fields(self):
        if self.experiment is ExperimentId.ODE:
            if self.scheme is None:
                raise ValueError("ode experiment needs a scheme")
            if self.y_max is None or self.y_max <= 1:
                raise ValueError("ode experiment needs y_max > 1")
        elif self.scheme is not None:
            raise ValueError("scheme only applies to the ode experiment")

        if self.experiment is ExperimentId.BVP2D:
            if self.degree is None:
                raise ValueError("bvp2d experiment needs an element degree")
        elif self.degree is not None:
            raise ValueError("degree only applies to the bvp2d experiment")

        if self.experiment.sampling:
            if self.seed is None:
                raise ValueError(f"{self.experiment.value} is a sampling experiment and needs a seed")
            if self.kle is None or self.q_max is None:
                raise ValueError(f"{self.experiment.value} needs kle settings and q_max")
            if self.samples < 100:
                raise ValueError("SIS needs at least 100 samples")
            if self.levels[1] >= self.reference_level:
                raise ValueError("levels must stay below the reference level")
        return self

    @property
    def level_list(self) -> list:
        return list(range(self.levels[0], self.levels[1] + 1))

    @classmethod
    def from_config(cls, config: Dict[str, Any], experiment: str, **overrides) -> "RunConfig":
        """Merge the experiment section of a loaded config with overrides (None is ignored)."""
        data = get_experiment_config(config, experiment)
        data["experiment"] = experiment
        data.setdefault("form", config.get("form", {}))
        data.setdefault("bounds", config.get("bounds", {}))
        results_dir = config.get("output", {}).get("results_dir")
        if results_dir:
            data.setdefault("results_dir", results_dir)
        data.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**data)
