"""
Convergence tables: one row per discretization level, fitted orders, and
the CSV/JSON writers plus the console summary used by the experiments.
"""

import json
import logging
import math
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator

from ..core.errors import FitError
from .statistics import fit_order

logger = logging.getLogger(__name__)

# Column order of the CSV report; documented in the README
CSV_COLUMNS = [
    "level",
    "h",
    "p_fh",
    "p_form_h",
    "rel_err",
    "rel_err_form",
    "bound_abs",
    "replicate_std",
]

CSV_FLOAT_FORMAT = "%.12e"


class ConvergenceRow(BaseModel):
    """Results at one discretization level."""

    level: int = Field(..., ge=0)
    h: float = Field(..., gt=0)
    p_fh: float = Field(..., ge=0, le=1, description="Discretized failure probability")
    p_form_h: float = Field(..., ge=0, le=1, description="FORM probability of the discretized model")
    rel_err: float = Field(..., ge=0)
    rel_err_form: float = Field(..., ge=0)
    bound_abs: float = Field(..., description="Absolute error bound; NaN when h is too large")
    replicate_std: float = Field(0.0, ge=0)

    # Diagnostics, JSON only
    beta_h: float
    mlfp_distance: float = Field(..., ge=0)
    c3: float
    bound_rel_form: float
    form_converged: bool
    p_sym_diff: Optional[float] = Field(None, description="Monte Carlo estimate of P[A xor A_h]")


class ReferenceValues(BaseModel):
    p_f: float = Field(..., gt=0, le=1)
    p_form: float = Field(..., gt=0, le=1)
    beta: float
    replicate_std: float = 0.0
    replicate_cov: float = Field(0.0, description="cov of a single replicate")
    mean_cov: float = Field(0.0, description="cov of the replicate mean, replicate_cov / sqrt(replicates)")
    ci_lower: Optional[float] = None
    ci_upper: Optional[float] = None


class FittedOrders(BaseModel):
    """Least-squares log-log slopes; NaN when a fit had too few usable points."""

    s_est: float
    s_est_form: float
    s_est_bound: float
    s_est_mlfp: float
    tail: int
    mlfp_floor: float = Field(0.0, description="MLFP distances below this were left out of s_est_mlfp")


class ConvergenceTable(BaseModel):
    experiment: str
    rows: List[ConvergenceRow]
    reference: ReferenceValues
    orders: Optional[FittedOrders] = None
    config: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_h_decreasing(self):
        hs = [row.h for row in self.rows]
        if any(b >= a for a, b in zip(hs, hs[1:])):
            raise ValueError("h must be strictly decreasing down the rows")
        return self

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows], dtype=float)

    def fit_orders(self, tail: int = 5, mlfp_floor: float = 0.0) -> FittedOrders:
        """
        Fit convergence orders on the finest ``tail`` rows.

        MLFP distances below ``mlfp_floor`` are FORM tolerance noise and are
        left out of the MLFP-distance fit.
        """
        hs = self.column("h")

        def safe_fit(name: str, errs: Optional[np.ndarray] = None) -> float:
            errs = self.column(name) if errs is None else errs
            try:
                return fit_order(hs, errs, tail)
            except FitError as exc:
                logger.warning("no order for %s in %s: %s", name, self.experiment, exc)
                return math.nan

        distances = self.column("mlfp_distance")
        self.orders = FittedOrders(
            s_est=safe_fit("rel_err"),
            s_est_form=safe_fit("rel_err_form"),
            s_est_bound=safe_fit("bound_abs"),
            s_est_mlfp=safe_fit("mlfp_distance", np.where(distances >= mlfp_floor, distances, np.nan)),
            tail=tail,
            mlfp_floor=mlfp_floor,
        )
        return self.orders

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([row.model_dump() for row in self.rows])
        if frame.empty:
            return pd.DataFrame(columns=CSV_COLUMNS)
        return frame[CSV_COLUMNS]


def write_csv(table: ConvergenceTable, path: Union[str, Path]) -> Path:
    """Write the rows with the fixed column order; output is deterministic."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
    return path


def write_json(table: ConvergenceTable, path: Union[str, Path]) -> Path:
    """Rows, fitted orders and reference values plus an echo of the run config."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(table.model_dump(), f, indent=2, default=str)
    return path


def write_report(table: ConvergenceTable, path: Union[str, Path], fmt: str = "csv") -> Path:
    if fmt == "csv":
        return write_csv(table, path)
    if fmt == "json":
        return write_json(table, path)
    raise ValueError(f"unknown report format: {fmt}")


def print_convergence_table(table: ConvergenceTable) -> None:
    """
    Pretty print a convergence table.

    Args:
        table: Completed table, ideally with fitted orders
    """
    print("\n" + "=" * 80)
    print(f"CONVERGENCE: {table.experiment}")
    print("=" * 80)

    ref = table.reference
    print(f"\nReference P_f:      {ref.p_f:.6e}")
    print(f"Reference P_f FORM: {ref.p_form:.6e}  (beta = {ref.beta:.6f})")
    if ref.replicate_cov:
        print(f"Replicate cov:      {ref.replicate_cov:.3e}")
        print(f"cov of the mean:    {ref.mean_cov:.3e}")

    print(f"\n{'level':>5} {'h':>10} {'p_fh':>12} {'p_form_h':>12} {'rel_err':>10} "
          f"{'rel_err_form':>12} {'bound_abs':>10}")
    for row in table.rows:
        print(f"{row.level:>5d} {row.h:>10.3e} {row.p_fh:>12.5e} {row.p_form_h:>12.5e} "
              f"{row.rel_err:>10.3e} {row.rel_err_form:>12.3e} {row.bound_abs:>10.3e}")

    if table.orders is not None:
        orders = table.orders
        print(f"\nFitted orders (finest {orders.tail} levels):")
        print(f"  rel_err:       {orders.s_est:.3f}")
        print(f"  rel_err_form:  {orders.s_est_form:.3f}")
        print(f"  bound_abs:     {orders.s_est_bound:.3f}")
        print(f"  mlfp distance: {orders.s_est_mlfp:.3f}")

    print(f"\nTimestamp: {datetime.now().isoformat()}")
    print("\n" + "=" * 80 + "\n")
