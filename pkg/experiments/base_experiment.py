"""
Base class for convergence studies.

A study computes reference values once, then walks the discretization
levels: for each level it builds G_h, estimates P_f,h, runs FORM, assembles
the error bounds and appends one row to the convergence table. Partial
tables are checkpointed after every level.
"""

import json
import logging
from abc import ABC, abstractmethod
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import List, Optional

import numpy as np

# Add src to path for imports
import sys
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from pfbounds.core import ExperimentStageError, LimitStateEvaluator, StepSizeTooLargeError
from pfbounds.reliability import (
    DiscretizationSpec,
    FormResult,
    assemble_bounds,
    estimate_c3,
    find_mlfp,
    mlfp_distance,
    symmetric_difference_mc,
)
from pfbounds.utils import (
    ConvergenceRow,
    ConvergenceTable,
    ReferenceValues,
    ReplicateSummary,
    RunConfig,
    print_convergence_table,
    write_report,
)

logger = logging.getLogger(__name__)


@contextmanager
def stage(level: Optional[int], name: str):
    """Re-raise any error as ExperimentStageError tagged with level and stage."""
    try:
        yield
    except ExperimentStageError:
        raise
    except Exception as exc:
        raise ExperimentStageError(level, name, exc) from exc


class BaseExperiment(ABC):
    """Abstract base class for all convergence studies."""

    def __init__(self, config: RunConfig, verbose: bool = True):
        """
        Initialize experiment.

        Args:
            config: Validated run configuration
            verbose: Print progress banners
        """
        self.config = config
        self.experiment_name = config.experiment.value
        self.verbose = verbose
        self.results_dir = Path(config.results_dir) / self.experiment_name

        # Reference quantities (initialized in setup())
        self.exact_lsf: Optional[LimitStateEvaluator] = None
        self.reference_form: Optional[FormResult] = None
        self.reference: Optional[ReferenceValues] = None

        # Results storage
        self.rows: List[ConvergenceRow] = []

    def _print(self, message: str = "") -> None:
        if self.verbose:
            print(message)

    @property
    @abstractmethod
    def dimension(self) -> int:
        """Number of random parameters n."""

    @abstractmethod
    def build_exact(self) -> LimitStateEvaluator:
        """Reference limit state G."""

    @abstractmethod
    def build_level(self, level: int) -> LimitStateEvaluator:
        """Discretized limit state G_h with h = 2^-level."""

    @abstractmethod
    def estimate(self, lsf: LimitStateEvaluator) -> ReplicateSummary:
        """Failure probability of ``lsf`` (mean and spread over replicates)."""

    def find_mlfp(self, lsf: LimitStateEvaluator) -> FormResult:
        form = self.config.form
        return find_mlfp(lsf, tol_g=form.tol_g, tol_u=form.tol_u, max_iter=form.max_iter)

    def setup(self):
        """Compute reference values and prepare the results directory."""
        self._print("\n[1/3] Computing reference values...")

        with stage(None, "build"):
            self.exact_lsf = self.build_exact()
        with stage(None, "estimate"):
            summary = self.estimate(self.exact_lsf)
        with stage(None, "form"):
            self.reference_form = self.find_mlfp(self.exact_lsf)

        self.reference = ReferenceValues(
            p_f=summary.mean,
            p_form=self.reference_form.p_form,
            beta=self.reference_form.beta,
            replicate_std=summary.std,
            replicate_cov=summary.cov if summary.n > 1 else 0.0,
            mean_cov=summary.mean_cov if summary.n > 1 else 0.0,
            ci_lower=summary.ci_lower if summary.n > 1 else None,
            ci_upper=summary.ci_upper if summary.n > 1 else None,
        )
        self._print(f"  [OK] P_f = {self.reference.p_f:.6e}, "
                    f"P_f FORM = {self.reference.p_form:.6e} (beta = {self.reference.beta:.6f})")

        self._print("\n[2/3] Preparing experiment...")
        self.results_dir.mkdir(parents=True, exist_ok=True)
        self._print(f"  [OK] Results will be saved to: {self.results_dir}/")

    def _bounds(self, level: int, lsf: LimitStateEvaluator, form_h: FormResult):
        settings = self.config.bounds
        c3 = estimate_c3(
            self.exact_lsf,
            lsf,
            form_h.mlfp,
            nu_h=settings.nu_h,
            mlfp=self.reference_form.mlfp,
            c_fe=lsf.tag.c_fe,
            samples=settings.c_fe_samples,
            seed=settings.c_fe_seed,
        )
        spec = DiscretizationSpec(h=lsf.tag.h, s=lsf.tag.s, c_fe=c3)
        try:
            report = assemble_bounds(form_h, spec, c3, self.dimension, beta_exact=self.reference_form.beta)
        except StepSizeTooLargeError as exc:
            logger.warning("bound skipped at level %d: %s", level, exc)
            return c3, np.nan, np.nan
        return c3, report.bound_abs, report.bound_rel_form

    def run_level(self, level: int) -> ConvergenceRow:
        """Run every stage at one level and return its row."""
        with stage(level, "build"):
            lsf = self.build_level(level)
        with stage(level, "estimate"):
            summary = self.estimate(lsf)
        with stage(level, "form"):
            form_h = self.find_mlfp(lsf)
        with stage(level, "bounds"):
            c3, bound_abs, bound_rel_form = self._bounds(level, lsf, form_h)

        p_sym_diff = None
        if self.config.sym_diff_samples:
            with stage(level, "diagnostics"):
                p_sym_diff = symmetric_difference_mc(
                    self.exact_lsf, lsf, self.config.sym_diff_samples, self.config.seed or 0
                ).value

        ref = self.reference
        return ConvergenceRow(
            level=level,
            h=lsf.tag.h,
            p_fh=summary.mean,
            p_form_h=form_h.p_form,
            rel_err=abs(summary.mean - ref.p_f) / ref.p_f,
            rel_err_form=abs(form_h.p_form - ref.p_form) / ref.p_form,
            bound_abs=bound_abs,
            replicate_std=summary.std,
            beta_h=form_h.beta,
            mlfp_distance=mlfp_distance(form_h, self.reference_form),
            c3=c3,
            bound_rel_form=bound_rel_form,
            form_converged=form_h.converged,
            p_sym_diff=p_sym_diff,
        )

    def table(self) -> ConvergenceTable:
        return ConvergenceTable(
            experiment=self.experiment_name,
            rows=self.rows,
            reference=self.reference,
            config=self.config.model_dump(mode="json"),
        )

    def run(self) -> ConvergenceTable:
        """Run the full experiment."""
        if self.reference is None:
            self.setup()

        levels = self.config.level_list
        self._print(f"\n[3/3] Running {self.experiment_name} on levels {levels[0]}..{levels[-1]}...")
        self._print("=" * 80)

        for level in levels:
            row = self.run_level(level)
            self.rows.append(row)
            status = "[OK]" if row.form_converged else "[FAIL]"
            self._print(f"  {status} level {level:2d}: p_fh={row.p_fh:.5e} p_form_h={row.p_form_h:.5e} "
                        f"rel_err={row.rel_err:.3e} bound_abs={row.bound_abs:.3e}")
            self.save_checkpoint()

        table = self.table()
        with stage(None, "report"):
            table.fit_orders(self.config.tail, self.config.mlfp_floor)
            path = self.save_report(table)

        if self.verbose:
            print_convergence_table(table)
        self._print(f"[OK] Report saved to: {path}")
        self._print("=" * 80 + "\n")
        return table

    def save_checkpoint(self):
        """Save the rows computed so far."""
        checkpoint_file = self.results_dir / "checkpoint.json"
        checkpoint = {
            "experiment": self.experiment_name,
            "rows": [row.model_dump() for row in self.rows],
            "timestamp": datetime.now().isoformat(),
        }
        with open(checkpoint_file, "w") as f:
            json.dump(checkpoint, f, indent=2)
        self._print(f"  [CHECKPOINT] Saved {len(self.rows)} levels")

    def save_report(self, table: ConvergenceTable) -> Path:
        """Write the final table to --out or <results_dir>/<experiment>/table.<format>."""
        path = self.config.out or self.results_dir / f"table.{self.config.format}"
        return write_report(table, path, self.config.format)
