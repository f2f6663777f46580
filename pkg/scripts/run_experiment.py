"""
Unified experiment runner - single entry point for all studies.

Usage:
    python scripts/run_experiment.py ode-experiment --scheme explicit-euler --levels 0..9
    python scripts/run_experiment.py bvp2d-experiment --degree 2 --format json
    python scripts/run_experiment.py highdim-experiment --dim 10 --replicates 20 --seed 1
    python scripts/run_experiment.py bounds-table --out constants.csv
    python scripts/run_experiment.py kle-info --terms 50 --correlation-length 0.1
    python scripts/run_experiment.py --list
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

# Add parent directories to path
parent_dir = Path(__file__).parent.parent
sys.path.insert(0, str(parent_dir / "src"))
sys.path.insert(0, str(parent_dir))

from experiments import list_experiments, run_experiment
from pfbounds.core import PfBoundsError, SchemeKind, StepSizeTooLargeError, build_kle, std_normal_quantile
from pfbounds.reliability import DiscretizationSpec, c21, c21_sharp, c22, c4
from pfbounds.utils import RunConfig, load_config

# Grids of the bounds-table subcommand
SIGMA2_GRID = (0.1, 1.0, 10.0)
PF_GRID = np.logspace(-10, np.log10(0.4), 41)
C_FE_GRID = (0.1, 1.0, 10.0)
H_GRID = np.logspace(-6, 0, 49)
N_GRID = (1, 2, 5, 10, 20, 50, 100, 1000, 10000)


def parse_levels(text: str) -> Tuple[int, int]:
    """Parse 'a..b' (or a single level 'a') into an inclusive range."""
    try:
        if ".." in text:
            first, last = (int(part) for part in text.split("..", 1))
        else:
            first = last = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels must look like 'a..b', got {text!r}")
    if first < 0 or last < first:
        raise argparse.ArgumentTypeError(f"level range must be non-empty and non-negative, got {text!r}")
    return first, last


def bounds_table(beta: float = 4.0) -> pd.DataFrame:
    """
    Long-format table of the bound constants.

    c21 and c21_sharp over P_f for several variances (beta = -sigma Phi^-1(P_f)),
    c22 over h at fixed beta for s in {1, 2} and several C_FE, and c4 over n.
    Rows where h is too large for c22 are left out.
    """
    records = []
    for sigma2 in SIGMA2_GRID:
        sigma = np.sqrt(sigma2)
        for p_f in PF_GRID:
            b = -sigma * std_normal_quantile(p_f)
            for name, fn in (("c21", c21), ("c21_sharp", c21_sharp)):
                records.append({"constant": name, "beta": b, "sigma2": sigma2, "p_f": p_f,
                                "s": np.nan, "c_fe": 1.0, "h": np.nan, "n": np.nan,
                                "value": fn(b, sigma, 1.0)})
    for s in (1.0, 2.0):
        for c_fe in C_FE_GRID:
            for h in H_GRID:
                try:
                    value = c22(beta, 1.0, DiscretizationSpec(h=h, s=s, c_fe=c_fe))
                except StepSizeTooLargeError:
                    continue
                records.append({"constant": "c22", "beta": beta, "sigma2": 1.0, "p_f": np.nan,
                                "s": s, "c_fe": c_fe, "h": h, "n": np.nan, "value": value})
    for n in N_GRID:
        records.append({"constant": "c4", "beta": np.nan, "sigma2": np.nan, "p_f": np.nan,
                        "s": np.nan, "c_fe": np.nan, "h": np.nan, "n": n, "value": c4(n)})
    return pd.DataFrame.from_records(records)


def _add_study_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--levels", type=parse_levels, help="Inclusive level range 'a..b'")
    parser.add_argument("--out", type=Path, help="Report path (default: <results_dir>/<experiment>/table.<format>)")
    parser.add_argument("--format", choices=["csv", "json"], help="Report format (default: csv)")
    parser.add_argument("--tail", type=int, help="Finest levels used for order fitting (default: 5)")
    parser.add_argument("--results-dir", type=Path, help="Directory for checkpoints and reports")
    parser.add_argument("--quiet", "-q", action="store_true", help="Only print errors")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfbounds",
        description="pfbounds - discretization error bounds for failure probabilities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Explicit Euler on levels 0..9, CSV report
  pfbounds ode-experiment --scheme explicit-euler --levels 0..9 --out euler.csv

  # Quadratic elements, JSON report with diagnostics
  pfbounds bvp2d-experiment --degree 2 --format json

  # 10-dimensional diffusion study with 20 replicates on 4 processes
  pfbounds highdim-experiment --dim 10 --replicates 20 --seed 1 --workers 4

  # List all available experiments
  pfbounds --list
        """,
    )
    parser.add_argument("--config", default="config.yaml", help="Path to config file")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level")
    parser.add_argument("--list", "-l", action="store_true", help="List all available experiments")

    subparsers = parser.add_subparsers(dest="command")

    ode = subparsers.add_parser("ode-experiment", help="Scalar ODE convergence study")
    ode.add_argument("--scheme", choices=[kind.value for kind in SchemeKind], help="Time-stepping scheme")
    _add_study_arguments(ode)

    bvp = subparsers.add_parser("bvp2d-experiment", help="Two-parameter BVP convergence study")
    bvp.add_argument("--degree", type=int, choices=[1, 2], help="Element degree")
    _add_study_arguments(bvp)

    highdim = subparsers.add_parser("highdim-experiment", help="High-dimensional diffusion study (SIS)")
    highdim.add_argument("--dim", type=int, choices=[10, 50], default=10, help="Number of KLE terms")
    highdim.add_argument("--samples", type=int, help="SIS samples per tempering step")
    highdim.add_argument("--replicates", type=int, help="Independent SIS runs per level")
    highdim.add_argument("--target-cov", type=float, help="Target coefficient of variation of the weights")
    highdim.add_argument("--seed", type=int, help="Base seed of the replicate streams")
    highdim.add_argument("--workers", type=int, help="Parallel replicate processes")
    _add_study_arguments(highdim)

    table = subparsers.add_parser("bounds-table", help="Print the bound constants as CSV")
    table.add_argument("--beta", type=float, default=4.0, help="Reliability index for the c22 grid")
    table.add_argument("--out", type=Path, help="Write the CSV here instead of stdout")

    kle = subparsers.add_parser("kle-info", help="Eigenvalues of the exponential-covariance KLE")
    kle.add_argument("--terms", type=int, default=10, help="Truncation order n")
    kle.add_argument("--correlation-length", type=float, default=0.3, help="Correlation length lambda")
    kle.add_argument("--mean", type=float, default=0.1, help="Field mean")
    kle.add_argument("--std", type=float, default=0.2, help="Field standard deviation")
    kle.add_argument("--out", type=Path, help="Write the mode table as CSV")

    return parser


def _run_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    if args.command == "ode-experiment":
        experiment, overrides = "ode", {"scheme": args.scheme}
    elif args.command == "bvp2d-experiment":
        experiment, overrides = "bvp2d", {"degree": args.degree}
    else:
        experiment = f"highdim{args.dim}"
        overrides = {
            "samples": args.samples,
            "replicates": args.replicates,
            "target_cov": args.target_cov,
            "seed": args.seed,
            "workers": args.workers,
        }
    overrides.update({
        "levels": args.levels,
        "out": args.out,
        "format": args.format,
        "tail": args.tail,
        "results_dir": args.results_dir,
    })
    try:
        config = load_config(args.config)
        return RunConfig.from_config(config, experiment, **overrides)
    except (OSError, ValueError, ValidationError) as exc:
        parser.error(f"invalid configuration for {experiment}: {exc}")


def _write_or_print(frame: pd.DataFrame, out: Optional[Path]) -> None:
    if out is None:
        print(frame.to_csv(index=False, float_format="%.12e", lineterminator="\n"), end="")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, float_format="%.12e", lineterminator="\n")
    print(f"[OK] Saved to: {out}")


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")

    # List experiments if requested
    if args.list:
        list_experiments()
        return 0

    if not args.command:
        parser.error("a subcommand is required (or use --list to see available experiments)")

    try:
        if args.command == "bounds-table":
            _write_or_print(bounds_table(args.beta), args.out)
        elif args.command == "kle-info":
            kle = build_kle(args.mean, args.std, args.correlation_length, args.terms)
            if args.out is None:
                print(f"Captured variance: {kle.captured_variance:.6f}")
            _write_or_print(kle.to_frame(), args.out)
        else:
            config = _run_config(args, parser)
            run_experiment(config, verbose=not args.quiet)
    except PfBoundsError as exc:
        message = str(exc) if hasattr(exc, "stage") else f"stage={args.command}: {exc}"
        print(f"[ERROR] {message}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
