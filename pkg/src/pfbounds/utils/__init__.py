"""Utility modules for configuration, statistics and reporting."""

from .config import (
    BoundSettings,
    ExperimentId,
    FormSettings,
    KleSettings,
    RunConfig,
    get_experiment_config,
    load_config,
)
from .reporting import (
    CSV_COLUMNS,
    ConvergenceRow,
    ConvergenceTable,
    FittedOrders,
    ReferenceValues,
    print_convergence_table,
    write_csv,
    write_json,
    write_report,
)
from .statistics import ReplicateSummary, confidence_interval, fit_order, replicate_summary

__all__ = [
    "load_config",
    "get_experiment_config",
    "RunConfig",
    "ExperimentId",
    "KleSettings",
    "FormSettings",
    "BoundSettings",
    "fit_order",
    "confidence_interval",
    "replicate_summary",
    "ReplicateSummary",
    "CSV_COLUMNS",
    "ConvergenceRow",
    "ConvergenceTable",
    "FittedOrders",
    "ReferenceValues",
    "write_csv",
    "write_json",
    "write_report",
    "print_convergence_table",
]
