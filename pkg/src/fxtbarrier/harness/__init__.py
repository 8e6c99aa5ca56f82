"""Benchmark orchestration: metrics, comparison matrix, CSV export and figures."""

from .compare import ComparisonMatrix, export_comparison, run_comparison
from .export import read_trace_csv, trace_columns, write_comparison_csv, write_trace_csv
from .metrics import (
    NEVER_SETTLES,
    MetricsReport,
    compute_metrics,
    constraint_margin,
    rmse,
    settling_series,
    settling_time,
)
from .plots import save_trace_plots

__all__ = [
    "ComparisonMatrix",
    "MetricsReport",
    "NEVER_SETTLES",
    "compute_metrics",
    "constraint_margin",
    "export_comparison",
    "read_trace_csv",
    "rmse",
    "run_comparison",
    "save_trace_plots",
    "settling_series",
    "settling_time",
    "trace_columns",
    "write_comparison_csv",
    "write_trace_csv",
]
