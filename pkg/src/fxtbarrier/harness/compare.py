"""The 3 x 2 controller comparison on one shared scenario."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..control import ALL_VARIANTS
from ..sim import ScenarioConfig, run_scenario
from .export import write_comparison_csv, write_trace_csv
from .metrics import MetricsReport, compute_metrics
from .plots import safe_stem, save_trace_plots

log = logging.getLogger(__name__)

TABLE_NAME = "comparison.csv"


@dataclass
class ComparisonMatrix:
    config: ScenarioConfig
    reports: dict = field(default_factory=dict)  # label -> MetricsReport
    traces: dict = field(default_factory=dict)  # label -> SimulationTrace

    def __getitem__(self, label) -> MetricsReport:
        return self.reports[label]

    @property
    def any_breach(self) -> bool:
        return any(r.breaches > 0 for r in self.reports.values())

    def format_table(self) -> str:
        head = f"{'variant':<14}{'rmse_1':>11}{'rmse_2':>11}{'margin_1':>10}{'margin_2':>10}{'settle':>9}{'tmax':>11}{'breach':>7}"
        lines = [head]
        for r in self.reports.values():
            lines.append(
                f"{r.label:<14}{r.rmse[0]:>11.3e}{r.rmse[1]:>11.3e}{r.margin[0]:>10.4f}{r.margin[1]:>10.4f}"
                f"{r.settling_time:>9.3g}{r.tmax:>11.4g}{r.breaches:>7d}"
            )
        return "\n".join(lines)


def run_comparison(cfg: ScenarioConfig, variants=ALL_VARIANTS, keep_traces=True) -> ComparisonMatrix:
    """Run every variant on ``cfg`` in tolerant mode so one breach cannot hide the others.

    Runs are sequential: each is single-threaded numpy scalar work and the
    whole matrix fits comfortably in a few minutes.
    """
    base = replace(cfg, strict=False)
    digest = base.digest()
    out = ComparisonMatrix(base)
    for variant in variants:
        run_cfg = base.with_variant(variant)
        # only the variant switch may differ between rows
        assert run_cfg.digest() == digest, "comparison rows diverged from the shared scenario"
        trace = run_scenario(run_cfg)
        rep = compute_metrics(trace, run_cfg)
        log.info("%s done in %.1f s", variant.label, trace.wall_time)
        out.reports[variant.label] = rep
        if keep_traces:
            out.traces[variant.label] = trace
    return out


def export_comparison(matrix: ComparisonMatrix, outdir, save_traces=False) -> list:
    """One table file plus four figures per variant; trace CSVs only on request."""
    outdir = Path(outdir)
    paths = [write_comparison_csv(matrix.reports.values(), outdir / TABLE_NAME)]
    for label, trace in matrix.traces.items():
        paths += save_trace_plots(trace, outdir)
        if save_traces:
            paths.append(write_trace_csv(trace, outdir / f"{safe_stem(label)}_trace.csv"))
    return paths

