"""Scalar summaries of a simulation trace."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..control import convergence_bound
from ..errors import ConstraintBreach, EmptyWindow
from ..sim import ScenarioConfig, SimulationTrace

NEVER_SETTLES = math.inf
SETTLE_BAND = 5e-3
# the human force is fully released at this time
RELEASE_TIME = 31.0


def _window_mask(t, window):
    if window is None:
        return np.ones(len(t), dtype=bool)
    t0, t1 = window
    return (t >= t0) & (t <= t1)


def rmse(trace: SimulationTrace, axis: int, window=None) -> float:
    """Root-mean-square of ``x - xr`` on one Cartesian axis over ``window = (t0, t1)``."""
    mask = _window_mask(trace.t, window)
    if not mask.any():
        raise EmptyWindow(f"no trace samples in window {window}")
    e = trace.x[mask, axis] - trace.xr[mask, axis]
    return float(np.sqrt(np.mean(e * e)))


class Margin(NamedTuple):
    margin: np.ndarray  # per-axis min of bound - |x|
    time: np.ndarray  # where each minimum occurs


def constraint_margin(trace: SimulationTrace) -> Margin:
    if len(trace) == 0:
        raise EmptyWindow("constraint margin of an empty trace")
    gap = trace.bound - np.abs(trace.x)
    idx = np.argmin(gap, axis=0)
    return Margin(gap[idx, [0, 1]], trace.t[idx])


def settling_series(t, err, band, start=0.0) -> float:
    """Time after ``start`` from which ``err`` stays strictly below ``band``.

    The crossing is interpolated linearly between samples. Returns
    ``NEVER_SETTLES`` when the last sample is still outside the band.
    """
    if not band > 0:
        raise ValueError(f"band must be positive, got {band}")
    t = np.asarray(t, dtype=float)
    err = np.asarray(err, dtype=float)
    keep = t >= start
    t, err = t[keep], err[keep]
    if len(t) == 0:
        raise EmptyWindow(f"no samples after t={start}")
    outside = np.nonzero(~(err < band))[0]
    if len(outside) == 0:
        return 0.0
    i = outside[-1]
    if i == len(t) - 1:
        return NEVER_SETTLES
    frac = (err[i] - band) / (err[i] - err[i + 1])
    return float(t[i] + frac * (t[i + 1] - t[i]) - start)


def settling_time(trace: SimulationTrace, band=SETTLE_BAND, start=0.0) -> float:
    """Settling of the Euclidean tracking error ``||x - xr||``."""
    return settling_series(trace.t, np.linalg.norm(trace.error, axis=1), band, start)


@dataclass
class MetricsReport:
    label: str
    rmse: np.ndarray
    margin: np.ndarray
    margin_time: np.ndarray
    settling_time: float
    tmax: float
    peak_control: float
    breaches: int
    aborted: str = ""

    FIELDS = (
        "variant", "rmse_1", "rmse_2", "margin_1", "margin_2", "margin_time_1", "margin_time_2",
        "settling_time", "tmax", "peak_control", "breaches", "aborted",
    )

    def row(self) -> list:
        return [
            self.label, *self.rmse, *self.margin, *self.margin_time,
            self.settling_time, self.tmax, self.peak_control, self.breaches, self.aborted,
        ]

    @property
    def safe(self) -> bool:
        return self.breaches == 0 and bool(np.all(self.margin > 0))


def compute_metrics(
    trace: SimulationTrace, cfg: ScenarioConfig, band=SETTLE_BAND, settle_start=RELEASE_TIME, window=None
) -> MetricsReport:
    """Metrics for one run; ``tmax`` is only defined for the fixed-time variant."""
    empty = len(trace) == 0
    if empty:
        # a run stopped at its first step logs nothing; only the abort remains
        margin, margin_time = np.full(2, math.inf), np.full(2, math.nan)
    else:
        m = constraint_margin(trace)
        margin, margin_time = m.margin.copy(), m.time.copy()
    breaches = trace.breaches
    if isinstance(trace.abort, ConstraintBreach):
        # the offending state was never logged; fold it into the margin
        a = trace.abort
        gap = a.bound - abs(a.position)
        if gap < margin[a.axis]:
            margin[a.axis], margin_time[a.axis] = gap, a.t
    if np.any(margin <= 0):
        breaches = max(breaches, 1)
    try:
        settle = settling_time(trace, band, settle_start)
    except EmptyWindow:
        settle = NEVER_SETTLES
    tmax = (
        convergence_bound(cfg.gains, cfg.robot, cfg.variant.model_free)
        if cfg.variant.fixed_time
        else math.nan
    )
    return MetricsReport(
        label=trace.label or cfg.variant.label,
        rmse=np.full(2, math.nan) if empty else np.array([rmse(trace, i, window) for i in range(2)]),
        margin=margin,
        margin_time=margin_time,
        settling_time=settle,
        tmax=tmax,
        peak_control=math.nan if empty else float(np.max(np.linalg.norm(trace.u, axis=1))),
        breaches=int(breaches),
        aborted="" if trace.abort is None else str(trace.abort),
    )
