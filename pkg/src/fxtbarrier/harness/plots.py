"""Static SVG figures for one trace: workspace, tracking error, control effort, weights."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ..sim import SimulationTrace  # noqa: E402

PLOT_KINDS = ("trajectory", "tracking_error", "control", "weights")


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def plot_trajectory(trace: SimulationTrace, path):
    fig, axes = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    for i, ax in enumerate(axes):
        ax.plot(trace.t, trace.x[:, i], label="x")
        ax.plot(trace.t, trace.xr[:, i], "--", label="x_r")
        ax.plot(trace.t, trace.xd[:, i], ":", label="x_d")
        ax.plot(trace.t, trace.bound[:, i], "k", lw=0.8, label="bound")
        ax.plot(trace.t, -trace.bound[:, i], "k", lw=0.8)
        ax.set_ylabel(f"axis {i + 1} (m)")
    axes[0].legend(loc="upper right", fontsize="small", ncol=4)
    axes[0].set_title(f"{trace.label} position vs workspace bounds")
    axes[-1].set_xlabel("t (s)")
    return _save(fig, path)


def plot_tracking_error(trace: SimulationTrace, path):
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for i in range(2):
        ax.plot(trace.t, trace.error[:, i], label=f"axis {i + 1}")
    ax.set(xlabel="t (s)", ylabel="x - x_r (m)", title=f"{trace.label} tracking error")
    ax.legend(fontsize="small")
    return _save(fig, path)


def plot_control(trace: SimulationTrace, path):
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for i in range(2):
        ax.plot(trace.t, trace.u[:, i], label=f"u{i + 1}")
    ax.set(xlabel="t (s)", ylabel="force (N)", title=f"{trace.label} control effort")
    ax.legend(fontsize="small")
    return _save(fig, path)


def plot_weights(trace: SimulationTrace, path):
    fig, axes = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    for i, ax in enumerate(axes):
        ax.plot(trace.t, trace.weights[:, i, :], lw=0.8)
        ax.set_ylabel(f"W axis {i + 1}")
    axes[0].set_title(f"{trace.label} network weights")
    axes[-1].set_xlabel("t (s)")
    return _save(fig, path)


_PLOTTERS = {
    "trajectory": plot_trajectory,
    "tracking_error": plot_tracking_error,
    "control": plot_control,
    "weights": plot_weights,
}


def safe_stem(label: str) -> str:
    return label.replace("+", "_").lower()


def save_trace_plots(trace: SimulationTrace, outdir, stem=None) -> list:
    """Write the four figures; returns their paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = stem or safe_stem(trace.label or "trace")
    return [_PLOTTERS[k](trace, outdir / f"{stem}_{k}.svg") for k in PLOT_KINDS]
