"""CSV serialization of traces and comparison tables."""

from __future__ import annotations

import csv
import warnings
from pathlib import Path

import numpy as np

from ..dynamics import RobotParams
from ..sim import SimulationTrace
from .metrics import MetricsReport

FLOAT_FMT = "%.17g"
_PAIRS = (
    ("q", "q"), ("qd", "qd"), ("x", "x"), ("xd", "xd"), ("xr", "xr"),
    ("z1", "z1_"), ("z2", "z2_"), ("u", "u"), ("fe", "fe"), ("bound", "b"),
)


def trace_columns(n_nodes=8) -> list:
    cols = ["t"]
    for _, prefix in _PAIRS:
        cols += [f"{prefix}1", f"{prefix}2"]
    cols.append("V1")
    cols += [f"w{axis}_{j}" for axis in (1, 2) for j in range(1, n_nodes + 1)]
    return cols


def trace_matrix(trace: SimulationTrace) -> np.ndarray:
    n = len(trace)
    blocks = [trace.t.reshape(n, 1)]
    blocks += [getattr(trace, name).reshape(n, 2) for name, _ in _PAIRS]
    blocks.append(trace.v1.reshape(n, 1))
    blocks.append(trace.weights.reshape(n, 2 * trace.n_nodes))
    return np.hstack(blocks)


def write_trace_csv(trace: SimulationTrace, path) -> Path:
    """Write one row per logged sample; an empty trace gives a header-only file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ",".join(trace_columns(trace.n_nodes))
    np.savetxt(path, trace_matrix(trace), fmt=FLOAT_FMT, delimiter=",", header=header, comments="")
    return path


def read_trace_csv(path, robot: RobotParams | None = None, label="") -> SimulationTrace:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip().split(",")
    n_nodes = (len(header) - 22) // 2
    if header != trace_columns(n_nodes):
        raise ValueError(f"{path}: unexpected trace columns")
    with warnings.catch_warnings():
        # a header-only file is a valid empty trace
        warnings.filterwarnings("ignore", "loadtxt: input contained no data", UserWarning)
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2).reshape(-1, len(header))
    n = data.shape[0]
    arrays = {"t": data[:, 0].copy()}
    for k, (name, _) in enumerate(_PAIRS):
        arrays[name] = data[:, 1 + 2 * k : 3 + 2 * k].copy()
    arrays["v1"] = data[:, 21].copy()
    arrays["weights"] = data[:, 22:].reshape(n, 2, n_nodes).copy()
    return SimulationTrace(**arrays, robot=robot or RobotParams(), label=label)


def write_comparison_csv(reports, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(MetricsReport.FIELDS)
        for rep in reports:
            w.writerow(
                [FLOAT_FMT % v if isinstance(v, (float, np.floating)) else v for v in rep.row()]
            )
    return path
