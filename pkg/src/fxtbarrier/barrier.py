"""Time-varying integral barrier function and its auxiliary terms.

Per axis the barrier value is

    V1(z1; xr, kc) = integral_0^z1  d kc^2 / (kc^2 - (d + xr)^2)  dd

with ``eta = z1 + xr`` the constrained position. It is finite exactly while
``|eta| < kc`` and grows without bound as ``|eta| -> kc``. ``rho`` and
``omega`` are the coefficients that appear when V1 is differentiated along
a moving reference and a moving bound; both have removable singularities at
``z1 = 0`` which are replaced by their limits below ``EPS_Z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, OutOfBarrier

EPS_Z = 1e-8
# Below this |z1| the closed-form V1 loses digits to cancellation; a cubic
# Taylor expansion is exact to ~1e-12 relative there.
_V1_SERIES = 1e-6


@dataclass(frozen=True)
class ConstraintProfile:
    """Per-axis bound ``|offset + amplitude * cos(frequency * t + phase)|``.

    A negative offset describes a lower boundary; only its magnitude is used
    as the symmetric bound. Defaults reproduce the benchmark workspace.
    """

    offset: tuple = (0.48, -0.48)
    amplitude: tuple = (0.1, 0.1)
    frequency: tuple = (0.2, 0.2)
    phase: tuple = (-math.pi / 3, -math.pi / 2)

    def __post_init__(self):
        for name in ("offset", "amplitude", "frequency", "phase"):
            values = np.asarray(getattr(self, name), dtype=float).reshape(-1)
            if not np.all(np.isfinite(values)):
                raise ValueError(f"ConstraintProfile.{name} must be finite")
            object.__setattr__(self, name, tuple(float(v) for v in values))
        if len({len(self.offset), len(self.amplitude), len(self.frequency), len(self.phase)}) != 1:
            raise ValueError("ConstraintProfile fields must have one entry per axis")
        if self.min_bound() <= 0:
            raise ValueError(
                "ConstraintProfile must stay positive: need |offset| > |amplitude| on every axis"
            )

    def _raw(self, t):
        arg = np.multiply(self.frequency, t) + self.phase
        raw = np.add(self.offset, np.multiply(self.amplitude, np.cos(arg)))
        raw_rate = -np.multiply(np.multiply(self.amplitude, self.frequency), np.sin(arg))
        return raw, raw_rate

    def bound(self, t) -> np.ndarray:
        return np.abs(self._raw(t)[0])

    def bound_rate(self, t) -> np.ndarray:
        raw, raw_rate = self._raw(t)
        return np.sign(raw) * raw_rate

    def __call__(self, t):
        raw, raw_rate = self._raw(t)
        return np.abs(raw), np.sign(raw) * raw_rate

    def min_bound(self) -> float:
        return float(np.min(np.abs(self.offset) - np.abs(self.amplitude)))

    def frozen(self, t0=0.0) -> "ConstraintProfile":
        """Constant profile holding the bound at its value at ``t0``."""
        n = len(self.offset)
        return ConstraintProfile(
            offset=tuple(self.bound(t0)), amplitude=(0.0,) * n, frequency=(0.0,) * n, phase=(0.0,) * n
        )


class BarrierEval(NamedTuple):
    v1: float
    rho: float
    omega: float


def _check(z1, xr, kc):
    if not kc > 0:
        raise DomainError(f"barrier bound must be positive, got {kc}")
    if abs(xr) >= kc:
        raise OutOfBarrier(xr, kc, "reference")
    if abs(z1 + xr) >= kc:
        raise OutOfBarrier(z1 + xr, kc)


def _log_ratio_sym(z1, xr, kc):
    # ln[(kc + eta)(kc - xr) / ((kc - eta)(kc + xr))]
    return math.log1p(z1 / (kc + xr)) - math.log1p(-z1 / (kc - xr))


def _log_ratio_sq(z1, xr, kc):
    # ln[(kc^2 - eta^2) / (kc^2 - xr^2)]
    return math.log1p(-z1 * (2.0 * xr + z1) / (kc * kc - xr * xr))


def v1_value(z1, xr, kc) -> float:
    _check(z1, xr, kc)
    if z1 == 0.0:
        return 0.0
    k2 = kc * kc
    if abs(z1) < _V1_SERIES:
        d0 = k2 - xr * xr
        return k2 * z1 * z1 / (2.0 * d0) + 2.0 * k2 * xr * z1**3 / (3.0 * d0 * d0)
    return -0.5 * k2 * _log_ratio_sq(z1, xr, kc) - 0.5 * xr * kc * _log_ratio_sym(z1, xr, kc)


def rho(z1, xr, kc) -> float:
    _check(z1, xr, kc)
    if abs(z1) < EPS_Z:
        return kc * kc / (kc * kc - xr * xr)
    return kc / (2.0 * z1) * _log_ratio_sym(z1, xr, kc)


def omega(z1, xr, kc) -> float:
    _check(z1, xr, kc)
    k2 = kc * kc
    if abs(z1) < EPS_Z:
        return (xr * xr - 3.0 * xr * kc) / (k2 - xr * xr)
    eta = z1 + xr
    # The two logarithmic terms share ln[(kc^2 - eta^2)/(kc^2 - xr^2)].
    return -xr * kc / (k2 - eta * eta) + _log_ratio_sq(z1, xr, kc) * (kc - 0.5 * xr) / z1


def evaluate(z1, xr, kc) -> BarrierEval:
    return BarrierEval(v1_value(z1, xr, kc), rho(z1, xr, kc), omega(z1, xr, kc))


def v1_total(z1, xr, kc) -> float:
    """Sum of the per-axis barrier values."""
    return float(sum(v1_value(a, b, c) for a, b, c in zip(z1, xr, kc)))
