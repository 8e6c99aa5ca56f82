"""Admittance filter producing the compliant reference trajectory.

Each Cartesian axis obeys the virtual mass-spring-damper

    km (xr'' - xd'') + kb (xr' - xd') + kk (xr - xd) = fe

so the deviation ``xr - xd`` is a stable second-order response to the human
force and vanishes when no force is applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .integrate import rk4_step


@dataclass(frozen=True)
class AdmittanceParams:
    km: tuple = (20.0, 20.0)
    kb: tuple = (20.0, 20.0)
    kk: tuple = (100.0, 100.0)

    def __post_init__(self):
        for name in ("km", "kb", "kk"):
            values = np.asarray(getattr(self, name), dtype=float)
            if values.shape != (2,) or not np.all(values > 0):
                raise ValueError(f"AdmittanceParams.{name} must be two positive values")
            object.__setattr__(self, name, tuple(float(v) for v in values))

    @property
    def arrays(self):
        return np.array(self.km), np.array(self.kb), np.array(self.kk)


@dataclass
class ReferenceState:
    xr: np.ndarray = field(default_factory=lambda: np.zeros(2))
    xrd: np.ndarray = field(default_factory=lambda: np.zeros(2))
    xrdd: np.ndarray = field(default_factory=lambda: np.zeros(2))


def admittance_acceleration(p: AdmittanceParams, desired, ref: ReferenceState, fe) -> np.ndarray:
    """Reference acceleration for ``desired = (xd, xd', xd'')``."""
    xd, xd_dot, xd_ddot = desired
    km, kb, kk = p.arrays
    return xd_ddot + (np.asarray(fe) - kb * (ref.xrd - xd_dot) - kk * (ref.xr - xd)) / km


class AdmittanceReference:
    """Stateful reference generator driven by a desired trajectory and a force signal.

    ``desired(t)`` returns ``(xd, xd', xd'')`` and ``force(t)`` the measured
    Cartesian force. The initial reference matches the desired state unless
    ``ref0`` is given.
    """

    def __init__(self, params: AdmittanceParams, desired, force, t0=0.0, ref0=None):
        self.params = params
        self.desired = desired
        self.force = force
        self.t = float(t0)
        if ref0 is None:
            xd, xd_dot, _ = desired(t0)
            ref0 = ReferenceState(np.array(xd, dtype=float), np.array(xd_dot, dtype=float))
        self.state = ref0
        self.state.xrdd = self._accel(self.t, self.state.xr, self.state.xrd)

    def _accel(self, t, xr, xrd):
        return admittance_acceleration(
            self.params, self.desired(t), ReferenceState(xr, xrd), self.force(t)
        )

    def step(self, dt) -> ReferenceState:
        self.state = step_reference(self.params, self.t, dt, self.state, self.desired, self.force)
        self.t += dt
        return self.state


def step_reference(p: AdmittanceParams, t, dt, ref: ReferenceState, desired, force) -> ReferenceState:
    """Advance the reference by one RK4 step of length ``dt``."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")

    def rhs(tt, y):
        acc = admittance_acceleration(p, desired(tt), ReferenceState(y[:2], y[2:]), force(tt))
        return np.concatenate([y[2:], acc])

    y = rk4_step(rhs, t, np.concatenate([ref.xr, ref.xrd]), dt)
    out = ReferenceState(y[:2].copy(), y[2:].copy())
    out.xrdd = admittance_acceleration(p, desired(t + dt), out, force(t + dt))
    return out
