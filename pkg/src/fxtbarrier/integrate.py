"""Fixed-step integration shared by the plant and the admittance reference."""

import numpy as np


def rk4_step(rhs, t, y, dt):
    """Advance ``y' = rhs(t, y)`` by one classic fourth-order Runge-Kutta step."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    h2 = 0.5 * dt
    k1 = rhs(t, y)
    k2 = rhs(t + h2, y + h2 * k1)
    k3 = rhs(t + h2, y + h2 * k2)
    k4 = rhs(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_fixed(rhs, t0, y0, dt, n_steps):
    """Run ``n_steps`` RK4 steps and return the (n_steps + 1, dim) trajectory."""
    y = np.asarray(y0, dtype=float)
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    for k in range(n_steps):
        y = rk4_step(rhs, t0 + k * dt, y, dt)
        out[k + 1] = y
    return out
