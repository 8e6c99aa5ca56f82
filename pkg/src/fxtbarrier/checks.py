"""Randomized verification of the model identities and barrier closed forms.

These back the ``check`` subcommand and the acceptance suite. Every check
reports the worst observed error against its tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import barrier, dynamics
from .dynamics import RobotParams
from .integrate import integrate_fixed

FD_STEP = 1e-6
# keep Cartesian checks away from the straight/folded-arm singularities
MIN_SIN_Q2 = 0.2


@dataclass
class CheckResult:
    name: str
    n_samples: int
    max_error: float
    tolerance: float
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.n_samples > 0 and self.max_error < self.tolerance

    def __str__(self):
        status = "ok" if self.passed else "FAILED"
        return f"{self.name}: {self.n_samples} samples, max error {self.max_error:.3e} (tol {self.tolerance:.0e}) {status}"


class _Worst:
    def __init__(self, name, tol):
        self.name, self.tol = name, tol
        self.n, self.err, self.where = 0, 0.0, None

    def add(self, err, **sample):
        self.n += 1
        err = float(err)
        if not err <= self.err:  # also captures nan
            self.err, self.where = err, sample

    def result(self) -> CheckResult:
        return CheckResult(self.name, self.n, self.err, self.tol, self.where if not self.err < self.tol else None)


def _random_q(rng, nonsingular=False):
    while True:
        q = rng.uniform(-math.pi, math.pi, size=2)
        if not nonsingular or abs(math.sin(q[1])) > MIN_SIN_Q2:
            return q


def check_mass_spd(p: RobotParams, n, rng) -> CheckResult:
    """Symmetry (exact) and positive definiteness (Cholesky) of M(q)."""
    w = _Worst("inertia symmetric positive definite", 1e-15)
    for _ in range(n):
        q = _random_q(rng)
        M = dynamics.mass_matrix(p, q)
        try:
            np.linalg.cholesky(M)
            err = abs(M[0, 1] - M[1, 0])
        except np.linalg.LinAlgError:
            err = math.inf
        w.add(err, q=q.tolist())
    return w.result()


def _fd_rate(f, q, qd, h=FD_STEP):
    # d/dt f(q(t)) with q' = qd, central difference
    return (f(q + h * qd) - f(q - h * qd)) / (2.0 * h)


def check_skew_symmetry(p: RobotParams, n, rng, tol=1e-5) -> CheckResult:
    """Symmetric part of ``dM/dt - 2C`` vanishes."""
    w = _Worst("joint dM/dt - 2C skew-symmetric", tol)
    for _ in range(n):
        q, qd = _random_q(rng), rng.uniform(-2.0, 2.0, size=2)
        N = _fd_rate(lambda x: dynamics.mass_matrix(p, x), q, qd) - 2.0 * dynamics.coriolis_matrix(p, q, qd)
        w.add(np.max(np.abs(N + N.T)), q=q.tolist(), qd=qd.tolist())
    return w.result()


def check_cartesian_properties(p: RobotParams, n, rng, tol=1e-5) -> list:
    """Mx symmetric positive definite and ``dMx/dt - 2Cx`` skew-symmetric."""
    spd = _Worst("Cartesian inertia symmetric positive definite", 1e-9)
    skew = _Worst("Cartesian dMx/dt - 2Cx skew-symmetric", tol)
    for _ in range(n):
        q, qd = _random_q(rng, nonsingular=True), rng.uniform(-1.0, 1.0, size=2)
        Mx, Cx, _, _ = dynamics.cartesian_coefficients(p, q, qd)
        lo = np.linalg.eigvalsh(0.5 * (Mx + Mx.T))[0]
        asym = abs(Mx[0, 1] - Mx[1, 0]) / np.max(np.abs(Mx))
        spd.add(asym if lo > 0 else math.inf, q=q.tolist())
        N = _fd_rate(lambda x: dynamics.cartesian_coefficients(p, x, qd).Mx, q, qd) - 2.0 * Cx
        skew.add(np.max(np.abs(N + N.T)), q=q.tolist(), qd=qd.tolist())
    return [spd.result(), skew.result()]


def check_kinematics(p: RobotParams, n, rng, tol=1e-6) -> list:
    """Jacobian columns against FK differences; analytic dJ/dt against J differences."""
    jac = _Worst("FK / Jacobian consistency", tol)
    jdot = _Worst("Jacobian time derivative", tol)
    h = FD_STEP
    for _ in range(n):
        q, qd = _random_q(rng), rng.uniform(-2.0, 2.0, size=2)
        J = dynamics.jacobian(p, q)
        fd = np.column_stack(
            [
                (dynamics.forward_kinematics(p, q + h * e) - dynamics.forward_kinematics(p, q - h * e)) / (2 * h)
                for e in np.eye(2)
            ]
        )
        jac.add(np.max(np.abs(fd - J)), q=q.tolist())
        fd_dot = _fd_rate(lambda x: dynamics.jacobian(p, x), q, qd)
        jdot.add(np.max(np.abs(fd_dot - dynamics.jacobian_dot(p, q, qd))), q=q.tolist(), qd=qd.tolist())
    return [jac.result(), jdot.result()]


def check_cartesian_reconstruction(p: RobotParams, n, rng, tol=1e-9) -> CheckResult:
    """``J^T Mx J`` reproduces M(q)."""
    w = _Worst("J^T Mx J = M", tol)
    for _ in range(n):
        q = _random_q(rng, nonsingular=True)
        J = dynamics.jacobian(p, q)
        Mx = dynamics.cartesian_coefficients(p, q, np.zeros(2)).Mx
        w.add(np.max(np.abs(J.T @ Mx @ J - dynamics.mass_matrix(p, q))), q=q.tolist())
    return w.result()


def check_plant_roundtrip(p: RobotParams, n, rng, tol=1e-9) -> CheckResult:
    """Accelerations substituted back into the equations of motion reproduce the torques."""
    w = _Worst("equations of motion round trip", tol)
    for _ in range(n):
        q, qd = _random_q(rng), rng.uniform(-3.0, 3.0, size=2)
        tau_c, tau_e = rng.uniform(-20.0, 20.0, size=2), rng.uniform(-5.0, 5.0, size=2)
        qdd = dynamics.plant_acceleration(p, dynamics.PlantState(q, qd), tau_c, tau_e)
        lhs = (
            dynamics.mass_matrix(p, q) @ qdd
            + dynamics.coriolis_matrix(p, q, qd) @ qd
            + dynamics.gravity_vector(p, q)
            + dynamics.disturbance_vector(q, qd)
        )
        w.add(np.max(np.abs(lhs - tau_c - tau_e)), q=q.tolist(), qd=qd.tolist())
    return w.result()


def dynamics_checks(p: RobotParams | None = None, n=1000, seed=0) -> list:
    p = p or RobotParams()
    rng = np.random.default_rng([seed, 100])
    return [
        check_mass_spd(p, n, rng),
        check_skew_symmetry(p, n, rng),
        *check_cartesian_properties(p, n, rng),
        *check_kinematics(p, n, rng),
        check_cartesian_reconstruction(p, n, rng),
        check_plant_roundtrip(p, n, rng),
    ]


def random_barrier_triples(n, rng, margin=0.999):
    """Valid ``(z1, xr, kc)`` with both reference and position strictly inside the bound."""
    kc = rng.uniform(0.05, 1.0, size=n)
    xr = rng.uniform(-0.99, 0.99, size=n) * kc
    eta = rng.uniform(-margin, margin, size=n) * kc
    return np.column_stack([eta - xr, xr, kc])


def v1_quadrature(z1, xr, kc) -> float:
    """Adaptive quadrature of the barrier integral; oracle only."""
    val, _ = quad(
        lambda d: d * kc * kc / (kc * kc - (d + xr) ** 2), 0.0, z1, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return val


def barrier_checks(n=1000, seed=0) -> list:
    rng = np.random.default_rng([seed, 200])
    closed = _Worst("V1 closed form vs quadrature (relative)", 1e-9)
    lemma2 = _Worst("V1 <= kc^2 z1^2 / (kc^2 - eta^2)", 1e-12)
    for z1, xr, kc in random_barrier_triples(n, rng):
        v = barrier.v1_value(z1, xr, kc)
        ref = v1_quadrature(z1, xr, kc)
        closed.add(abs(v - ref) / max(abs(ref), 1e-300), z1=z1, xr=xr, kc=kc)
        bound = kc * kc * z1 * z1 / (kc * kc - (z1 + xr) ** 2)
        lemma2.add(max(v - bound, 0.0) / max(bound, 1e-300), z1=z1, xr=xr, kc=kc)
    cont = _Worst("rho/omega continuity at the limit branch", 1e-4)
    eps = barrier.EPS_Z
    for _ in range(n):
        kc = rng.uniform(0.05, 1.0)
        xr = rng.uniform(-0.95, 0.95) * kc
        for sgn in (1.0, -1.0):
            inside, outside = sgn * eps * (1 - 1e-9), sgn * eps * (1 + 1e-9)
            gap = max(
                abs(barrier.rho(outside, xr, kc) - barrier.rho(inside, xr, kc)),
                abs(barrier.omega(outside, xr, kc) - barrier.omega(inside, xr, kc)),
            )
            cont.add(gap, xr=xr, kc=kc, side=sgn)
    mono = _Worst("V1 increases toward the bound", 1e-12)
    for _ in range(min(n, 200)):
        kc = rng.uniform(0.05, 1.0)
        xr = rng.uniform(-0.9, 0.9) * kc
        for target in (kc, -kc):
            etas = xr + (target - xr) * (1.0 - np.geomspace(1.0, 1e-9, 60))
            vals = [barrier.v1_value(e - xr, xr, kc) for e in etas[1:]]
            drops = np.diff(vals)
            mono.add(max(0.0, -float(drops.min())), xr=xr, kc=kc)
    return [closed.result(), lemma2.result(), cont.result(), mono.result()]


def oscillator_error(dt, periods=1.0) -> float:
    """Final-state error of RK4 on ``x'' = -x`` from ``(1, 0)`` after whole periods."""
    n = int(round(2.0 * math.pi * periods / dt))
    h = 2.0 * math.pi * periods / n
    traj = integrate_fixed(lambda t, y: np.array([y[1], -y[0]]), 0.0, [1.0, 0.0], h, n)
    return float(np.linalg.norm(traj[-1] - np.array([1.0, 0.0])))


def integrator_order_check(dt=0.1, lo=12.0, hi=20.0) -> CheckResult:
    """Error ratio per step halving; fourth order gives about 16."""
    ratio = oscillator_error(dt) / oscillator_error(dt / 2.0)
    # encode "ratio in [lo, hi]" as an error against a unit tolerance
    err = 0.0 if lo <= ratio <= hi else 1.0
    return CheckResult(f"RK4 order (error ratio {ratio:.2f} in [{lo:g}, {hi:g}])", 1, err, 0.5)
