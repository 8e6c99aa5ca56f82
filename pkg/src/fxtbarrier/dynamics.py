"""Planar two-link manipulator: joint-space model and its Cartesian transform.

Angles follow the usual planar convention: q1 is measured from the base x
axis, q2 relative to link 1, so the end effector sits at
``(l1 c1 + l2 c12, l1 s1 + l2 s12)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import SingularJacobian

SINGULAR_DET = 1e-8


@dataclass(frozen=True)
class RobotParams:
    m1: float = 1.5
    m2: float = 1.0
    l1: float = 0.3
    l2: float = 0.3
    g: float = 9.81

    def __post_init__(self):
        for name in ("m1", "m2", "l1", "l2", "g"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"RobotParams.{name} must be positive, got {value!r}")


@dataclass
class PlantState:
    q: np.ndarray = field(default_factory=lambda: np.zeros(2))
    qd: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.qd = np.asarray(self.qd, dtype=float)
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.qd))):
            raise ValueError("PlantState entries must be finite")


class CartesianCoefficients(NamedTuple):
    Mx: np.ndarray
    Cx: np.ndarray
    Gx: np.ndarray
    Fx: np.ndarray


def mass_matrix(p: RobotParams, q) -> np.ndarray:
    c2 = math.cos(q[1])
    a = p.m2 * p.l2**2
    b = p.m2 * p.l1 * p.l2 * c2
    m11 = a + 2.0 * b + (p.m1 + p.m2) * p.l1**2
    return np.array([[m11, a + b], [a + b, a]])


def coriolis_matrix(p: RobotParams, q, qd) -> np.ndarray:
    """Coriolis/centrifugal matrix in the Christoffel form.

    ``C(q, qd) @ qd`` reproduces the velocity terms of the closed-form torque
    equations, and ``dM/dt - 2C`` is skew-symmetric.
    """
    h = p.m2 * p.l1 * p.l2 * math.sin(q[1])
    return np.array([[-h * qd[1], -h * (qd[0] + qd[1])], [h * qd[0], 0.0]])


def gravity_vector(p: RobotParams, q) -> np.ndarray:
    c1 = math.cos(q[0])
    c12 = math.cos(q[0] + q[1])
    g2 = p.m2 * p.l2 * p.g * c12
    return np.array([g2 + (p.m1 + p.m2) * p.l1 * p.g * c1, g2])


def disturbance_vector(q, qd=None) -> np.ndarray:
    """Unmodelled joint disturbance; depends on configuration only."""
    c1 = math.cos(q[0])
    f1 = 4.0 * c1 * math.sin(q[1]) + 6.0 * c1 * c1 - 2.0
    return np.array([f1, -f1])


def jacobian(p: RobotParams, q) -> np.ndarray:
    s1, c1 = math.sin(q[0]), math.cos(q[0])
    s12, c12 = math.sin(q[0] + q[1]), math.cos(q[0] + q[1])
    return np.array(
        [
            [-p.l1 * s1 - p.l2 * s12, -p.l2 * s12],
            [p.l1 * c1 + p.l2 * c12, p.l2 * c12],
        ]
    )


def jacobian_dot(p: RobotParams, q, qd) -> np.ndarray:
    s1, c1 = math.sin(q[0]), math.cos(q[0])
    s12, c12 = math.sin(q[0] + q[1]), math.cos(q[0] + q[1])
    w = qd[0] + qd[1]
    return np.array(
        [
            [-p.l1 * c1 * qd[0] - p.l2 * c12 * w, -p.l2 * c12 * w],
            [-p.l1 * s1 * qd[0] - p.l2 * s12 * w, -p.l2 * s12 * w],
        ]
    )


def jacobian_det(p: RobotParams, q) -> float:
    return p.l1 * p.l2 * math.sin(q[1])


def forward_kinematics(p: RobotParams, q) -> np.ndarray:
    return np.array(
        [
            p.l1 * math.cos(q[0]) + p.l2 * math.cos(q[0] + q[1]),
            p.l1 * math.sin(q[0]) + p.l2 * math.sin(q[0] + q[1]),
        ]
    )


def cartesian_coefficients(p: RobotParams, q, qd) -> CartesianCoefficients:
    """Map the joint-space model to end-effector coordinates.

    Raises SingularJacobian when ``|det J| < 1e-8``.
    """
    det = jacobian_det(p, q)
    if abs(det) < SINGULAR_DET:
        raise SingularJacobian(det)
    J = jacobian(p, q)
    Jinv = np.array([[J[1, 1], -J[0, 1]], [-J[1, 0], J[0, 0]]]) / det
    JinvT = Jinv.T
    M = mass_matrix(p, q)
    Mx = JinvT @ M @ Jinv
    Cx = JinvT @ (coriolis_matrix(p, q, qd) - M @ Jinv @ jacobian_dot(p, q, qd)) @ Jinv
    Gx = JinvT @ gravity_vector(p, q)
    Fx = JinvT @ disturbance_vector(q, qd)
    return CartesianCoefficients(Mx, Cx, Gx, Fx)


def _joint_accel(p: RobotParams, q1, q2, qd1, qd2, tau1, tau2):
    # Scalar kernel of plant_acceleration; the simulator calls this four
    # times per step, so it avoids small-array overhead.
    c1, c2, s2 = math.cos(q1), math.cos(q2), math.sin(q2)
    c12 = math.cos(q1 + q2)
    a = p.m2 * p.l2 * p.l2
    b = p.m2 * p.l1 * p.l2 * c2
    h = p.m2 * p.l1 * p.l2 * s2
    m11 = a + 2.0 * b + (p.m1 + p.m2) * p.l1 * p.l1
    m12 = a + b
    g2 = p.m2 * p.l2 * p.g * c12
    g1 = g2 + (p.m1 + p.m2) * p.l1 * p.g * c1
    f1 = 4.0 * c1 * s2 + 6.0 * c1 * c1 - 2.0
    r1 = tau1 - (-h * qd2 * qd1 - h * (qd1 + qd2) * qd2) - g1 - f1
    r2 = tau2 - h * qd1 * qd1 - g2 + f1
    det = m11 * a - m12 * m12
    return (a * r1 - m12 * r2) / det, (m11 * r2 - m12 * r1) / det


def plant_acceleration(p: RobotParams, state: PlantState, tau_c, tau_e) -> np.ndarray:
    """Joint accelerations from ``M qdd + C qd + G + F = tau_c + tau_e``."""
    q, qd = state.q, state.qd
    return np.array(
        _joint_accel(p, q[0], q[1], qd[0], qd[1], tau_c[0] + tau_e[0], tau_c[1] + tau_e[1])
    )


def max_inertia_eigenvalue(p: RobotParams) -> float:
    """Supremum over all configurations of the largest eigenvalue of M(q).

    M depends on q2 only, so a 1-D search over one period suffices.
    """

    def neg_lmax(q2):
        return -np.linalg.eigvalsh(mass_matrix(p, (0.0, q2)))[-1]

    grid = np.linspace(-math.pi, math.pi, 721)
    values = [neg_lmax(v) for v in grid]
    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(neg_lmax, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return float(-min(res.fun, values[i]))
