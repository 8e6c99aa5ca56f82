"""Backstepping controllers built on the time-varying integral barrier.

The position loop produces a virtual velocity ``alpha``; the velocity loop
turns ``z2 = xdot - alpha`` into a Cartesian force ``u`` applied through
``tau_c = J^T u``. Fixed-time terms use odd fractional powers, always
evaluated with ``signed_power`` so negative arguments stay real.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import barrier
from .dynamics import CartesianCoefficients, RobotParams, max_inertia_eigenvalue
from .errors import DomainError, OutOfBarrier


def signed_power(x, r):
    """``sign(x) * |x|**r``, the odd extension of ``x**r``."""
    if not r > 0:
        raise DomainError(f"exponent must be positive, got {r}")
    return np.sign(x) * np.abs(x) ** float(r)


def _as_fraction(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10_000)
    return Fraction(value)


def _pair(values, name):
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must hold two finite values")
    return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class FixedTimeGains:
    """Controller constants. Matrix gains are diagonal and stored per axis."""

    kappa1: tuple = (5.0, 22.0)
    theta1: tuple = (10.0, 0.01)
    theta2: tuple = (20.0, 0.01)
    k1: tuple = (5.0, 22.0)
    k2: tuple = (100.0, 2000.0)
    k3: tuple = (200.0, 3000.0)
    k4: float = 0.001
    k5: float = 0.001
    p_c: Fraction = Fraction(3)
    q_c: Fraction = Fraction(99, 101)

    def __post_init__(self):
        for name in ("kappa1", "theta1", "theta2", "k1", "k2", "k3"):
            object.__setattr__(self, name, _pair(getattr(self, name), name))
        object.__setattr__(self, "p_c", _as_fraction(self.p_c))
        object.__setattr__(self, "q_c", _as_fraction(self.q_c))
        if self.p_c <= 1:
            raise ValueError(f"p_c must exceed 1, got {self.p_c}")
        q = self.q_c
        if not (0 < q < 1) or q.numerator % 2 == 0 or q.denominator % 2 == 0:
            raise ValueError(f"q_c must be a ratio of odd integers in (0, 1), got {q}")
        if min(self.kappa1) <= 0:
            raise ValueError("kappa1 must be positive")
        if min(self.k1) <= 0.5:
            raise ValueError("k1 - I/2 must be positive definite (every k1 entry > 0.5)")
        for name in ("theta1", "theta2", "k2", "k3"):
            if min(getattr(self, name)) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.k4 < 0 or self.k5 < 0:
            raise ValueError("k4 and k5 must be nonnegative")

    @property
    def p(self) -> float:
        return float(self.p_c)

    @property
    def q(self) -> float:
        return float(self.q_c)

    def without_fixed_time(self) -> "FixedTimeGains":
        return replace(self, theta1=(0.0, 0.0), theta2=(0.0, 0.0), k2=(0.0, 0.0), k3=(0.0, 0.0))


class ControllerKind(str, enum.Enum):
    FXT_TVIBLF = "FXT_TVIBLF"
    TVIBLF = "TVIBLF"
    IBLF = "IBLF"


_LABELS = {
    ControllerKind.FXT_TVIBLF: "FxTTVIBLF",
    ControllerKind.TVIBLF: "TVIBLF",
    ControllerKind.IBLF: "IBLF",
}


@dataclass(frozen=True)
class ControllerVariant:
    kind: ControllerKind = ControllerKind.FXT_TVIBLF
    model_free: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", ControllerKind(self.kind))

    @property
    def label(self) -> str:
        return _LABELS[self.kind] + ("+NN" if self.model_free else "")

    @property
    def fixed_time(self) -> bool:
        return self.kind is ControllerKind.FXT_TVIBLF

    def effective_gains(self, gains: FixedTimeGains) -> FixedTimeGains:
        return gains if self.fixed_time else gains.without_fixed_time()

    def controller_profile(self, profile: barrier.ConstraintProfile) -> barrier.ConstraintProfile:
        """Profile the controller sees: the IBLF baseline freezes it at t=0."""
        return profile.frozen(0.0) if self.kind is ControllerKind.IBLF else profile


ALL_VARIANTS = tuple(
    ControllerVariant(kind, model_free)
    for model_free in (False, True)
    for kind in (ControllerKind.IBLF, ControllerKind.TVIBLF, ControllerKind.FXT_TVIBLF)
)


class ErrorState(NamedTuple):
    z1: np.ndarray
    z2: np.ndarray


def stabilizing_alpha(z1, xr, xr_dot, kc, kc_rate, gains: FixedTimeGains) -> np.ndarray:
    """Virtual velocity command for the position subsystem, per axis.

    The barrier-shaped fixed-time terms use ``(kc^2 - eta^2)`` raised to
    ``p_c - 1`` and ``q_c - 1``; with these exponents the closed-loop barrier
    derivative reduces to ``-theta1 * (z1^2 kc^2 / D)^p_c - theta2 * (...)^q_c``.
    """
    p, q = gains.p, gains.q
    out = np.empty(2)
    for i in range(2):
        zi, xi, ki, kdi = float(z1[i]), float(xr[i]), float(kc[i]), float(kc_rate[i])
        rho_i = barrier.rho(zi, xi, ki)
        omega_i = barrier.omega(zi, xi, ki)
        k2 = ki * ki
        eta = zi + xi
        gap = k2 - eta * eta
        out[i] = (
            gap * xr_dot[i] * rho_i / k2
            - gap * kdi * omega_i / k2
            + zi * kdi / ki
            - gains.theta1[i] * signed_power(zi, 2 * p - 1) * ki ** (2 * p - 2) / gap ** (p - 1)
            - gains.theta2[i] * signed_power(zi, 2 * q - 1) * ki ** (2 * q - 2) / gap ** (q - 1)
            - gains.kappa1[i] * zi
        )
    return out


def alpha_derivative(history, dt) -> np.ndarray:
    """Backward difference of the last two alpha samples; zero before two exist."""
    if dt <= 0:
        raise DomainError(f"dt must be positive, got {dt}")
    if len(history) < 2:
        return np.zeros_like(np.asarray(history[-1], dtype=float)) if len(history) else np.zeros(2)
    return (np.asarray(history[-1], dtype=float) - np.asarray(history[-2], dtype=float)) / dt


class AlphaDifferentiator:
    """Holds the previous alpha so alpha_dot can be formed each control step."""

    def __init__(self, dt):
        self.dt = dt
        self._prev = None

    def update(self, alpha) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        history = [alpha] if self._prev is None else [self._prev, alpha]
        self._prev = alpha.copy()
        return alpha_derivative(history, self.dt)


def barrier_feedback(z1, eta1, kc) -> np.ndarray:
    """Per-axis ``kc^2 z1 / (kc^2 - eta1^2)``, the term coupling V1 into the velocity loop."""
    z1, eta1, kc = (np.asarray(v, dtype=float) for v in (z1, eta1, kc))
    for e, k in zip(eta1, kc):
        if abs(e) >= k:
            raise OutOfBarrier(float(e), float(k))
    return kc * kc * z1 / (kc * kc - eta1 * eta1)


def velocity_feedback(z2, gains: FixedTimeGains) -> np.ndarray:
    """``k1 z2 + k2 z2^(2p-1) / 2^p + k3 z2^(2q-1) / 2^q`` with odd powers."""
    p, q = gains.p, gains.q
    z2 = np.asarray(z2, dtype=float)
    return (
        np.multiply(gains.k1, z2)
        + np.multiply(gains.k2, signed_power(z2, 2 * p - 1)) / 2.0**p
        + np.multiply(gains.k3, signed_power(z2, 2 * q - 1)) / 2.0**q
    )


def control_model_based(
    coeffs: CartesianCoefficients,
    err: ErrorState,
    alpha,
    alpha_dot,
    eta1,
    fe,
    kc,
    gains: FixedTimeGains,
    include_disturbance=False,
) -> np.ndarray:
    """Cartesian force with exact rigid-body compensation.

    The disturbance wrench ``Fx`` is treated as unknown and left out unless
    ``include_disturbance`` is set.
    """
    comp = coeffs.Gx + coeffs.Mx @ np.asarray(alpha_dot) + coeffs.Cx @ np.asarray(alpha)
    if include_disturbance:
        comp = comp + coeffs.Fx
    return comp - np.asarray(fe) - barrier_feedback(err.z1, eta1, kc) - velocity_feedback(err.z2, gains)


def control_model_free(nn_output, err: ErrorState, eta1, fe, kc, gains: FixedTimeGains) -> np.ndarray:
    """Cartesian force with the dynamics replaced by the network estimate."""
    return (
        -np.asarray(nn_output)
        - np.asarray(fe)
        - barrier_feedback(err.z1, eta1, kc)
        - velocity_feedback(err.z2, gains)
    )


def tmax_bound(alpha_coef, beta_coef, v, p_c, q_c) -> float:
    """Settling-time bound ``1/(alpha v (p-1)) + 1/(beta v (1-q))``."""
    p, q = float(p_c), float(q_c)
    if not (alpha_coef > 0 and beta_coef > 0):
        raise DomainError("alpha and beta coefficients must be positive")
    if not (0 < v <= 1):
        raise DomainError(f"v must lie in (0, 1], got {v}")
    if not p > 1:
        raise DomainError(f"p_c must exceed 1, got {p}")
    if not (0 < q < 1):
        raise DomainError(f"q_c must lie in (0, 1), got {q}")
    return 1.0 / (alpha_coef * v * (p - 1.0)) + 1.0 / (beta_coef * v * (1.0 - q))


def young_constants(q) -> tuple:
    """Constants ``(n1, n2)`` of the weight-error inequality for exponent ``q`` in (0, 1)."""
    q = float(q)
    n1 = (1.0 / (1.0 + q)) * (1.0 - 2.0 ** (q - 1.0) + q / (1.0 + q) + 2.0**q * (1.0 - q * q) / (1.0 + q))
    n2 = (2.0**q - 1.0) / (1.0 + q) * (1.0 - 2.0 ** (q * (q - 1.0)))
    return n1, n2


@dataclass(frozen=True)
class FixedTimeCoefficients:
    alpha: float
    beta: float
    lambdas: dict = field(default_factory=dict)
    inertia_max: float = float("nan")


def fixed_time_coefficients(
    gains: FixedTimeGains, robot: RobotParams, model_free: bool, n_axes=2, n_nodes=8
) -> FixedTimeCoefficients:
    """Assemble the decay coefficients of the composite Lyapunov inequality.

    Uses only gains and robot parameters: the inertia enters through the
    supremum of ``lambda_max(M(q))`` over all configurations, so the result
    is independent of the initial state.
    """
    p, q = gains.p, gains.q
    n = float(n_axes)
    lam_m = max_inertia_eigenvalue(robot)
    lam = {
        "lambda1": min(gains.theta1) * n ** (1.0 - p),
        "lambda2": min(gains.theta2),
        "lambda3": min(gains.k2) / lam_m**p * n ** (1.0 - p),
        "lambda4": min(gains.k3) / lam_m**q,
    }
    if model_free:
        # The weight-error inequality is applied with exponent 2q - 1.
        _, n2 = young_constants(2.0 * q - 1.0)
        lam["lambda5"] = 2.0**p * gains.k4 * float(n_nodes) ** (1.0 - p) * n ** (1.0 - p)
        lam["lambda6"] = 2.0**q * gains.k5 * n2
        alpha = 3.0 ** (1.0 - p) * min(lam["lambda1"], lam["lambda3"], lam["lambda5"])
        beta = min(lam["lambda2"], lam["lambda4"], lam["lambda6"])
    else:
        alpha = 2.0 ** (1.0 - p) * min(lam["lambda1"], lam["lambda3"])
        beta = min(lam["lambda2"], lam["lambda4"])
    return FixedTimeCoefficients(alpha, beta, lam, lam_m)


def convergence_bound(gains: FixedTimeGains, robot: RobotParams, model_free: bool, v=1.0) -> float:
    c = fixed_time_coefficients(gains, robot, model_free)
    return tmax_bound(c.alpha, c.beta, v, gains.p_c, gains.q_c)
