"""Closed-loop scenario simulation.

Each control period the controller samples the plant, computes a Cartesian
force and holds the resulting joint torque constant (zero-order hold) while
one RK4 step advances the coupled plant and admittance-reference ODEs. The
network weights are then Euler-updated with the sampled signals.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import barrier, control, dynamics
from .admittance import AdmittanceParams
from .control import ControllerVariant, ErrorState, FixedTimeGains
from .dynamics import RobotParams
from .errors import ConstraintBreach, OutOfBarrier, SingularJacobian
from .integrate import rk4_step
from .nn import DEFAULT_CENTERS, DEFAULT_WIDTH, RbfNetwork, UpdateLaw

log = logging.getLogger(__name__)

FORCE_ON, RAMP_UP_END, RAMP_DOWN_START, FORCE_OFF = 20.0, 21.0, 30.0, 31.0
TRAJ_RADIUS, TRAJ_FREQ = 0.18, 0.5


def external_force(t, a) -> np.ndarray:
    """Human force profile: raised-cosine ramps around a constant plateau of ``2a``."""
    a = np.asarray(a, dtype=float)
    if t < FORCE_ON or t >= FORCE_OFF:
        return np.zeros_like(a)
    if t < RAMP_UP_END:
        return a * (1.0 - math.cos(math.pi * t))
    if t < RAMP_DOWN_START:
        return 2.0 * a
    return a * (1.0 + math.cos(math.pi * t))


def desired_trajectory(t):
    """Circle of radius 0.18 m at 0.5 rad/s; returns ``(xd, xd', xd'')``."""
    c, s = math.cos(TRAJ_FREQ * t), math.sin(TRAJ_FREQ * t)
    r, w = TRAJ_RADIUS, TRAJ_FREQ
    return (
        np.array([r * c, r * s]),
        np.array([-r * w * s, r * w * c]),
        np.array([-r * w * w * c, -r * w * w * s]),
    )


DEFAULT_PROFILE = barrier.ConstraintProfile()


def constraint_profile(t):
    """Benchmark workspace bounds ``(bound, bound_rate)`` at time ``t``."""
    return DEFAULT_PROFILE(t)


@dataclass(frozen=True)
class NetworkConfig:
    centers: tuple = DEFAULT_CENTERS
    width: float = DEFAULT_WIDTH
    # sigma-modification law used by the IBLF/TVIBLF +NN baselines
    traditional_rate: float = 1.0
    traditional_sigma: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(float(c) for c in self.centers))
        if self.width <= 0 or self.traditional_rate <= 0 or self.traditional_sigma < 0:
            raise ValueError("invalid network configuration")


@dataclass(frozen=True)
class ScenarioConfig:
    robot: RobotParams = field(default_factory=RobotParams)
    admittance: AdmittanceParams = field(default_factory=AdmittanceParams)
    gains: FixedTimeGains = field(default_factory=FixedTimeGains)
    variant: ControllerVariant = field(default_factory=ControllerVariant)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    constraints: barrier.ConstraintProfile = field(default_factory=barrier.ConstraintProfile)
    force_amps: tuple = (1.0, 2.0)
    horizon: float = 50.0
    dt: float = 1e-3
    q0: tuple = (0.5236, 2.0944)
    qd0: tuple = (0.0, 0.0)
    trace_decimation: int = 10
    strict: bool = True
    # "robot": reference starts at the end-effector pose; "desired": at xd(0)
    reference_init: str = "robot"

    def __post_init__(self):
        for name in ("force_amps", "q0", "qd0"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if int(self.trace_decimation) < 1:
            raise ValueError("trace_decimation must be >= 1")
        if self.reference_init not in ("robot", "desired"):
            raise ValueError("reference_init must be 'robot' or 'desired'")
        if self.constraints.min_bound() <= 0:
            raise ValueError("constraint bounds must stay positive")

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gains"]["p_c"] = str(self.gains.p_c)
        d["gains"]["q_c"] = str(self.gains.q_c)
        d["variant"] = {"kind": self.variant.kind.value, "model_free": self.variant.model_free}
        return d

    def digest(self, include_variant=False) -> str:
        """Stable hash of the configuration, optionally ignoring the variant switch."""
        d = self.to_dict()
        if not include_variant:
            d.pop("variant")
        blob = json.dumps(d, sort_keys=True, default=repr).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def with_variant(self, variant: ControllerVariant) -> "ScenarioConfig":
        return replace(self, variant=variant)


TRACE_FIELDS_2 = ("q", "qd", "x", "xd", "xr", "z1", "z2", "u", "fe", "bound")


@dataclass
class SimulationTrace:
    """Decimated time series of one closed-loop run.

    Velocity ``xdot`` and joint torque ``tau_c`` are not stored; they are
    recomputed from ``q``, ``qd`` and ``u`` exactly as the simulator formed them.
    """

    t: np.ndarray
    q: np.ndarray
    qd: np.ndarray
    x: np.ndarray
    xd: np.ndarray
    xr: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    u: np.ndarray
    fe: np.ndarray
    bound: np.ndarray
    v1: np.ndarray
    weights: np.ndarray
    robot: RobotParams = field(default_factory=RobotParams)
    label: str = ""
    config_digest: str = ""
    wall_time: float = float("nan")
    # simulator steps with |x| >= bound; checked every step, not only on logged samples
    breaches: int = 0
    # set when a tolerant run had to stop early (controller barrier left, state diverged)
    abort: Exception | None = None

    @classmethod
    def empty(cls, n_nodes=8, **kw) -> "SimulationTrace":
        z2 = np.zeros((0, 2))
        arrays = {name: z2.copy() for name in TRACE_FIELDS_2}
        return cls(t=np.zeros(0), v1=np.zeros(0), weights=np.zeros((0, 2, n_nodes)), **arrays, **kw)

    def __len__(self):
        return len(self.t)

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[2]

    @property
    def xdot(self) -> np.ndarray:
        p = self.robot
        return np.array([dynamics.jacobian(p, q) @ qd for q, qd in zip(self.q, self.qd)]).reshape(-1, 2)

    @property
    def tau_c(self) -> np.ndarray:
        p = self.robot
        return np.array([dynamics.jacobian(p, q).T @ u for q, u in zip(self.q, self.u)]).reshape(-1, 2)

    @property
    def error(self) -> np.ndarray:
        """Tracking error ``x - xr``."""
        return self.x - self.xr

    def equals(self, other: "SimulationTrace") -> bool:
        names = ("t", "v1", "weights") + TRACE_FIELDS_2
        return all(np.array_equal(getattr(self, n), getattr(other, n)) for n in names)


class _Recorder:
    def __init__(self, n_nodes):
        self.rows = {name: [] for name in ("t", "v1", "weights") + TRACE_FIELDS_2}
        self.n_nodes = n_nodes

    def add(self, **values):
        for name, value in values.items():
            self.rows[name].append(np.array(value, dtype=float, copy=True))

    def finish(self, **meta) -> SimulationTrace:
        arrays = {}
        for name, rows in self.rows.items():
            if rows:
                arrays[name] = np.stack(rows)
            elif name == "t" or name == "v1":
                arrays[name] = np.zeros(0)
            elif name == "weights":
                arrays[name] = np.zeros((0, 2, self.n_nodes))
            else:
                arrays[name] = np.zeros((0, 2))
        return SimulationTrace(**arrays, **meta)


def _build_network(cfg: ScenarioConfig):
    if not cfg.variant.model_free:
        return None
    law = UpdateLaw.FIXED_TIME if cfg.variant.fixed_time else UpdateLaw.TRADITIONAL
    return RbfNetwork.from_scalar_centers(cfg.network.centers, cfg.network.width, law=law)


def initial_state(cfg: ScenarioConfig) -> np.ndarray:
    """Stacked ``[q, qd, xr, xr']`` at t = 0."""
    q0 = np.array(cfg.q0)
    qd0 = np.array(cfg.qd0)
    if cfg.reference_init == "robot":
        xr0 = dynamics.forward_kinematics(cfg.robot, q0)
        xrd0 = dynamics.jacobian(cfg.robot, q0) @ qd0
    else:
        xr0, xrd0, _ = desired_trajectory(0.0)
    return np.concatenate([q0, qd0, xr0, xrd0])


def closed_loop_rhs(cfg: ScenarioConfig, tau_c):
    """Right-hand side of the plant + reference ODE with ``tau_c`` held."""
    p = cfg.robot
    a = np.array(cfg.force_amps)
    km, kb, kk = cfg.admittance.arrays
    tau1, tau2 = float(tau_c[0]), float(tau_c[1])

    def rhs(t, y):
        q1, q2, qd1, qd2 = y[0], y[1], y[2], y[3]
        fe = external_force(t, a)
        # tau_e = J(q)^T fe
        s1, c1 = math.sin(q1), math.cos(q1)
        s12, c12 = math.sin(q1 + q2), math.cos(q1 + q2)
        te1 = (-p.l1 * s1 - p.l2 * s12) * fe[0] + (p.l1 * c1 + p.l2 * c12) * fe[1]
        te2 = -p.l2 * s12 * fe[0] + p.l2 * c12 * fe[1]
        qdd1, qdd2 = dynamics._joint_accel(p, q1, q2, qd1, qd2, tau1 + te1, tau2 + te2)
        xd, xd_dot, xd_ddot = desired_trajectory(t)
        xrdd = xd_ddot + (fe - kb * (y[6:8] - xd_dot) - kk * (y[4:6] - xd)) / km
        return np.array([qd1, qd2, qdd1, qdd2, y[6], y[7], xrdd[0], xrdd[1]])

    return rhs


class Simulation:
    """Stateful closed-loop run; ``step`` advances one control period."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.gains = cfg.variant.effective_gains(cfg.gains)
        self.true_profile = cfg.constraints
        self.ctrl_profile = cfg.variant.controller_profile(cfg.constraints)
        self.net = _build_network(cfg)
        self.diff = control.AlphaDifferentiator(cfg.dt)
        self.y = initial_state(cfg)
        self.k = 0
        self.breaches = 0
        self.amps = np.array(cfg.force_amps)

    @property
    def t(self) -> float:
        return self.k * self.cfg.dt

    def _check_constraints(self, t, x):
        bound = self.true_profile.bound(t)
        for i in range(2):
            if abs(x[i]) >= bound[i]:
                self.breaches += 1
                if self.cfg.strict:
                    raise ConstraintBreach(t, i, float(x[i]), float(bound[i]))
                log.warning("constraint breach at t=%.4f axis %d", t, i + 1)
        return bound

    def control(self):
        """Sample the plant and compute the held torque plus everything worth logging."""
        cfg, p, g = self.cfg, self.cfg.robot, self.gains
        t = self.t
        q, qd, xr, xrd = self.y[0:2], self.y[2:4], self.y[4:6], self.y[6:8]
        J = dynamics.jacobian(p, q)
        x = dynamics.forward_kinematics(p, q)
        xdot = J @ qd
        bound = self._check_constraints(t, x)
        kc, kc_rate = self.ctrl_profile(t)
        z1 = x - xr
        try:
            alpha = control.stabilizing_alpha(z1, xr, xrd, kc, kc_rate, g)
        except OutOfBarrier as exc:
            axis = int(np.argmax(np.abs(x) / kc))
            raise ConstraintBreach(t, axis, float(x[axis]), float(kc[axis])) from exc
        alpha_dot = self.diff.update(alpha)
        err = ErrorState(z1, xdot - alpha)
        fe = external_force(t, self.amps)
        S = Z = None
        if self.net is None:
            try:
                coeffs = dynamics.cartesian_coefficients(p, q, qd)
            except SingularJacobian as exc:
                raise SingularJacobian(exc.det, t) from exc
            u = control.control_model_based(coeffs, err, alpha, alpha_dot, x, fe, kc, g)
        else:
            Z = np.concatenate([q, qd, alpha, alpha_dot])
            S = self.net.basis(Z)
            u = control.control_model_free(self.net.output(Z, S), err, x, fe, kc, g)
        tau_c = J.T @ u
        info = dict(t=t, q=q, qd=qd, x=x, xr=xr, z1=z1, z2=err.z2, u=u, fe=fe, bound=bound, kc=kc)
        return tau_c, info, Z, S

    def step(self):
        tau_c, info, Z, S = self.control()
        cfg = self.cfg
        weights = None if self.net is None else self.net.weights.copy()
        self.y = rk4_step(closed_loop_rhs(cfg, tau_c), info["t"], self.y, cfg.dt)
        if self.net is not None:
            if self.net.law is UpdateLaw.FIXED_TIME:
                self.net.update_fixed_time(Z, info["z2"], cfg.dt, self.gains, S=S)
            else:
                nc = cfg.network
                self.net.update_traditional(
                    Z, info["z2"], cfg.dt, nc.traditional_sigma, nc.traditional_rate, S=S
                )
        self.k += 1
        if not np.all(np.isfinite(self.y)):
            raise FloatingPointError(f"state diverged at t={self.t:.6g} s")
        return tau_c, info, weights


def run_scenario(cfg: ScenarioConfig) -> SimulationTrace:
    """Simulate ``cfg`` over ``[0, horizon)`` and return the decimated trace."""
    start = time.perf_counter()
    sim = Simulation(cfg)
    n_nodes = len(cfg.network.centers)
    rec = _Recorder(n_nodes)
    zero_w = np.zeros((2, n_nodes))
    dec = int(cfg.trace_decimation)
    abort = None
    try:
        for k in range(cfg.n_steps):
            _, info, weights = sim.step()
            if k % dec == 0:
                v1 = barrier.v1_total(info["z1"], info["xr"], info["kc"])
                xd, _, _ = desired_trajectory(info["t"])
                rec.add(
                    t=info["t"], q=info["q"], qd=info["qd"], x=info["x"], xd=xd, xr=info["xr"],
                    z1=info["z1"], z2=info["z2"], u=info["u"], fe=info["fe"], bound=info["bound"],
                    v1=v1, weights=zero_w if weights is None else weights,
                )
        # the final state is checked too; it has no applied control to record
        sim._check_constraints(sim.t, dynamics.forward_kinematics(cfg.robot, sim.y[:2]))
    except (ConstraintBreach, FloatingPointError) as exc:
        if cfg.strict:
            raise
        log.warning("%s: run stopped early: %s", cfg.variant.label, exc)
        abort = exc
    trace = rec.finish(
        robot=cfg.robot,
        label=cfg.variant.label,
        config_digest=cfg.digest(),
        wall_time=time.perf_counter() - start,
        breaches=sim.breaches,
        abort=abort,
    )
    return trace
