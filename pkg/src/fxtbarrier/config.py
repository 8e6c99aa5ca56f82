"""TOML scenario configuration.

Every key is optional; an empty file reproduces the benchmark defaults.
Sections and keys::

    [robot]        m1 m2 l1 l2 g
    [admittance]   km kb kk                      (per-axis pairs)
    [gains]        kappa1 theta1 theta2 k1 k2 k3 (pairs), k4 k5, p_c q_c ("99/101" or number)
    [network]      centers width traditional_rate traditional_sigma
    [constraints]  offset amplitude frequency phase (pairs)
    [scenario]     force_amps horizon dt q0 qd0 trace_decimation strict reference_init
    [variant]      kind ("FXT_TVIBLF" | "TVIBLF" | "IBLF"), model_free
"""

from __future__ import annotations

import sys
from dataclasses import fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .admittance import AdmittanceParams
from .barrier import ConstraintProfile
from .control import ControllerVariant, FixedTimeGains
from .dynamics import RobotParams
from .sim import NetworkConfig, ScenarioConfig

_SECTIONS = {
    "robot": RobotParams,
    "admittance": AdmittanceParams,
    "gains": FixedTimeGains,
    "network": NetworkConfig,
    "constraints": ConstraintProfile,
    "variant": ControllerVariant,
}
_SCENARIO_KEYS = (
    "force_amps", "horizon", "dt", "q0", "qd0", "trace_decimation", "strict", "reference_init",
)


def _build(cls, section: str, values: dict):
    allowed = {f.name for f in fields(cls)}
    unknown = set(values) - allowed
    if unknown:
        raise ValueError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")
    return cls(**values)


def config_from_dict(data: dict) -> ScenarioConfig:
    unknown = set(data) - set(_SECTIONS) - {"scenario"}
    if unknown:
        raise ValueError(f"unknown section(s): {', '.join(sorted(unknown))}")
    kwargs = {}
    for section, cls in _SECTIONS.items():
        if section in data:
            kwargs[section] = _build(cls, section, dict(data[section]))
    scenario = dict(data.get("scenario", {}))
    extra = set(scenario) - set(_SCENARIO_KEYS)
    if extra:
        raise ValueError(f"unknown key(s) in [scenario]: {', '.join(sorted(extra))}")
    kwargs.update(scenario)
    return ScenarioConfig(**kwargs)


def load_config(path=None) -> ScenarioConfig:
    """Read a TOML file; ``None`` gives the defaults."""
    if path is None:
        return ScenarioConfig()
    with Path(path).open("rb") as fh:
        return config_from_dict(tomllib.load(fh))
