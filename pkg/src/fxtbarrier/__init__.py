"""Fixed-time time-varying integral barrier control of a two-link arm under human force."""

from .admittance import AdmittanceParams
from .barrier import ConstraintProfile
from .config import load_config
from .control import ALL_VARIANTS, ControllerKind, ControllerVariant, FixedTimeGains
from .dynamics import RobotParams
from .errors import ConstraintBreach, DomainError, EmptyWindow, OutOfBarrier, SingularJacobian
from .sim import ScenarioConfig, SimulationTrace, run_scenario

__version__ = "0.1.0"

__all__ = [
    "ALL_VARIANTS",
    "AdmittanceParams",
    "ConstraintBreach",
    "ConstraintProfile",
    "ControllerKind",
    "ControllerVariant",
    "DomainError",
    "EmptyWindow",
    "FixedTimeGains",
    "OutOfBarrier",
    "RobotParams",
    "ScenarioConfig",
    "SimulationTrace",
    "SingularJacobian",
    "load_config",
    "run_scenario",
]
