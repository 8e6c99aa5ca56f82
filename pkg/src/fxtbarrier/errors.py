"""Exception types raised by the simulation stack."""


class FxtBarrierError(Exception):
    """Base class for all package errors."""


class SingularJacobian(FxtBarrierError):
    """The manipulator Jacobian is (numerically) singular."""

    def __init__(self, det, t=None):
        self.det = det
        self.t = t
        where = "" if t is None else f" at t={t:.6g} s"
        super().__init__(f"singular Jacobian (|det J| = {abs(det):.3e}){where}")


class OutOfBarrier(FxtBarrierError):
    """A state or reference left the region |value| < bound."""

    def __init__(self, value, bound, what="state"):
        self.value = value
        self.bound = bound
        super().__init__(f"{what} {value:.6g} outside barrier |.| < {bound:.6g}")


class ConstraintBreach(FxtBarrierError):
    """Workspace constraint violated during a strict-mode simulation."""

    def __init__(self, t, axis, position, bound):
        self.t = t
        self.axis = axis
        self.position = position
        self.bound = bound
        super().__init__(
            f"constraint breach at t={t:.6g} s on axis {axis + 1}: "
            f"|x|={abs(position):.6g} >= bound {bound:.6g}"
        )


class DomainError(FxtBarrierError, ValueError):
    """Arguments outside the domain where a formula is defined."""


class EmptyWindow(FxtBarrierError, ValueError):
    """A metric window selected no trace samples."""
