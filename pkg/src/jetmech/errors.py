"""Exception types shared across modules."""

from .exprparse import ExprSyntaxError, UnknownVariable
from .jet import DomainError


class SingularHessian(ArithmeticError):
    """The velocity Hessian of the Lagrangian is (numerically) singular."""

    def __init__(self, message: str, det: float | None = None, t: float | None = None):
        super().__init__(message)
        self.det = det
        self.t = t


class LinearSolveFailure(ArithmeticError):
    pass


class NonConvergence(ArithmeticError):
    """Newton iteration for the inverse Legendre map did not converge."""

    def __init__(self, message: str, residual: float | None = None, iterations: int = 0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class NonFinite(ArithmeticError):
    """Integration blew up (non-finite or huge state component)."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class TrajectoryTooShort(ValueError):
    pass


class RankDeficient(UserWarning):
    """Least-squares sample matrix has rank below the chart dimension."""


__all__ = [
    "DomainError",
    "ExprSyntaxError",
    "UnknownVariable",
    "SingularHessian",
    "LinearSolveFailure",
    "NonConvergence",
    "NonFinite",
    "TrajectoryTooShort",
    "RankDeficient",
]
