"""Time-dependent Lagrangian and Hamiltonian mechanics with arbitrary connections on Q x R -> R."""

from .bundle import ConnectionModel, gamma_at, horizontal_lift, jet_prolongation, split
from .dynamics import Trajectory, integrate_hamilton, integrate_lagrangian
from .errors import (
    DomainError,
    ExprSyntaxError,
    LinearSolveFailure,
    NonConvergence,
    NonFinite,
    RankDeficient,
    SingularHessian,
    TrajectoryTooShort,
    UnknownVariable,
)
from .exprparse import eval_jet2, parse
from .hamiltonian import (
    hamilton_cartan_1form,
    hamilton_field,
    hamiltonian_conn,
    hamiltonian_std,
    legendre,
    legendre_inverse,
    liouville_1form,
)
from .jet import Jet2
from .lagrangian import LagrangianModel, energy, sode_field, theta_L
from .states import BasePoint, CovectorTQ, CovectorTStarQ, MomentumState, TangentQR, TangentTQR, VelocityState

__version__ = "0.1.0"
