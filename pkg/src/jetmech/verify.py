"""Numerical certificates for the structural results on connection energies.

Trajectory-based checks treat the integrator as a black box: time
derivatives along a trajectory are taken by 5-point central differences of
sampled values, never by re-using the vector field that produced the samples.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.stats import qmc

from . import exprparse
from .bundle import ConnectionModel
from .dynamics import Trajectory
from .errors import RankDeficient, TrajectoryTooShort
from .exprparse import Expr
from .hamiltonian import DEFAULT_NEWTON_TOL, hamilton_cartan_1form, hamilton_field
from .lagrangian import LagrangianModel
from .states import BasePoint, MomentumState

TRAJECTORY_THRESHOLD = 1e-5
ALGEBRAIC_THRESHOLD = 1e-10


def _require_lagrangian(traj: Trajectory):
    if traj.kind != "lagrangian":
        raise ValueError("expected a Lagrangian trajectory (velocity samples)")


def energy_series(Lm: LagrangianModel, c: ConnectionModel, traj: Trajectory) -> np.ndarray:
    """Connection energy ``dL/dv . (v - gamma) - L`` at every sample."""
    _require_lagrangian(traj)
    out = np.empty(len(traj))
    for k in range(len(traj)):
        q, v, t = traj.q[k], traj.v[k], traj.times[k]
        d = Lm.derivatives(q, v, t)
        out[k] = float(d.dv @ (v - c.values(q, t))) - d.L
    return out


def prolongation_derivative(Lm: LagrangianModel, c: ConnectionModel, q, v, t) -> float:
    """Derivative of L along the prolonged suspension:
    ``dL/dt + gamma . dL/dq + (dgamma/dt + (dgamma/dq) v) . dL/dv``."""
    d = Lm.derivatives(q, v, t)
    gam, dgdt, dgdq = c.jacobians(np.asarray(q, dtype=float), t)
    return d.dt + float(gam @ d.dq) + float((dgdt + dgdq @ v) @ d.dv)


def five_point_derivative(values: np.ndarray, step: float) -> np.ndarray:
    """Fourth-order central differences at interior samples ``2 .. N-3``."""
    f = np.asarray(values, dtype=float)
    if f.size < 5:
        raise TrajectoryTooShort(f"need at least 5 samples, got {f.size}")
    return (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * step)


def energy_balance_residual(Lm: LagrangianModel, c: ConnectionModel, traj: Trajectory):
    """Residual of ``X_L(E) = -(prolonged suspension)(L)`` along a trajectory.

    Returns ``(max |residual|, residual series)``; the series covers the
    interior samples where the 5-point stencil fits.
    """
    _require_lagrangian(traj)
    if len(traj) < 5:
        raise TrajectoryTooShort(f"need at least 5 samples, got {len(traj)}")
    dE = five_point_derivative(energy_series(Lm, c, traj), traj.step)
    rhs = np.array(
        [prolongation_derivative(Lm, c, traj.q[k], traj.v[k], traj.times[k]) for k in range(2, len(traj) - 2)]
    )
    series = dE + rhs
    return float(np.max(np.abs(series))), series


def conservation_check(Lm: LagrangianModel, c: ConnectionModel, traj: Trajectory) -> float:
    """Max drift ``|E(s_k) - E(s_0)|`` of the connection energy."""
    E = energy_series(Lm, c, traj)
    return float(np.max(np.abs(E - E[0])))


def balance_corrected_drift(Lm: LagrangianModel, c: ConnectionModel, traj: Trajectory) -> float:
    """Max drift of ``E(t) + int_0^t (prolonged suspension)(L) ds``.

    This is conserved whenever the energy balance holds, and reduces to
    :func:`conservation_check` when the source term vanishes.  The integral
    uses the 4th-order cumulative Simpson rule.
    """
    E = energy_series(Lm, c, traj)
    src = np.array([prolongation_derivative(Lm, c, traj.q[k], traj.v[k], traj.times[k]) for k in range(len(traj))])
    integral = cumulative_simpson(src, x=traj.times, initial=0.0)
    total = E + integral
    return float(np.max(np.abs(total - total[0])))


@dataclass(frozen=True)
class InvarianceResult:
    theta_spread: float
    field_spread: float


def invariance_check(Lm: LagrangianModel, connections: Sequence[ConnectionModel], m: MomentumState,
                     guess=None, tol: float = DEFAULT_NEWTON_TOL) -> InvarianceResult:
    """Componentwise spread of the Hamilton-Cartan 1-form across connections.

    The Hamiltonian field takes no connection argument, so its spread is 0 by
    construction; it is still evaluated once per connection for symmetry.
    """
    forms = np.array([hamilton_cartan_1form(Lm, c, m, guess, tol).as_array() for c in connections])
    fields = []
    for _ in connections:
        f, a, b = hamilton_field(Lm, m, guess, tol)
        fields.append(np.concatenate(([f], a, b)))
    fields = np.array(fields)
    theta_spread = float(np.max(forms.max(axis=0) - forms.min(axis=0)))
    field_spread = float(np.max(fields.max(axis=0) - fields.min(axis=0)))
    return InvarianceResult(theta_spread, field_spread)


def variational_identity_residual(Lm: LagrangianModel, c: ConnectionModel, traj: Trajectory) -> float:
    """Max of ``E(s) - (p.v - gamma.p - L)(s)`` along a lifted curve.

    The bracket is the coordinate pullback of ``FL* theta_conn - L dt`` along
    the curve, i.e. the dt-coefficient after substituting ``dq = v dt``.
    """
    _require_lagrangian(traj)
    worst = 0.0
    for k in range(len(traj)):
        q, v, t = traj.q[k], traj.v[k], traj.times[k]
        d = Lm.derivatives(q, v, t)
        p = d.dv
        gam = c.values(q, t)
        E = float(p @ (v - gam)) - d.L
        pulled = float(p @ v) - float(gam @ p) - d.L
        worst = max(worst, abs(E - pulled))
    return worst


def first_integral_check(Lm: LagrangianModel, f: Expr, traj: Trajectory) -> float:
    """Max drift of a candidate first integral ``f(t, q, v)`` along a trajectory."""
    _require_lagrangian(traj)
    fn = exprparse.compile_expr(f, exprparse.chart_variables(Lm.n))
    vals = np.array([float(fn(traj.times[k], *traj.q[k], *traj.v[k])) for k in range(len(traj))])
    return float(np.max(np.abs(vals - vals[0])))


def velocity_samples(n: int, k: int | None = None, box=(-2.0, 2.0)) -> np.ndarray:
    """Deterministic low-discrepancy velocities in ``[lo, hi]^n`` (unscrambled Halton)."""
    k = 2 * n + 3 if k is None else k
    unit = qmc.Halton(d=n, scramble=False).random(k)
    lo, hi = box
    return lo + (hi - lo) * unit


@dataclass(frozen=True)
class FitResult:
    point: BasePoint
    gamma: np.ndarray
    residual: float
    rank: int

    @property
    def rank_deficient(self) -> bool:
        return self.rank < self.point.n


def fit_connection_to_first_integral(Lm: LagrangianModel, f: Expr, base_points: Sequence[BasePoint],
                                     k: int | None = None, box=(-2.0, 2.0)) -> list[FitResult]:
    """Least-squares connection coefficients realizing ``f`` as a connection energy.

    At each base point solves ``dL/dv(q, v_j, t) . gamma = E_L - f`` over the
    velocity samples ``v_j``.  A zero residual means ``f`` agrees with the
    energy of that ``gamma`` on all samples.  Rank deficiency is reported
    through a :class:`RankDeficient` warning and the minimum-norm solution is
    returned.
    """
    n = Lm.n
    k = 2 * n + 3 if k is None else k
    if k < n:
        raise ValueError(f"need at least n = {n} velocity samples, got {k}")
    fn = exprparse.compile_expr(f, exprparse.chart_variables(n))
    vs = velocity_samples(n, k, box)
    results = []
    for x in base_points:
        A = np.empty((k, n))
        b = np.empty(k)
        for j, v in enumerate(vs):
            d = Lm.derivatives(x.q, v, x.t)
            A[j] = d.dv
            E_std = float(d.dv @ v) - d.L
            b[j] = E_std - float(fn(x.t, *x.q, *v))
        gamma, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
        if rank < n:
            warnings.warn(f"sample matrix at q={x.q}, t={x.t} has rank {rank} < {n}", RankDeficient, stacklevel=2)
        residual = float(np.max(np.abs(A @ gamma - b)))
        results.append(FitResult(x, gamma, residual, int(rank)))
    return results
