"""Time-dependent Lagrangian mechanics on TQ x R.

Covers the Poincare-Cartan forms, the vertical endomorphisms, the
connection-dependent energy and the second-order dynamical field.  Second
derivatives of ``L`` come from :class:`~jetmech.jet.Jet2` evaluation over the
variables ``(t, q0.., v0..)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exprparse
from .bundle import ConnectionModel, jet_prolongation
from .errors import LinearSolveFailure, SingularHessian
from .exprparse import Expr
from .jet import Jet2
from .states import CovectorTQ, TangentTQR, VelocityState

DEFAULT_REGULARITY_TOL = 1e-10


@dataclass(frozen=True)
class LagrangianModel:
    """A Lagrangian ``L(q, v, t)`` on an ``n``-dimensional chart."""

    n: int
    L: Expr

    def __post_init__(self):
        names = exprparse.chart_variables(self.n)
        extra = exprparse.free_variables(self.L) - set(names)
        if extra:
            raise exprparse.UnknownVariable(sorted(extra)[0])
        object.__setattr__(self, "_names", names)
        object.__setattr__(self, "_fn", exprparse.compile_expr(self.L, names))

    @classmethod
    def from_string(cls, source: str, n: int) -> "LagrangianModel":
        return cls(n, exprparse.parse(source, exprparse.chart_variables(n)))

    def value(self, q, v, t) -> float:
        return float(self._fn(float(t), *map(float, q), *map(float, v)))

    def derivatives(self, q, v, t) -> "LagrangianDerivatives":
        """All first and second partials of L at (q, v, t)."""
        n = self.n
        vals = np.concatenate(([t], q, v)).tolist()
        m = 2 * n + 1
        r = self._fn(*(Jet2.variable(x, i, m) for i, x in enumerate(vals)))
        if not isinstance(r, Jet2):
            r = Jet2.constant(r, m)
        g, H = r.grad, r.hess
        return LagrangianDerivatives(
            L=r.value,
            dt=g[0],
            dq=g[1 : n + 1],
            dv=g[n + 1 :],
            tt=H[0, 0],
            tv=H[0, n + 1 :],
            qv=H[1 : n + 1, n + 1 :],
            vv=H[n + 1 :, n + 1 :],
            grad=g,
            hess=H,
        )


@dataclass(frozen=True)
class LagrangianDerivatives:
    """Partials of L; ``qv[i, j] = d2L/dq^i dv^j``.  ``grad``/``hess`` use order (t, q, v)."""

    L: float
    dt: float
    dq: np.ndarray
    dv: np.ndarray
    tt: float
    tv: np.ndarray
    qv: np.ndarray
    vv: np.ndarray
    grad: np.ndarray
    hess: np.ndarray


def _derivs(Lm: LagrangianModel, s: VelocityState) -> LagrangianDerivatives:
    return Lm.derivatives(s.q, s.v, s.t)


def theta_L(Lm: LagrangianModel, s: VelocityState) -> CovectorTQ:
    """Poincare-Cartan 1-form ``(L - v.dL/dv) dt + dL/dv dq``.  Never reads a connection."""
    d = _derivs(Lm, s)
    return CovectorTQ(d.L - float(s.v @ d.dv), d.dv, np.zeros(Lm.n))


def vertical_endo_V(s: VelocityState, X: TangentTQR) -> TangentTQR:
    """``V = (dq - v dt) (x) d/dv``."""
    n = s.n
    return TangentTQR(0.0, np.zeros(n), X.a - X.f * s.v)


def vertical_endo_S(c: ConnectionModel, s: VelocityState, X: TangentTQR) -> TangentTQR:
    """``S^conn = (dq - gamma dt) (x) d/dv``."""
    gam = c.values(s.q, s.t)
    return TangentTQR(0.0, np.zeros(s.n), X.a - X.f * gam)


def sv_minus_v(c: ConnectionModel, s: VelocityState, X: TangentTQR) -> TangentTQR:
    """``S^conn - V = (v - gamma) dt (x) d/dv``."""
    gam = c.values(s.q, s.t)
    return TangentTQR(0.0, np.zeros(s.n), X.f * (s.v - gam))


def energy(Lm: LagrangianModel, c: ConnectionModel, s: VelocityState) -> float:
    """Connection-dependent energy ``dL/dv . (v - gamma) - L``."""
    d = _derivs(Lm, s)
    gam = c.values(s.q, s.t)
    return float(d.dv @ (s.v - gam)) - d.L


def energy_by_contraction(Lm: LagrangianModel, c: ConnectionModel, s: VelocityState) -> float:
    """Energy as the contraction of the prolonged suspension with ``dL o (S - V) - L dt``.

    Assembles the 1-form by feeding basis vectors through :func:`sv_minus_v`,
    so it shares no arithmetic with :func:`energy`.
    """
    n = s.n
    d = _derivs(Lm, s)
    m = 2 * n + 1
    form = np.empty(m)
    for k in range(m):
        e = np.zeros(m)
        e[k] = 1.0
        image = sv_minus_v(c, s, TangentTQR(e[0], e[1 : n + 1], e[n + 1 :]))
        form[k] = float(d.grad @ image.as_array())
    form[0] -= d.L
    f, a, b = jet_prolongation(c, s)
    return float(form @ np.concatenate(([f], a, b)))


def energy_density(Lm: LagrangianModel, c: ConnectionModel, s: VelocityState) -> CovectorTQ:
    """The semibasic 1-form ``E dt``."""
    return CovectorTQ(energy(Lm, c, s), np.zeros(s.n), np.zeros(s.n))


def hessian_vv(Lm: LagrangianModel, s: VelocityState) -> np.ndarray:
    return _derivs(Lm, s).vv.copy()


def is_regular(Lm: LagrangianModel, s: VelocityState, tol: float = DEFAULT_REGULARITY_TOL) -> bool:
    return abs(np.linalg.det(hessian_vv(Lm, s))) > tol


def _solve_regular(W: np.ndarray, rhs: np.ndarray, tol: float, t: float | None = None) -> np.ndarray:
    det = W[0, 0] if W.shape == (1, 1) else np.linalg.det(W)
    if not abs(det) > tol:
        raise SingularHessian(f"velocity Hessian is singular (|det| = {abs(det):.3g} <= {tol:g})", det=det, t=t)
    if W.shape == (1, 1):
        return rhs / det
    try:
        x = np.linalg.solve(W, rhs)
    except np.linalg.LinAlgError as exc:
        raise LinearSolveFailure(str(exc)) from None
    if not np.all(np.isfinite(x)):
        raise LinearSolveFailure("non-finite solution of the velocity Hessian system")
    return x


def accelerations(d: LagrangianDerivatives, v: np.ndarray, tol: float = DEFAULT_REGULARITY_TOL, t=None) -> np.ndarray:
    """Euler-Lagrange accelerations from precomputed partials."""
    rhs = d.dq - d.qv.T @ v - d.tv
    return _solve_regular(d.vv, rhs, tol, t)


def sode_field(Lm: LagrangianModel, s: VelocityState, tol: float = DEFAULT_REGULARITY_TOL) -> TangentTQR:
    """The dynamical field ``d/dt + v d/dq + a d/dv`` of a regular Lagrangian."""
    a = accelerations(_derivs(Lm, s), s.v, tol, s.t)
    return TangentTQR(1.0, s.v, a)


def omega_L_matrix(Lm: LagrangianModel, s: VelocityState) -> np.ndarray:
    """Components ``M`` of the Poincare-Cartan 2-form, ``Omega(X, Y) = X^T M Y``, basis (t, q, v)."""
    n = s.n
    m = 2 * n + 1
    d = _derivs(Lm, s)
    M = np.zeros((m, m))

    def wedge(alpha, beta, sign=1.0):
        M[:] += sign * (np.outer(alpha, beta) - np.outer(beta, alpha))

    for mu in range(n):
        dp = np.concatenate(([d.tv[mu]], d.qv[:, mu], d.vv[:, mu]))
        dq = np.zeros(m)
        dq[1 + mu] = 1.0
        wedge(dp, dq, -1.0)
    dE = np.concatenate(([s.v @ d.tv - d.dt], d.qv @ s.v - d.dq, d.vv @ s.v))
    dt = np.zeros(m)
    dt[0] = 1.0
    wedge(dE, dt)
    return M


def contract(M: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Interior product ``i(X)`` of a 2-form given by its component matrix."""
    return X @ M


def dynamical_equation_residual(Lm: LagrangianModel, s: VelocityState, X: TangentTQR | None = None) -> np.ndarray:
    """``i(X) Omega_L`` as a covector array; zero when ``X`` is the dynamical field."""
    if X is None:
        X = sode_field(Lm, s)
    return contract(omega_L_matrix(Lm, s), X.as_array())
