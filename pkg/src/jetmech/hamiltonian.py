"""Hamiltonian side: Legendre map, Hamiltonian functions and canonical forms.

The Hamiltonian is never supplied by the user.  ``h`` is obtained by
inverting the Legendre map numerically (Newton on ``v -> dL/dv - p``) and
evaluating the standard energy there.  Its partials follow from Legendre
duality at the matched state: ``dh/dp = v``, ``dh/dq = -dL/dq`` and
``dh/dt = -dL/dt``.
"""

from __future__ import annotations

import numpy as np

from .bundle import ConnectionModel
from .errors import NonConvergence
from .lagrangian import DEFAULT_REGULARITY_TOL, LagrangianModel, _solve_regular
from .states import CovectorTQ, CovectorTStarQ, MomentumState, VelocityState

DEFAULT_NEWTON_TOL = 1e-12
DEFAULT_MAX_ITER = 50


def legendre(Lm: LagrangianModel, s: VelocityState) -> MomentumState:
    """Fiber derivative ``(q, v, t) -> (q, dL/dv, t)``."""
    return MomentumState(s.q, Lm.derivatives(s.q, s.v, s.t).dv, s.t)


def invert_momenta(Lm: LagrangianModel, q, p, t, guess=None, tol=DEFAULT_NEWTON_TOL,
                   max_iter=DEFAULT_MAX_ITER, regularity_tol=DEFAULT_REGULARITY_TOL):
    """Array-level Newton solve of ``dL/dv(q, v, t) = p``.  Returns ``(v, derivatives)``."""
    p = np.asarray(p, dtype=float)
    v = np.array(p if guess is None else guess, dtype=float)
    for it in range(max_iter + 1):
        d = Lm.derivatives(q, v, t)
        r = d.dv - p
        res = float(np.max(np.abs(r))) if r.size else 0.0
        if res <= tol:
            return v, d
        if it == max_iter or not np.isfinite(res):
            break
        v = v - _solve_regular(d.vv, r, regularity_tol, t)
    raise NonConvergence(
        f"inverse Legendre map did not converge in {max_iter} iterations (residual {res:.3g})",
        residual=res,
        iterations=max_iter,
    )


def legendre_inverse(Lm: LagrangianModel, m: MomentumState, guess=None, tol: float = DEFAULT_NEWTON_TOL,
                     max_iter: int = DEFAULT_MAX_ITER) -> VelocityState:
    """Velocity state mapped to ``m`` by the Legendre map; the initial guess defaults to ``v = p``."""
    v, _ = invert_momenta(Lm, m.q, m.p, m.t, guess, tol, max_iter)
    return VelocityState(m.q, v, m.t)


def connection_function(c: ConnectionModel, m: MomentumState) -> float:
    """``H = gamma . p``, the dt-coefficient separating the two Liouville forms."""
    return float(c.values(m.q, m.t) @ m.p)


def hamiltonian_std(Lm: LagrangianModel, m: MomentumState, guess=None, tol=DEFAULT_NEWTON_TOL) -> float:
    """Standard Hamiltonian ``h``: the energy ``p.v - L`` at the preimage of ``m``."""
    v, d = invert_momenta(Lm, m.q, m.p, m.t, guess, tol)
    return float(d.dv @ v) - d.L


def hamiltonian_conn(Lm: LagrangianModel, c: ConnectionModel, m: MomentumState, guess=None,
                     tol=DEFAULT_NEWTON_TOL) -> float:
    """``h^conn = h - gamma . p``."""
    return hamiltonian_std(Lm, m, guess, tol) - connection_function(c, m)


def canonical_1form(m: MomentumState) -> CovectorTStarQ:
    """``theta_0 = p dq``."""
    return CovectorTStarQ(0.0, m.p, np.zeros(m.n))


def liouville_1form(c: ConnectionModel, m: MomentumState) -> CovectorTStarQ:
    """``theta^conn = p dq - (gamma . p) dt``."""
    return CovectorTStarQ(-connection_function(c, m), m.p, np.zeros(m.n))


def liouville_2form_matrix(c: ConnectionModel, m: MomentumState) -> np.ndarray:
    """Components of ``omega^conn = dq^dp + gamma dp^dt + p dgamma/dq^nu dq^nu^dt``, basis (t, q, p)."""
    n = m.n
    size = 2 * n + 1
    gam, _, dgdq = c.jacobians(m.q, m.t)
    M = np.zeros((size, size))
    for mu in range(n):
        i, j = 1 + mu, 1 + n + mu
        M[i, j] += 1.0
        M[j, i] -= 1.0
        M[j, 0] += gam[mu]
        M[0, j] -= gam[mu]
    w = dgdq.T @ m.p  # w_nu = p_mu d gamma^mu / d q^nu
    M[1 : n + 1, 0] += w
    M[0, 1 : n + 1] -= w
    return M


def hamilton_cartan_1form(Lm: LagrangianModel, c: ConnectionModel, m: MomentumState, guess=None,
                          tol=DEFAULT_NEWTON_TOL) -> CovectorTStarQ:
    """``Theta^conn = theta^conn - h^conn dt``; independent of the connection."""
    theta = liouville_1form(c, m)
    hc = hamiltonian_conn(Lm, c, m, guess, tol)
    return CovectorTStarQ(theta.ct - hc, theta.cq, theta.cp)


def hamiltonian_differential(Lm: LagrangianModel, m: MomentumState, guess=None, tol=DEFAULT_NEWTON_TOL):
    """``(dh/dt, dh/dq, dh/dp)`` of the standard Hamiltonian, via Legendre duality."""
    v, d = invert_momenta(Lm, m.q, m.p, m.t, guess, tol)
    return -d.dt, -d.dq, v


def hamilton_cartan_2form_matrix(Lm: LagrangianModel, c: ConnectionModel, m: MomentumState, guess=None,
                                 tol=DEFAULT_NEWTON_TOL) -> np.ndarray:
    """Components of ``Omega^conn = omega^conn + dh^conn ^ dt``, basis (t, q, p)."""
    n = m.n
    ht, hq, hp = hamiltonian_differential(Lm, m, guess, tol)
    gam, dgdt, dgdq = c.jacobians(m.q, m.t)
    # d(gamma . p)
    Ht = float(dgdt @ m.p)
    Hq = dgdq.T @ m.p
    dh = np.concatenate(([ht - Ht], hq - Hq, hp - gam))
    dt = np.zeros(2 * n + 1)
    dt[0] = 1.0
    return liouville_2form_matrix(c, m) + np.outer(dh, dt) - np.outer(dt, dh)


def hamilton_field(Lm: LagrangianModel, m: MomentumState, guess=None, tol=DEFAULT_NEWTON_TOL):
    """``(1, dh/dp, -dh/dq)``.  Takes no connection: the field is the same for all of them."""
    v, d = invert_momenta(Lm, m.q, m.p, m.t, guess, tol)
    return 1.0, v, d.dq.copy()


def legendre_tangent(Lm: LagrangianModel, s: VelocityState) -> np.ndarray:
    """Jacobian of the Legendre map, rows (t, q, p) and columns (t, q, v)."""
    n = s.n
    d = Lm.derivatives(s.q, s.v, s.t)
    J = np.zeros((2 * n + 1, 2 * n + 1))
    J[0, 0] = 1.0
    J[1 : n + 1, 1 : n + 1] = np.eye(n)
    J[n + 1 :, 0] = d.tv
    J[n + 1 :, 1 : n + 1] = d.qv.T
    J[n + 1 :, n + 1 :] = d.vv
    return J


def pullback_1form(Lm: LagrangianModel, s: VelocityState, alpha: CovectorTStarQ) -> CovectorTQ:
    """Pull a 1-form on T*Q x R back along the Legendre map, at ``s``."""
    n = s.n
    row = alpha.as_array() @ legendre_tangent(Lm, s)
    return CovectorTQ(row[0], row[1 : n + 1], row[n + 1 :])


def pushforward(Lm: LagrangianModel, s: VelocityState, X) -> np.ndarray:
    """Push a tangent vector at ``s`` (components t, q, v) forward along the Legendre map."""
    vec = X.as_array() if hasattr(X, "as_array") else np.asarray(X, dtype=float)
    return legendre_tangent(Lm, s) @ vec
