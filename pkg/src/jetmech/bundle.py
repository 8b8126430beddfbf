"""Connections on the trivial bundle Q x R -> R.

A connection is stored by its coefficient field ``gamma(q, t)``, i.e. the
time-dependent vector field ``Y = gamma^mu d/dq^mu`` on Q.  Its connection
form is ``dt (x) (d/dt + Y)``, the horizontal subbundle is spanned by the
suspension ``d/dt + Y``, and ``gamma == 0`` is the standard connection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import exprparse
from .exprparse import Const, Expr
from .jet import Jet2
from .states import BasePoint, TangentQR, VelocityState

__all__ = [
    "ConnectionModel",
    "gamma_at",
    "split",
    "connection_form",
    "horizontal_lift",
    "jet_prolongation",
]


@dataclass(frozen=True)
class ConnectionModel:
    """Coefficients ``gamma^mu(q, t)`` of a connection in an ``n``-dim chart."""

    n: int
    gamma: tuple

    def __post_init__(self):
        gamma = tuple(self.gamma)
        if len(gamma) != self.n:
            raise ValueError(f"expected {self.n} connection components, got {len(gamma)}")
        allowed = set(exprparse.chart_variables(self.n)[: self.n + 1])
        for g in gamma:
            extra = exprparse.free_variables(g) - allowed
            if extra:
                raise exprparse.UnknownVariable(sorted(extra)[0])
        object.__setattr__(self, "gamma", gamma)
        wrt = exprparse.chart_variables(self.n)[: self.n + 1]
        object.__setattr__(self, "_wrt", wrt)
        object.__setattr__(self, "_fns", tuple(exprparse.compile_expr(g, wrt) for g in gamma))

    @classmethod
    def from_strings(cls, sources: Sequence[str], n: int | None = None) -> "ConnectionModel":
        n = len(sources) if n is None else n
        declared = exprparse.chart_variables(n)[: n + 1]
        return cls(n, tuple(exprparse.parse(s, declared) for s in sources))

    @classmethod
    def standard(cls, n: int) -> "ConnectionModel":
        return cls(n, tuple(Const(0.0) for _ in range(n)))

    @classmethod
    def constant(cls, values: Sequence[float]) -> "ConnectionModel":
        return cls(len(values), tuple(Const(float(x)) for x in values))

    @property
    def is_standard(self) -> bool:
        return all(isinstance(g, Const) and g.value == 0.0 for g in self.gamma)

    def values(self, q: np.ndarray, t: float) -> np.ndarray:
        """gamma(q, t) without derivatives."""
        args = (float(t), *map(float, q))
        return np.array([float(fn(*args)) for fn in self._fns])

    def jacobians(self, q: np.ndarray, t: float):
        """Return ``(gamma, dgamma/dt, dgamma/dq)``; ``dgamma/dq[mu, nu] = d gamma^mu / d q^nu``."""
        n = self.n
        gam = np.zeros(n)
        dt = np.zeros(n)
        dq = np.zeros((n, n))
        args = None
        for mu, (g, fn) in enumerate(zip(self.gamma, self._fns)):
            if isinstance(g, Const):
                gam[mu] = g.value
                continue
            if args is None:
                vals = np.concatenate(([t], q)).tolist()
                args = [Jet2.variable(x, i, n + 1) for i, x in enumerate(vals)]
            r = fn(*args)
            if isinstance(r, Jet2):
                gam[mu] = r.value
                dt[mu] = r.grad[0]
                dq[mu] = r.grad[1:]
            else:
                gam[mu] = r
        return gam, dt, dq


def gamma_at(c: ConnectionModel, x: BasePoint):
    """``gamma``, ``d gamma/dt`` and ``d gamma/dq`` at a base point."""
    return c.jacobians(x.q, x.t)


def connection_form(c: ConnectionModel, x: BasePoint, X: TangentQR) -> TangentQR:
    """Apply ``dt (x) (d/dt + Y)``: the horizontal projection of ``X``."""
    return TangentQR(X.f, X.f * c.values(x.q, x.t))


def split(c: ConnectionModel, x: BasePoint, X: TangentQR) -> tuple[TangentQR, TangentQR]:
    """Vertical and horizontal parts of ``X``; they sum back to ``X``."""
    horizontal = connection_form(c, x, X)
    vertical = TangentQR(0.0, X.a - horizontal.a)
    return vertical, horizontal


def horizontal_lift(c: ConnectionModel, x: BasePoint) -> TangentQR:
    """The suspension ``d/dt + Y`` at ``x`` (lift of ``d/dt``)."""
    return TangentQR(1.0, c.values(x.q, x.t))


def jet_prolongation(c: ConnectionModel, s: VelocityState):
    """Components ``(f, a, b)`` of the first jet prolongation of ``d/dt + Y`` at ``s``.

    ``f = 1``, ``a = gamma`` and ``b = d gamma/dt + (d gamma/dq) v``.
    """
    gam, dgdt, dgdq = c.jacobians(s.q, s.t)
    return 1.0, gam, dgdt + dgdq @ s.v
