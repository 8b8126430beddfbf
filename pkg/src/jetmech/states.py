"""Points, tangent vectors and covectors in coordinates.

Everything lives in a single global chart: ``Q = R^n`` with time ``t``.
Points of ``TQ x R`` are :class:`VelocityState`, points of ``T*Q x R`` are
:class:`MomentumState`.  Vectors and 1-forms are stored by components in the
bases ``(d/dt, d/dq, d/dv)`` / ``(dt, dq, dv)`` and the momentum analogues.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np


def _vec(x) -> np.ndarray:
    a = np.array(x, dtype=float).reshape(-1)
    a.flags.writeable = False
    return a


def _check_finite(name: str, *parts):
    for p in parts:
        if not np.all(np.isfinite(p)):
            raise ValueError(f"{name} has non-finite components")


class _Components:
    """Equality by exact comparison of every component."""

    __hash__ = None

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return all(np.array_equal(getattr(self, f.name), getattr(other, f.name)) for f in fields(self))


@dataclass(frozen=True, eq=False)
class BasePoint(_Components):
    """A point (q, t) of Q x R."""

    q: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "q", _vec(self.q))
        object.__setattr__(self, "t", float(self.t))
        _check_finite("BasePoint", self.q, self.t)

    @property
    def n(self) -> int:
        return self.q.size


@dataclass(frozen=True, eq=False)
class VelocityState(_Components):
    """A point (q, v, t) of TQ x R."""

    q: np.ndarray
    v: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "q", _vec(self.q))
        object.__setattr__(self, "v", _vec(self.v))
        object.__setattr__(self, "t", float(self.t))
        if self.q.size != self.v.size:
            raise ValueError("q and v must have the same dimension")
        _check_finite("VelocityState", self.q, self.v, self.t)

    @property
    def n(self) -> int:
        return self.q.size

    @property
    def base(self) -> BasePoint:
        return BasePoint(self.q, self.t)


@dataclass(frozen=True, eq=False)
class MomentumState(_Components):
    """A point (q, p, t) of T*Q x R."""

    q: np.ndarray
    p: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "q", _vec(self.q))
        object.__setattr__(self, "p", _vec(self.p))
        object.__setattr__(self, "t", float(self.t))
        if self.q.size != self.p.size:
            raise ValueError("q and p must have the same dimension")
        _check_finite("MomentumState", self.q, self.p, self.t)

    @property
    def n(self) -> int:
        return self.q.size

    @property
    def base(self) -> BasePoint:
        return BasePoint(self.q, self.t)


@dataclass(frozen=True, eq=False)
class TangentQR(_Components):
    """f d/dt + a^mu d/dq^mu at a point of Q x R."""

    f: float
    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f", float(self.f))
        object.__setattr__(self, "a", _vec(self.a))

    def __add__(self, other: "TangentQR") -> "TangentQR":
        return TangentQR(self.f + other.f, self.a + other.a)

    def is_zero(self) -> bool:
        return self.f == 0.0 and not self.a.any()


@dataclass(frozen=True, eq=False)
class TangentTQR(_Components):
    """f d/dt + a^mu d/dq^mu + b^mu d/dv^mu at a point of TQ x R."""

    f: float
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f", float(self.f))
        object.__setattr__(self, "a", _vec(self.a))
        object.__setattr__(self, "b", _vec(self.b))

    def as_array(self) -> np.ndarray:
        """Components in the order (t, q..., v...)."""
        return np.concatenate(([self.f], self.a, self.b))


@dataclass(frozen=True, eq=False)
class CovectorTQ(_Components):
    """ct dt + cq_mu dq^mu + cv_mu dv^mu on TQ x R."""

    ct: float
    cq: np.ndarray
    cv: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ct", float(self.ct))
        object.__setattr__(self, "cq", _vec(self.cq))
        object.__setattr__(self, "cv", _vec(self.cv))

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.ct], self.cq, self.cv))

    def __call__(self, X: TangentTQR) -> float:
        return self.ct * X.f + float(self.cq @ X.a) + float(self.cv @ X.b)


@dataclass(frozen=True, eq=False)
class CovectorTStarQ(_Components):
    """ct dt + cq_mu dq^mu + cp^mu dp_mu on T*Q x R."""

    ct: float
    cq: np.ndarray
    cp: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ct", float(self.ct))
        object.__setattr__(self, "cq", _vec(self.cq))
        object.__setattr__(self, "cp", _vec(self.cp))

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.ct], self.cq, self.cp))
