"""Fixed-step RK4 integration of the Lagrangian and Hamiltonian equations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import NonFinite, SingularHessian
from .hamiltonian import DEFAULT_NEWTON_TOL, invert_momenta
from .lagrangian import DEFAULT_REGULARITY_TOL, LagrangianModel, accelerations
from .states import MomentumState, VelocityState

DEFAULT_STEP = 1e-3
BLOWUP_THRESHOLD = 1e12


@dataclass(frozen=True)
class Trajectory:
    """Samples at uniformly spaced times.

    ``kind`` is ``"lagrangian"`` (``fiber`` holds velocities) or
    ``"hamiltonian"`` (``fiber`` holds momenta).  ``q`` and ``fiber`` have
    shape ``(len(times), n)``.
    """

    kind: str
    times: np.ndarray
    q: np.ndarray
    fiber: np.ndarray
    step: float

    def __len__(self) -> int:
        return self.times.size

    @property
    def n(self) -> int:
        return self.q.shape[1]

    @property
    def v(self) -> np.ndarray:
        if self.kind != "lagrangian":
            raise AttributeError("a Hamiltonian trajectory has momenta, not velocities")
        return self.fiber

    @property
    def p(self) -> np.ndarray:
        if self.kind != "hamiltonian":
            raise AttributeError("a Lagrangian trajectory has velocities, not momenta")
        return self.fiber

    def state(self, k: int):
        cls = VelocityState if self.kind == "lagrangian" else MomentumState
        return cls(self.q[k], self.fiber[k], self.times[k])

    def states(self) -> Iterator:
        for k in range(len(self)):
            yield self.state(k)


def time_grid(t0: float, t_end: float, h: float) -> tuple[np.ndarray, float]:
    """Uniform grid from ``t0`` to exactly ``t_end`` with step at most ``h``.

    The step is shrunk so that the span is an integer number of steps, and
    grid times are formed as ``t0 + k*step`` (no accumulation drift).
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    if not t_end > t0:
        raise ValueError("t_end must exceed the initial time")
    span = t_end - t0
    steps = max(1, math.ceil(span / h - 1e-9))
    step = span / steps
    times = t0 + step * np.arange(steps + 1, dtype=float)
    times[-1] = t_end
    return times, step


def _check(y: np.ndarray, t: float):
    if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > BLOWUP_THRESHOLD:
        raise NonFinite(f"integration blew up near t = {t:g}", t=t)


def _rk4(rhs, y0: np.ndarray, times: np.ndarray, step: float) -> np.ndarray:
    out = np.empty((times.size, y0.size))
    out[0] = y0
    y = y0
    half = 0.5 * step
    for k in range(times.size - 1):
        t = times[k]
        k1 = rhs(t, y)
        k2 = rhs(t + half, y + half * k1)
        k3 = rhs(t + half, y + half * k2)
        k4 = rhs(t + step, y + step * k3)
        y = y + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check(y, times[k + 1])
        out[k + 1] = y
    return out


def integrate_lagrangian(Lm: LagrangianModel, s0: VelocityState, t_end: float, h: float = DEFAULT_STEP,
                         regularity_tol: float = DEFAULT_REGULARITY_TOL) -> Trajectory:
    """RK4 on ``(q', v') = (v, a(q, v, t))`` with Euler-Lagrange accelerations."""
    n = Lm.n
    times, step = time_grid(s0.t, t_end, h)

    def rhs(t, y):
        q, v = y[:n], y[n:]
        try:
            a = accelerations(Lm.derivatives(q, v, t), v, regularity_tol, t)
        except SingularHessian as exc:
            raise SingularHessian(f"{exc} at t = {t:g}", det=exc.det, t=t) from None
        return np.concatenate((v, a))

    ys = _rk4(rhs, np.concatenate((s0.q, s0.v)), times, step)
    return Trajectory("lagrangian", times, ys[:, :n], ys[:, n:], step)


def integrate_hamilton(Lm: LagrangianModel, m0: MomentumState, t_end: float, h: float = DEFAULT_STEP,
                       newton_tol: float = DEFAULT_NEWTON_TOL, guess=None) -> Trajectory:
    """RK4 on Hamilton's equations ``(q', p') = (dh/dp, -dh/dq) = (v, dL/dq)``.

    Each stage inverts the Legendre map; Newton is warm-started from the
    previous stage's velocity (``guess`` only seeds the first solve).
    """
    n = Lm.n
    times, step = time_grid(m0.t, t_end, h)
    last_v = [None if guess is None else np.asarray(guess, dtype=float)]

    def rhs(t, y):
        q, p = y[:n], y[n:]
        v, d = invert_momenta(Lm, q, p, t, last_v[0], newton_tol)
        last_v[0] = v
        return np.concatenate((v, d.dq))

    ys = _rk4(rhs, np.concatenate((m0.q, m0.p)), times, step)
    return Trajectory("hamiltonian", times, ys[:, :n], ys[:, n:], step)
