"""Second-order forward-mode scalars.

A :class:`Jet2` carries a value together with its gradient and Hessian with
respect to a fixed, ordered list of independent variables.  Arithmetic on
jets propagates the truncated second-order Taylor expansion exactly, so the
derivatives are correct to round-off.

Plain ``float`` operands act as constants, which keeps subexpressions that do
not touch any independent variable cheap.  Every update of the Hessian is
built from symmetric pieces (``outer(g, g)``, ``outer(a, b) + outer(b, a)``,
scalar multiples of symmetric matrices), so symmetry holds bit for bit.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

Number = Union[float, int]


class DomainError(ArithmeticError):
    """An elementary function was evaluated outside its real domain."""

    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.node = node


class Jet2:
    """Value, gradient and Hessian of a scalar w.r.t. ``m`` variables."""

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @classmethod
    def variable(cls, value: float, index: int, size: int) -> "Jet2":
        grad = np.zeros(size)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((size, size)))

    @classmethod
    def constant(cls, value: float, size: int) -> "Jet2":
        return cls(value, np.zeros(size), np.zeros((size, size)))

    def __repr__(self) -> str:
        return f"Jet2(value={self.value!r}, grad={self.grad!r}, hess={self.hess!r})"

    # -- composition with a scalar function of one argument -----------------

    def _chain(self, f0: float, f1: float, f2: float) -> "Jet2":
        g = self.grad
        return Jet2(f0, f1 * g, f1 * self.hess + f2 * (g[:, None] * g))

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.grad, -self.hess)

    def __pos__(self) -> "Jet2":
        return self

    def __add__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        return Jet2(self.value + other, self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        return Jet2(self.value - other, self.grad, self.hess)

    def __rsub__(self, other) -> "Jet2":
        return Jet2(other - self.value, -self.grad, -self.hess)

    def __mul__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            a, b = self, other
            cross = a.grad[:, None] * b.grad
            return Jet2(
                a.value * b.value,
                a.value * b.grad + b.value * a.grad,
                a.value * b.hess + b.value * a.hess + (cross + cross.T),
            )
        return Jet2(self.value * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        x = self.value
        if x == 0.0:
            raise DomainError("division by zero")
        inv = 1.0 / x
        return self._chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        if other == 0:
            raise DomainError("division by zero")
        return self * (1.0 / other)

    def __rtruediv__(self, other) -> "Jet2":
        return self.reciprocal() * other

    def __pow__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return _pow_general(self, other)
        return _pow_const(self, float(other))

    def __rpow__(self, other) -> "Jet2":
        base = float(other)
        if base <= 0.0:
            raise DomainError("power with non-positive base and variable exponent")
        # b^y = exp(y log b)
        return (self * math.log(base)).exp()

    # -- elementary functions ---------------------------------------------

    def sin(self) -> "Jet2":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._chain(s, c, -s)

    def cos(self) -> "Jet2":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._chain(c, -s, -c)

    def tan(self) -> "Jet2":
        c = math.cos(self.value)
        if c == 0.0:
            raise DomainError("tan at a pole")
        t = math.tan(self.value)
        sec2 = 1.0 + t * t
        return self._chain(t, sec2, 2.0 * t * sec2)

    def exp(self) -> "Jet2":
        try:
            e = math.exp(self.value)
        except OverflowError:
            raise DomainError("exp overflow") from None
        return self._chain(e, e, e)

    def log(self) -> "Jet2":
        x = self.value
        if x <= 0.0:
            raise DomainError("log of non-positive value")
        inv = 1.0 / x
        return self._chain(math.log(x), inv, -inv * inv)

    def sqrt(self) -> "Jet2":
        x = self.value
        if x <= 0.0:
            # sqrt(0) has no derivative
            raise DomainError("sqrt of non-positive value" if x < 0 else "sqrt not differentiable at 0")
        r = math.sqrt(x)
        return self._chain(r, 0.5 / r, -0.25 / (r * x))


def _is_integral(y: float) -> bool:
    return math.isfinite(y) and y == math.floor(y)


def _pow_const(x: Jet2, k: float) -> Jet2:
    v = x.value
    if v < 0.0 and not _is_integral(k):
        raise DomainError("negative base with non-integer exponent")
    if k == 0.0:
        return x._chain(1.0, 0.0, 0.0)
    if k == 1.0:
        return x
    if k == 2.0:
        return x._chain(v * v, 2.0 * v, 2.0)
    try:
        f0 = v**k
        f1 = k * v ** (k - 1.0)
        f2 = k * (k - 1.0) * v ** (k - 2.0)
    except ZeroDivisionError:
        raise DomainError("power not differentiable at zero base") from None
    return x._chain(f0, f1, f2)


def _pow_general(x: Jet2, y: Jet2) -> Jet2:
    if not y.grad.any() and not y.hess.any():
        return _pow_const(x, y.value)
    if x.value <= 0.0:
        raise DomainError("power with non-positive base and variable exponent")
    return (y * x.log()).exp()


# -- dispatching elementary functions (floats or jets) ------------------------


def _float_fn(name: str, fn):
    def wrapped(x):
        try:
            return getattr(x, name)() if isinstance(x, Jet2) else fn(x)
        except (ValueError, ZeroDivisionError, OverflowError):
            raise DomainError(f"{name} outside its domain at {x!r}") from None

    wrapped.__name__ = name
    return wrapped


def _tan(x: float) -> float:
    if math.cos(x) == 0.0:
        raise ValueError
    return math.tan(x)


def _log(x: float) -> float:
    if x <= 0.0:
        raise ValueError
    return math.log(x)


def _sqrt(x: float) -> float:
    if x < 0.0:
        raise ValueError
    return math.sqrt(x)


sin = _float_fn("sin", math.sin)
cos = _float_fn("cos", math.cos)
tan = _float_fn("tan", _tan)
exp = _float_fn("exp", math.exp)
log = _float_fn("log", _log)
sqrt = _float_fn("sqrt", _sqrt)


def power(x, y):
    """``x ** y`` with real-only semantics for floats and jets."""
    if isinstance(x, Jet2) or isinstance(y, Jet2):
        return x**y
    if x < 0.0 and not _is_integral(y):
        raise DomainError("negative base with non-integer exponent")
    try:
        return float(x) ** float(y)
    except (ZeroDivisionError, OverflowError) as exc:
        raise DomainError(f"power {x!r}^{y!r}: {exc}") from None


def divide(x, y):
    if not isinstance(y, Jet2) and y == 0:
        raise DomainError("division by zero")
    return x / y


FUNCTIONS = {"sin": sin, "cos": cos, "tan": tan, "exp": exp, "log": log, "sqrt": sqrt}


def as_jet(x, size: int) -> Jet2:
    """Promote a float result to a jet with zero derivatives."""
    if isinstance(x, Jet2):
        return x
    return Jet2.constant(x, size)


def seed(values: Sequence[float]) -> list:
    """Independent-variable jets for the given point."""
    m = len(values)
    return [Jet2.variable(v, i, m) for i, v in enumerate(values)]
