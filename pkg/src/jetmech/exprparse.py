"""Infix expression language for Lagrangians and connection coefficients.

Grammar (highest binding first)::

    atom    := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'
    power   := atom ['^' unary]          # right-associative
    unary   := ('-' | '+') unary | power
    term    := unary (('*' | '/') unary)*
    expr    := term (('+' | '-') term)*

``FUNC`` is one of ``sin cos tan exp log sqrt``; ``pi`` is a named constant.
So ``-x^2`` is ``-(x^2)`` and ``2^-1`` is ``2^(-1)``.

Variable names follow the chart convention ``t``, ``q0..q{n-1}``,
``v0..v{n-1}`` (``p0..`` in momentum contexts); see :func:`chart_variables`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from . import jet
from .jet import DomainError, Jet2

__all__ = [
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Expr",
    "ExprSyntaxError",
    "UnknownVariable",
    "DomainError",
    "parse",
    "to_source",
    "evaluate",
    "eval_jet2",
    "eval_tree",
    "compile_expr",
    "free_variables",
    "chart_variables",
]

UNARY_FUNCS = ("sin", "cos", "tan", "exp", "log", "sqrt")
BINARY_OPS = ("+", "-", "*", "/", "^")
NAMED_CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a function name
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Unary, Binary]


class ExprSyntaxError(ValueError):
    """Malformed expression text."""

    def __init__(self, message: str, position: int, expected: Sequence[str] = (), source: str = ""):
        self.position = position
        self.expected = tuple(expected)
        self.source = source
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        if source:
            detail += f"\n  {source}\n  {' ' * position}^"
        super().__init__(detail)


class UnknownVariable(ValueError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown variable {name!r}{where}")


def chart_variables(n: int, momentum: bool = False) -> tuple[str, ...]:
    """Declared names for an ``n``-dimensional chart: t, q*, and v* (or p*)."""
    fiber = "p" if momentum else "v"
    return ("t",) + tuple(f"q{i}" for i in range(n)) + tuple(f"{fiber}{i}" for i in range(n))


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


@dataclass
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


_TOKEN_KINDS = ("number", "name", "operator", "'('", "')'")


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos, _TOKEN_KINDS, source)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(_Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


# -- recursive-descent parser --------------------------------------------------

_ATOM_START = ("number", "variable", "function", "'('")


class _Parser:
    def __init__(self, source: str, declared: frozenset[str]):
        self.source = source
        self.declared = declared
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, message: str, expected: Sequence[str]):
        raise ExprSyntaxError(message, self.tok.pos, expected, self.source)

    def expect(self, text: str):
        if self.tok.text != text or self.tok.kind != "op":
            found = self.tok.text or "end of input"
            self.fail(f"found {found!r}", [repr(text)])
        self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}", ["operator", "end of input"])
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            left = Binary(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Unary("neg", self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Const(float(t.text))
        if t.kind == "name":
            self.advance()
            if t.text in UNARY_FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(t.text, arg)
            if t.text in NAMED_CONSTANTS:
                return Const(NAMED_CONSTANTS[t.text])
            if t.text not in self.declared:
                raise UnknownVariable(t.text, t.pos)
            return Var(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        found = t.text or "end of input"
        self.fail(f"found {found!r}", _ATOM_START)


def parse(source: str, declared_vars: Iterable[str]) -> Expr:
    """Parse ``source`` into an expression tree over ``declared_vars``.

    Raises :class:`ExprSyntaxError` for malformed text and
    :class:`UnknownVariable` for names outside ``declared_vars``.
    """
    return _Parser(source, frozenset(declared_vars)).parse()


def to_source(e: Expr) -> str:
    """Fully parenthesized text that parses back to an identical tree."""
    if isinstance(e, Const):
        if e.value < 0 or math.copysign(1.0, e.value) < 0:
            return f"(-{-e.value!r})"
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{to_source(e.arg)})"
        return f"{e.op}({to_source(e.arg)})"
    return f"({to_source(e.left)} {e.op} {to_source(e.right)})"


def free_variables(e: Expr) -> frozenset[str]:
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Unary):
        return free_variables(e.arg)
    return free_variables(e.left) | free_variables(e.right)


# -- evaluation ---------------------------------------------------------------


def eval_tree(e: Expr, env: Mapping[str, object]):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    try:
        if isinstance(e, Unary):
            x = eval_tree(e.arg, env)
            if e.op == "neg":
                return -x
            return jet.FUNCTIONS[e.op](x)
        a = eval_tree(e.left, env)
        b = eval_tree(e.right, env)
        op = e.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return jet.divide(a, b)
        return jet.power(a, b)
    except DomainError as exc:
        if exc.node is None:
            exc.node = e
            exc.args = (f"{exc.args[0]} in {to_source(e)}",)
        raise


def _codegen(e: Expr) -> str:
    if isinstance(e, Const):
        return f"({e.value!r})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{_codegen(e.arg)})"
        return f"_{e.op}({_codegen(e.arg)})"
    a, b = _codegen(e.left), _codegen(e.right)
    if e.op == "/":
        return f"_div({a}, {b})"
    if e.op == "^":
        return f"_pow({a}, {b})"
    return f"({a} {e.op} {b})"


_CODEGEN_NS = {f"_{name}": fn for name, fn in jet.FUNCTIONS.items()}
_CODEGEN_NS.update(_div=jet.divide, _pow=jet.power)


def compile_expr(e: Expr, argnames: Sequence[str]):
    """Compile ``e`` to a Python function of positional ``argnames``.

    Same semantics as :func:`eval_tree`, without per-node dispatch.  Domain
    errors are re-raised with the offending node attached.
    """
    missing = free_variables(e) - set(argnames)
    if missing:
        raise UnknownVariable(sorted(missing)[0])
    for name in argnames:
        if not name.isidentifier() or name.startswith("_"):
            raise ValueError(f"bad argument name {name!r}")
    src = f"lambda {', '.join(argnames)}: {_codegen(e)}"
    fast = eval(compile(src, "<expr>", "eval"), dict(_CODEGEN_NS))
    names = tuple(argnames)

    def fn(*args):
        try:
            return fast(*args)
        except DomainError:
            return eval_tree(e, dict(zip(names, args)))

    fn.expr = e
    fn.argnames = names
    return fn


def evaluate(e: Expr, assignment: Mapping[str, object]):
    """Evaluate over any scalar type supporting arithmetic (floats, :class:`Jet2`)."""
    missing = free_variables(e) - assignment.keys()
    if missing:
        raise UnknownVariable(sorted(missing)[0])
    return eval_tree(e, assignment)


def eval_jet2(e: Expr, assignment: Mapping[str, float], wrt: Sequence[str]) -> Jet2:
    """Value, gradient and Hessian of ``e`` w.r.t. the ordered names ``wrt``."""
    env: dict[str, object] = {k: float(v) for k, v in assignment.items()}
    m = len(wrt)
    for i, name in enumerate(wrt):
        env[name] = Jet2.variable(env[name], i, m)
    return jet.as_jet(evaluate(e, env), m)
