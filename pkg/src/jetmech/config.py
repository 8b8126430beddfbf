"""Scenario configuration files (INI syntax).

Lists are comma separated; lists of lists (several connections, several base
points) separate the outer level with ``;``.  See README for the full schema.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import exprparse
from .bundle import ConnectionModel
from .exprparse import Expr
from .lagrangian import LagrangianModel
from .states import BasePoint

KNOWN_CHECKS = ("energy_balance", "conservation", "invariance", "variational", "fit")

DEFAULTS = {
    "integration": {"h": "1e-3"},
    "tolerances": {
        "newton_tol": "1e-12",
        "regularity_tol": "1e-10",
        "trajectory": "1e-5",
        "algebraic": "1e-10",
        "invariance": "1e-12",
    },
    "checks": {"run": "", "invariance_connections": "", "invariance_stride": "100"},
}


class ConfigError(ValueError):
    pass


@dataclass
class FitConfig:
    first_integral: Expr
    source: str
    base_points: list[BasePoint]
    box: tuple[float, float] = (-2.0, 2.0)
    k: int | None = None


@dataclass
class ScenarioConfig:
    n: int
    lagrangian: LagrangianModel
    connection: ConnectionModel
    q0: list[float]
    v0: list[float] | None
    p0: list[float] | None
    t0: float
    t_end: float
    h: float
    newton_tol: float
    regularity_tol: float
    trajectory_threshold: float
    algebraic_threshold: float
    invariance_threshold: float
    checks: list[str]
    extra_connections: list[ConnectionModel] = field(default_factory=list)
    invariance_stride: int = 100
    fit: FitConfig | None = None
    lagrangian_csv: str | None = None
    hamiltonian_csv: str | None = None
    report: str | None = None


def _number(text: str) -> float:
    """A float literal or a constant expression such as ``2*pi``."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return float(exprparse.evaluate(exprparse.parse(text, ()), {}))
    except (exprparse.ExprSyntaxError, exprparse.UnknownVariable, exprparse.DomainError):
        raise ValueError(text) from None


def _floats(text: str, what: str) -> list[float]:
    try:
        return [_number(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _float(cp, section, key, fallback=None) -> float:
    raw = cp.get(section, key, fallback=fallback)
    if raw is None:
        raise ConfigError(f"missing [{section}] {key}")
    try:
        return _number(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None


def _expr_error(where: str, exc: Exception) -> ConfigError:
    return ConfigError(f"{where}: {exc}")


def _connection(texts: Sequence[str], n: int, where: str) -> ConnectionModel:
    if len(texts) != n:
        raise ConfigError(f"{where}: expected {n} components, got {len(texts)}")
    try:
        return ConnectionModel.from_strings(list(texts), n)
    except (exprparse.ExprSyntaxError, exprparse.UnknownVariable) as exc:
        raise _expr_error(where, exc) from None


def apply_overrides(cp: configparser.ConfigParser, overrides: Sequence[str]):
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, name = key.strip().partition(".")
        if not sep or not dot or not name:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, name, value.strip())


def load_config(path: str | Path, overrides: Sequence[str] = ()) -> ScenarioConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    cp.read_dict(DEFAULTS)
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    apply_overrides(cp, overrides)
    return parse_config(cp)


def parse_config(cp: configparser.ConfigParser) -> ScenarioConfig:
    try:
        n = int(cp.get("system", "n"))
        lag_src = cp.get("system", "lagrangian")
    except (configparser.Error, ValueError) as exc:
        raise ConfigError(f"[system]: {exc}") from None
    if n < 1:
        raise ConfigError("[system] n must be positive")
    try:
        lagrangian = LagrangianModel.from_string(lag_src, n)
    except (exprparse.ExprSyntaxError, exprparse.UnknownVariable) as exc:
        raise _expr_error("[system] lagrangian", exc) from None

    conn_src = cp.get("system", "connection", fallback=",".join(["0"] * n))
    connection = _connection([s.strip() for s in conn_src.split(",")], n, "[system] connection")

    q0 = _floats(cp.get("initial", "q", fallback=""), "[initial] q")
    v0 = cp.get("initial", "v", fallback=None)
    p0 = cp.get("initial", "p", fallback=None)
    if (v0 is None) == (p0 is None):
        raise ConfigError("[initial] give exactly one of v or p")
    v0 = None if v0 is None else _floats(v0, "[initial] v")
    p0 = None if p0 is None else _floats(p0, "[initial] p")
    for name, vec in (("q", q0), ("v", v0), ("p", p0)):
        if vec is not None and len(vec) != n:
            raise ConfigError(f"[initial] {name} must have {n} components")
    t0 = _float(cp, "initial", "t0", "0")
    t_end = _float(cp, "integration", "t_end")
    h = _float(cp, "integration", "h")
    if not h > 0:
        raise ConfigError("[integration] h must be positive")
    if not t_end > t0:
        raise ConfigError("[integration] t_end must exceed [initial] t0")

    checks = [c.strip() for c in cp.get("checks", "run").split(",") if c.strip()]
    unknown = [c for c in checks if c not in KNOWN_CHECKS]
    if unknown:
        raise ConfigError(f"[checks] unknown check(s): {', '.join(unknown)}")

    extra = []
    for i, group in enumerate(s for s in cp.get("checks", "invariance_connections").split(";") if s.strip()):
        extra.append(_connection([x.strip() for x in group.split(",")], n, f"[checks] invariance_connections #{i}"))
    try:
        stride = int(cp.get("checks", "invariance_stride"))
    except ValueError:
        raise ConfigError("[checks] invariance_stride must be an integer") from None
    if stride < 1:
        raise ConfigError("[checks] invariance_stride must be positive")

    fit = None
    if cp.has_section("fit") and cp.has_option("fit", "first_integral"):
        src = cp.get("fit", "first_integral")
        try:
            f_expr = exprparse.parse(src, exprparse.chart_variables(n))
        except (exprparse.ExprSyntaxError, exprparse.UnknownVariable) as exc:
            raise _expr_error("[fit] first_integral", exc) from None
        points = []
        for group in cp.get("fit", "base_points", fallback="").split(";"):
            if not group.strip():
                continue
            vals = _floats(group, "[fit] base_points")
            if len(vals) != n + 1:
                raise ConfigError(f"[fit] base point needs {n + 1} numbers (q..., t), got {len(vals)}")
            points.append(BasePoint(vals[:n], vals[n]))
        if not points:
            points = [BasePoint(q0, t0)]
        box = _floats(cp.get("fit", "velocity_box", fallback="-2,2"), "[fit] velocity_box")
        if len(box) != 2 or not box[0] < box[1]:
            raise ConfigError("[fit] velocity_box must be 'lo, hi' with lo < hi")
        k = cp.get("fit", "k", fallback=None)
        try:
            k = None if k is None else int(k)
        except ValueError:
            raise ConfigError(f"[fit] k must be an integer, got {k!r}") from None
        if k is not None and k < n:
            raise ConfigError(f"[fit] k must be at least n = {n}")
        fit = FitConfig(f_expr, src, points, (box[0], box[1]), k)
    elif "fit" in checks:
        raise ConfigError("check 'fit' requested but [fit] first_integral is missing")
    if not checks:
        # default: everything the config supports
        checks = [c for c in KNOWN_CHECKS if c != "fit" or fit is not None]

    return ScenarioConfig(
        n=n,
        lagrangian=lagrangian,
        connection=connection,
        q0=q0,
        v0=v0,
        p0=p0,
        t0=t0,
        t_end=t_end,
        h=h,
        newton_tol=_float(cp, "tolerances", "newton_tol"),
        regularity_tol=_float(cp, "tolerances", "regularity_tol"),
        trajectory_threshold=_float(cp, "tolerances", "trajectory"),
        algebraic_threshold=_float(cp, "tolerances", "algebraic"),
        invariance_threshold=_float(cp, "tolerances", "invariance"),
        checks=checks,
        extra_connections=extra,
        invariance_stride=stride,
        fit=fit,
        lagrangian_csv=cp.get("output", "lagrangian_csv", fallback=None),
        hamiltonian_csv=cp.get("output", "hamiltonian_csv", fallback=None),
        report=cp.get("output", "report", fallback=None),
    )
