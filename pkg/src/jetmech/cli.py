"""Command line scenario runner: ``jetmech {simulate,verify,fit} --config FILE``.

Exit codes: 0 all checks pass, 1 some check failed, 2 configuration error,
3 runtime error (singular Hessian, Newton failure, blow-up, domain error).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import verify
from .bundle import ConnectionModel
from .config import ConfigError, ScenarioConfig, load_config
from .dynamics import Trajectory, integrate_hamilton, integrate_lagrangian
from .errors import DomainError, LinearSolveFailure, NonConvergence, NonFinite, SingularHessian
from .hamiltonian import invert_momenta, legendre, legendre_inverse
from .states import MomentumState, VelocityState

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3
RUNTIME_ERRORS = (DomainError, SingularHessian, LinearSolveFailure, NonConvergence, NonFinite)


def fmt(x: float) -> str:
    return f"{x:.17g}"


def initial_states(cfg: ScenarioConfig) -> tuple[VelocityState, MomentumState]:
    if cfg.v0 is not None:
        s0 = VelocityState(cfg.q0, cfg.v0, cfg.t0)
        return s0, legendre(cfg.lagrangian, s0)
    m0 = MomentumState(cfg.q0, cfg.p0, cfg.t0)
    return legendre_inverse(cfg.lagrangian, m0, tol=cfg.newton_tol), m0


def lagrangian_trajectory(cfg: ScenarioConfig) -> Trajectory:
    s0, _ = initial_states(cfg)
    return integrate_lagrangian(cfg.lagrangian, s0, cfg.t_end, cfg.h, cfg.regularity_tol)


def write_lagrangian_csv(path, cfg: ScenarioConfig, traj: Trajectory):
    n = cfg.n
    Lm, c, std = cfg.lagrangian, cfg.connection, ConnectionModel.standard(cfg.n)
    E_std = verify.energy_series(Lm, std, traj)
    E_conn = verify.energy_series(Lm, c, traj)
    header = ["t"] + [f"q{i}" for i in range(n)] + [f"v{i}" for i in range(n)] + ["E_std", "E_conn"]
    header += [f"p{i}" for i in range(n)]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for k in range(len(traj)):
            p = Lm.derivatives(traj.q[k], traj.v[k], traj.times[k]).dv
            row = [traj.times[k], *traj.q[k], *traj.v[k], E_std[k], E_conn[k], *p]
            fh.write(",".join(fmt(x) for x in row) + "\n")


def write_hamiltonian_csv(path, cfg: ScenarioConfig, traj: Trajectory):
    n = cfg.n
    Lm, c = cfg.lagrangian, cfg.connection
    header = ["t"] + [f"q{i}" for i in range(n)] + [f"p{i}" for i in range(n)] + ["h_std", "h_conn"]
    guess = None
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for k in range(len(traj)):
            q, p, t = traj.q[k], traj.p[k], traj.times[k]
            v, d = invert_momenta(Lm, q, p, t, guess, cfg.newton_tol)
            guess = v
            h = float(d.dv @ v) - d.L
            h_conn = h - float(c.values(q, t) @ p)
            fh.write(",".join(fmt(x) for x in [t, *q, *p, h, h_conn]) + "\n")


def run_simulate(cfg: ScenarioConfig, out=None) -> int:
    out = out or sys.stdout
    s0, m0 = initial_states(cfg)
    lag = integrate_lagrangian(cfg.lagrangian, s0, cfg.t_end, cfg.h, cfg.regularity_tol)
    ham = integrate_hamilton(cfg.lagrangian, m0, cfg.t_end, cfg.h, cfg.newton_tol, guess=s0.v)
    lag_path = cfg.lagrangian_csv or "lagrangian.csv"
    ham_path = cfg.hamiltonian_csv or "hamiltonian.csv"
    write_lagrangian_csv(lag_path, cfg, lag)
    write_hamiltonian_csv(ham_path, cfg, ham)
    print(f"wrote {lag_path} ({len(lag)} rows)", file=out)
    print(f"wrote {ham_path} ({len(ham)} rows)", file=out)
    return EXIT_OK


def _check_line(name: str, value: float, threshold: float, info: bool = False) -> tuple[str, bool]:
    ok = value <= threshold
    status = "INFO" if info else ("PASS" if ok else "FAIL")
    return f"CHECK {name} {fmt(value)} {fmt(threshold)} {status}", info or ok


def fit_lines(cfg: ScenarioConfig, strict: bool) -> tuple[list[str], bool]:
    fc = cfg.fit
    results = verify.fit_connection_to_first_integral(cfg.lagrangian, fc.first_integral, fc.base_points, fc.k, fc.box)
    lines = []
    for r in results:
        pt = ",".join(fmt(x) for x in (*r.point.q, r.point.t))
        gam = ",".join(fmt(x) for x in r.gamma)
        lines.append(f"FIT point={pt} gamma={gam} residual={fmt(r.residual)} rank={r.rank}")
    worst = max(r.residual for r in results)
    line, ok = _check_line("fit", worst, cfg.algebraic_threshold, info=not strict)
    lines.append(line)
    return lines, ok


def run_checks(cfg: ScenarioConfig, strict_fit: bool = False) -> tuple[list[str], bool]:
    Lm, c = cfg.lagrangian, cfg.connection
    lines: list[str] = []
    all_ok = True
    need_traj = any(ch in cfg.checks for ch in ("energy_balance", "conservation", "invariance", "variational"))
    traj = lagrangian_trajectory(cfg) if need_traj else None

    for check in cfg.checks:
        if check == "energy_balance":
            value, _ = verify.energy_balance_residual(Lm, c, traj)
            line, ok = _check_line(check, value, cfg.trajectory_threshold)
        elif check == "conservation":
            value = verify.balance_corrected_drift(Lm, c, traj)
            line, ok = _check_line(check, value, cfg.trajectory_threshold)
        elif check == "invariance":
            conns = [ConnectionModel.standard(cfg.n), c, *cfg.extra_connections]
            worst = 0.0
            for k in range(0, len(traj), cfg.invariance_stride):
                s = traj.state(k)
                res = verify.invariance_check(Lm, conns, legendre(Lm, s), guess=s.v, tol=cfg.newton_tol)
                worst = max(worst, res.theta_spread, res.field_spread)
            line, ok = _check_line(check, worst, cfg.invariance_threshold)
        elif check == "variational":
            value = verify.variational_identity_residual(Lm, c, traj)
            line, ok = _check_line(check, value, cfg.algebraic_threshold)
        else:
            fl, ok = fit_lines(cfg, strict_fit)
            lines.extend(fl[:-1])
            line = fl[-1]
        lines.append(line)
        all_ok = all_ok and ok
    return lines, all_ok


def _emit_report(cfg: ScenarioConfig, lines: list[str], out):
    out = out or sys.stdout
    text = "\n".join(lines) + "\n"
    out.write(text)
    if cfg.report:
        Path(cfg.report).write_text(text)


def run_verify(cfg: ScenarioConfig, strict_fit: bool = False, out=None) -> int:
    lines, ok = run_checks(cfg, strict_fit)
    _emit_report(cfg, lines, out)
    return EXIT_OK if ok else EXIT_FAIL


def run_fit(cfg: ScenarioConfig, strict_fit: bool = False, out=None) -> int:
    if cfg.fit is None:
        raise ConfigError("the fit subcommand needs [fit] first_integral")
    lines, ok = fit_lines(cfg, strict_fit)
    _emit_report(cfg, lines, out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jetmech", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("simulate", "integrate and write Lagrangian/Hamiltonian trajectory CSVs"),
        ("verify", "run the configured checks and print a report"),
        ("fit", "fit a connection whose energy is the given first integral"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="scenario file (INI)")
        p.add_argument("--override", action="append", default=[], metavar="SECTION.KEY=VALUE",
                       help="override a config entry; repeatable")
        if name != "simulate":
            p.add_argument("--strict-fit", action="store_true", help="grade the fit check PASS/FAIL instead of INFO")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.override)
        if args.command == "simulate":
            return run_simulate(cfg)
        if args.command == "verify":
            return run_verify(cfg, args.strict_fit)
        return run_fit(cfg, args.strict_fit)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RUNTIME_ERRORS as exc:
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
