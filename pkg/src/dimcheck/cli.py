"""Command-line front end: ``dimcheck check|steady|simulate|phase|welfare``.

Exit codes: 0 ok, 1 violations found, 2 parse or configuration error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import growth
from .dimcore import as_rational
from .eqdsl import ModelError, parse_model
from .homcheck import UndeclaredIdentifier, UnsolvableInference, check_model, color_enabled

EXIT_OK, EXIT_VIOLATIONS, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Integration settings shared by simulate and welfare."""

    h: float = 0.01
    t_max: float = 200.0


def _number(text: str) -> Fraction:
    try:
        return as_rational(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a decimal or rational number: {text!r}") from exc


def _point(text: str) -> Fraction | str:
    return "steady" if text.strip() == "steady" else _number(text)


def _add_params(ap: argparse.ArgumentParser):
    g = ap.add_argument_group("model parameters")
    g.add_argument("--alpha", type=_number, default=Fraction(1, 3))
    g.add_argument("--a0", type=_number, default=Fraction(1))
    g.add_argument("--rho", type=_number, default=Fraction(1, 20))
    g.add_argument("--n", type=_number, default=Fraction(1, 100))
    g.add_argument("--delta", type=_number, default=Fraction(1, 20))
    g.add_argument("--theta", type=_number, default=Fraction(2))


def _params(args) -> growth.GrowthParams:
    try:
        return growth.GrowthParams(
            alpha=args.alpha,
            a0=float(args.a0),
            rho=float(args.rho),
            n=float(args.n),
            delta=float(args.delta),
            theta=float(args.theta),
        )
    except growth.InvalidParams as exc:
        raise ConfigError(str(exc)) from exc


def _run_config(args) -> RunConfig:
    h, t_max = float(args.h), float(args.t_max)
    if h <= 0 or t_max <= 0 or t_max < h:
        raise ConfigError("--h and --t-max must be positive with t-max >= h")
    return RunConfig(h, t_max)


def _fmt(x: float) -> str:
    return growth.fmt_float(x)


# --------------------------------------------------------------------------


def cmd_check(args, out, err) -> int:
    path = Path(args.path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror or exc}", file=err)
        return EXIT_CONFIG
    try:
        spec = parse_model(text, path.name)
        report = check_model(spec)
    except ModelError as exc:
        print(f"{path.name}:{exc.line}:{exc.col}: error: {exc.message}", file=err)
        return EXIT_CONFIG
    except (UnsolvableInference, UndeclaredIdentifier) as exc:
        print(f"{path.name}: error: {exc}", file=err)
        return EXIT_CONFIG
    if args.format == "json":
        out.write(report.to_json_text() + "\n")
    else:
        out.write(report.to_text(color=color_enabled(out)))
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def cmd_steady(args, out, err) -> int:
    p = _params(args)
    try:
        ss = growth.steady_state(p)
    except growth.NoSteadyState as exc:
        print(f"error: {exc}", file=err)
        return EXIT_NUMERIC
    J = growth.jacobian(ss.state, p)
    trace = float(J[0, 0] + J[1, 1])
    det = float(J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0])
    eig = growth.eigen2(J)
    if isinstance(eig, growth.ComplexEigenvalues):
        eigvals = {"real": eig.real, "imag": eig.imag}
    else:
        eigvals = [float(v) for v in eig.values]
    if args.format == "json":
        doc = {"k": ss.k, "c": ss.c, "r": ss.r, "trace": trace, "det": det, "eigenvalues": eigvals}
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    out.write(f"k*      {_fmt(ss.k)}\n")
    out.write(f"c*      {_fmt(ss.c)}\n")
    out.write(f"r*      {_fmt(ss.r)}\n")
    out.write(f"trace   {_fmt(trace)}\n")
    out.write(f"det     {_fmt(det)}\n")
    if isinstance(eig, growth.ComplexEigenvalues):
        out.write(f"eigen   {_fmt(eig.real)} +/- {_fmt(eig.imag)}i\n")
    else:
        out.write(f"eigen   {_fmt(eig.values[0])} {_fmt(eig.values[1])}\n")
    return EXIT_OK


def _resolve(value, steady: float, flag: str) -> float:
    if value is None:
        raise ConfigError(f"{flag} is required")
    return steady if value == "steady" else float(value)


def _emit_csv(traj: growth.Trajectory, dest: str | None, out):
    if dest:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            traj.write_csv(fh)
    else:
        traj.write_csv(out)


def cmd_simulate(args, out, err) -> int:
    p = _params(args)
    cfg = _run_config(args)
    info = err if not args.out else out
    try:
        ss = growth.steady_state(p)
        k0 = _resolve(args.k0, ss.k, "--k0")
        if args.saddle:
            sp = growth.saddle_path(p, k0, h=cfg.h, t_shoot=cfg.t_max)
            traj = sp.trajectory
            print(f"c0 {_fmt(sp.c0)}", file=info)
            print(f"terminal_distance {_fmt(sp.terminal_distance)}", file=info)
        else:
            c0 = _resolve(args.c0, ss.c, "--c0")
            traj = growth.integrate(growth.State(k0, c0), p, cfg.h, cfg.t_max)
    except (growth.NoSteadyState, growth.ShootingFailed, growth.StepTooLarge) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_NUMERIC
    except growth.DomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONFIG
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit_csv(traj, args.out, out)
    print(f"status {traj.status} t_end {_fmt(traj.t[-1])} points {len(traj.t)}", file=info)
    if not traj.completed:
        print(f"error: domain exit ({traj.status}) after t = {_fmt(traj.t[-1])}", file=err)
        return EXIT_NUMERIC
    if len(traj.t) >= 3:
        r1, r2 = growth.euler_residual(traj, p)
        print(f"euler_residual R1 {_fmt(r1)} R2 {_fmt(r2)}", file=info)
    return EXIT_OK


def cmd_phase(args, out, err) -> int:
    p = _params(args)
    try:
        ss = growth.steady_state(p)
    except growth.NoSteadyState as exc:
        print(f"error: {exc}", file=err)
        return EXIT_NUMERIC
    k_lo = float(args.k_min) if args.k_min is not None else ss.k / 10
    k_hi = float(args.k_max) if args.k_max is not None else 2 * ss.k
    c_lo = float(args.c_min) if args.c_min is not None else 0.0
    c_hi = float(args.c_max) if args.c_max is not None else 2 * ss.c
    if args.grid < 2:
        raise ConfigError("--grid must be at least 2")
    try:
        grid = growth.phase_grid(p, (k_lo, k_hi), (c_lo, c_hi), args.grid, args.grid)
    except growth.DomainError as exc:
        raise ConfigError(str(exc)) from exc
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create {outdir}: {exc}") from exc
    with open(outdir / "field.csv", "w", encoding="utf-8", newline="") as fh:
        growth.write_csv(fh, ["k", "c", "kdot", "cdot"], grid.field_rows())
    with open(outdir / "nullcline_kdot.csv", "w", encoding="utf-8", newline="") as fh:
        growth.write_csv(fh, ["k", "c", "which"], ((k, c, "kdot") for k, c in grid.k_nullcline))
    with open(outdir / "nullcline_cdot.csv", "w", encoding="utf-8", newline="") as fh:
        growth.write_csv(fh, ["k", "c", "which"], ((k, c, "cdot") for k, c in grid.c_nullcline))
    ki, ci = grid.intersection
    out.write(f"field {len(grid.k) * len(grid.c)} rows -> {outdir / 'field.csv'}\n")
    out.write(f"nullclines -> {outdir / 'nullcline_kdot.csv'}, {outdir / 'nullcline_cdot.csv'}\n")
    out.write(f"intersection {_fmt(ki)} {_fmt(ci)}\n")
    return EXIT_OK


def cmd_welfare(args, out, err) -> int:
    p = _params(args)
    cfg = _run_config(args)
    modes = sum(bool(x) for x in (args.traj, args.saddle, args.frozen))
    if modes != 1:
        raise ConfigError("choose exactly one of --traj, --saddle, --frozen")
    try:
        if args.traj:
            try:
                text = Path(args.traj).read_text(encoding="utf-8")
                traj = growth.read_trajectory_csv(text, p)
            except (OSError, ValueError) as exc:
                print(f"error: malformed trajectory {args.traj}: {exc}", file=err)
                return EXIT_CONFIG
        else:
            ss = growth.steady_state(p)
            k0 = _resolve(args.k0, ss.k, "--k0")
            if args.saddle:
                traj = growth.saddle_path(p, k0, h=cfg.h, t_shoot=cfg.t_max).trajectory
            else:
                c0 = _resolve(args.c0, ss.c, "--c0")
                traj = growth.constant_consumption_path(k0, c0, p, cfg.h, cfg.t_max)
                if not traj.completed:
                    print(f"error: capital exhausted at t = {_fmt(traj.t[-1])}", file=err)
                    return EXIT_NUMERIC
        w = growth.discounted_utility(traj, p)
    except (growth.DomainError, growth.NoSteadyState, growth.ShootingFailed, growth.StepTooLarge) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_NUMERIC
    if args.format == "json":
        out.write(json.dumps({"u_p": w.total, "integral": w.integral, "tail": w.tail}, indent=2) + "\n")
    else:
        out.write(f"u_p       {_fmt(w.total)}\n")
        out.write(f"integral  {_fmt(w.integral)}\n")
        out.write(f"tail      {_fmt(w.tail)}\n")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dimcheck", description="Dimensional homogeneity checker and growth-model numerics.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check a model file for dimensional homogeneity")
    c.add_argument("path")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("steady", help="steady state and its linearization")
    _add_params(s)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_steady)

    m = sub.add_parser("simulate", help="integrate a trajectory or shoot the saddle path")
    _add_params(m)
    m.add_argument("--k0", type=_point)
    m.add_argument("--c0", type=_point)
    m.add_argument("--saddle", action="store_true")
    m.add_argument("--h", type=_number, default=Fraction(1, 100))
    m.add_argument("--t-max", type=_number, default=Fraction(200))
    m.add_argument("--out", help="CSV path (default: stdout)")
    m.set_defaults(func=cmd_simulate)

    ph = sub.add_parser("phase", help="vector field and nullclines on a grid")
    _add_params(ph)
    ph.add_argument("--k-min", type=_number)
    ph.add_argument("--k-max", type=_number)
    ph.add_argument("--c-min", type=_number)
    ph.add_argument("--c-max", type=_number)
    ph.add_argument("--grid", type=int, default=40)
    ph.add_argument("--out", default="phase", help="output directory")
    ph.set_defaults(func=cmd_phase)

    w = sub.add_parser("welfare", help="discounted utility of a consumption path")
    _add_params(w)
    w.add_argument("--traj", help="trajectory CSV with t,k,c columns")
    w.add_argument("--saddle", action="store_true")
    w.add_argument("--frozen", action="store_true", help="hold consumption at --c0")
    w.add_argument("--k0", type=_point)
    w.add_argument("--c0", type=_point)
    w.add_argument("--h", type=_number, default=Fraction(1, 100))
    w.add_argument("--t-max", type=_number, default=Fraction(200))
    w.add_argument("--format", choices=("text", "json"), default="text")
    w.set_defaults(func=cmd_welfare)
    return ap


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args, out, err)
    except ConfigError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
