"""Command-line front end.

    nilgeo distance --from 0,0,0 --to 0,0,0.5
    nilgeo triangle --a1 0,0,0 --a2 0.5,-1,1 --a3 1/3,2,1 --format json
    nilgeo table --preset table1
    nilgeo table --family hyperbolic --fixed x3=0.5 --vary 1:10:4
    nilgeo geodesic --alpha 0.7 --theta 0.4 --length 2 --samples 50 --out arc.csv
    nilgeo find-pi --hyperbolic 0.5,3 --fibre 1,0.5 --tol 1e-6
    nilgeo classify

Exit codes: 0 success, 1 usage or precondition error, 2 solver failure.
Coordinates may be decimals or fractions (``1/3``); negative leading values
need the ``--a2=-1,0,0`` form.
"""

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .bvp import SolverConfig, SolverFailure, local_target, shoot
from .core import NilPoint
from .flow import GeodesicArc, GeodesicDirection, polyline
from .triangles import (PRESETS, TableRow, Triangle, classify_examples, family_scan,
                        find_pi_sum, triangle_report, varying_name)

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2

_LIMIT_ROWS = {
    # (family, fixed) -> [(param, |theta|, d, omega1, omega3, sum)] in the two limits
    ("fibre", "z"): lambda v: [
        ("->0", "->pi/2", f"{v:.6f}", "->0", "->pi/2", "->pi"),
        ("->inf", "->0", "->inf", "->pi/2", "->0", "->pi")],
    ("hyperbolic", "x3"): lambda v: [
        ("->0", "->0", f"{v:.6f}", "->pi/2", "->0", "->pi"),
        ("->inf", "->0", "->inf", "->0", "->pi/2", "->pi")],
    ("hyperbolic", "y"): lambda v: [
        ("->0", "->0", f"{v:.6f}", "->0", "->pi/2", "->pi"),
        ("->inf", "->0", "->inf", "->pi/2", "->0", "->pi")],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _number(text: str) -> float:
    try:
        v = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return v


def _triple(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return NilPoint(*(_number(p) for p in parts))


def _pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return tuple(_number(p) for p in parts)


def _binding(text: str):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return name.strip(), _number(value)


def _grid(text: str):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}")
        a, b = _number(parts[0]), _number(parts[1])
        try:
            n = int(parts[2])
        except ValueError:
            raise argparse.ArgumentTypeError(f"count must be an integer: {parts[2]!r}") from None
        if n < 1:
            raise argparse.ArgumentTypeError("count must be >= 1")
        return [float(v) for v in np.linspace(a, b, n)]
    return [_number(p) for p in text.split(",")]


def _f6(v) -> str:
    return "FAIL" if v is None or (isinstance(v, float) and math.isnan(v)) else f"{v:.6f}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def _plain(header, rows) -> str:
    cols = [header] + [list(r) for r in rows]
    widths = [max(len(str(r[k])) for r in cols) for k in range(len(header))]
    lines = ["  ".join(str(v).rjust(wd) for v, wd in zip(r, widths)) for r in cols]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands; each returns (text, exit_code)
# ---------------------------------------------------------------------------

def _cmd_distance(args, cfg):
    target = local_target(args.p, args.q)
    if target == NilPoint.origin():
        sols = []
        d = 0.0
    else:
        sols = shoot(target, cfg, backend=args.backend)
        d = sols[0].s
    if args.format == "json":
        return _json({
            "from": list(args.p), "to": list(args.q), "distance": d,
            "solutions": [{"alpha": s.direction.alpha, "theta": s.direction.theta,
                           "length": s.s, "residual": s.residual} for s in sols],
        }), EXIT_OK
    if args.format == "csv":
        return _csv(["distance"], [[f"{d:.6f}"]]), EXIT_OK
    return f"{d:.6f}\n", EXIT_OK


def _triangle_rows(rep):
    header = ["omega1", "omega2", "omega3", "angle_sum", "d12", "d13", "d23"]
    row = [*rep.angles, rep.angle_sum, rep.length(0, 1), rep.length(0, 2), rep.length(1, 2)]
    return header, [[_f6(v) for v in row]]


def _cmd_triangle(args, cfg):
    rep = triangle_report(Triangle(args.a1, args.a2, args.a3), cfg, backend=args.backend)
    if args.format == "json":
        return _json(rep.to_dict()), EXIT_OK
    header, rows = _triangle_rows(rep)
    return (_csv if args.format == "csv" else _plain)(header, rows), EXIT_OK


def _cmd_table(args, cfg):
    if args.preset:
        if args.family or args.fixed or args.vary:
            raise UsageError("--preset cannot be combined with --family/--fixed/--vary")
        family, fixed, grid = PRESETS[args.preset]
    else:
        if not (args.family and args.fixed and args.vary):
            raise UsageError("custom scans need --family, --fixed and --vary (or use --preset)")
        family, fixed, grid = args.family, dict([args.fixed]), args.vary
    (fixed_name, fixed_value), = fixed.items()
    try:
        param = varying_name(family, fixed_name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if any(not (math.isfinite(v) and v > 0) for v in [fixed_value, *grid]):
        raise UsageError("scan parameters must be positive and finite")

    rows = family_scan(family, fixed, grid, cfg, backend=args.backend)
    code = EXIT_OK if all(r.ok for r in rows) else EXIT_SOLVER
    header = [param, *TableRow.COLUMNS]
    limits = _LIMIT_ROWS.get((family, fixed_name), lambda v: [])(fixed_value) if args.with_limits else []

    if args.format == "json":
        doc = {"family": family, "fixed": {fixed_name: fixed_value}, "varying": param,
               "columns": header, "rows": []}
        if args.preset:
            doc["preset"] = args.preset
        for r in rows:
            doc["rows"].append({param: r.param, "abs_theta": r.abs_theta, "d13": r.d13,
                                "omega1": r.omega1, "omega3": r.omega3, "angle_sum": r.angle_sum,
                                "omega2": r.omega2, "abs_theta_13": r.abs_theta_13,
                                "error": r.error})
        if limits:
            doc["limits"] = [dict(zip(header, lim)) for lim in limits]
        return _json(doc), code

    body = [[f"{r.param:.6f}", *(_f6(getattr(r, c)) for c in TableRow.COLUMNS)] for r in rows]
    if limits:
        body = [list(limits[0])] + body + [list(limits[1])]
    return (_csv if args.format == "csv" else _plain)(header, body), code


def _cmd_geodesic(args, cfg):
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if not args.length >= 0:
        raise UsageError("--length must be >= 0")
    if abs(args.theta) > math.pi / 2 + 1e-12:
        raise UsageError("--theta must lie in [-pi/2, pi/2]")
    arc = GeodesicArc(args.start, GeodesicDirection(args.alpha, args.theta), args.length)
    rows = [[f"{v:.17g}" for v in row] for row in polyline(arc, args.samples)]
    return _csv(["t", "x", "y", "z"], rows), EXIT_OK


def _cmd_find_pi(args, cfg):
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    try:
        t, rep = find_pi_sum(args.hyperbolic, args.fibre, tol=args.tol, cfg=cfg,
                             backend=args.backend)
    except ValueError as exc:
        raise UsageError(f"precondition failed: {exc}") from None
    if args.format == "json":
        doc = {"t": t, "hyperbolic": list(args.hyperbolic), "fibre": list(args.fibre),
               "tol": args.tol, **rep.to_dict()}
        return _json(doc), EXIT_OK
    lines = [f"t_E        {t:.12f}"]
    for k, p in enumerate(rep.vertices, 1):
        lines.append(f"A{k}         {p}")
    for k, w in enumerate(rep.angles, 1):
        lines.append(f"omega{k}     {w:.12f}")
    lines.append(f"angle_sum  {rep.angle_sum:.12f}")
    lines.append(f"|sum - pi| {abs(rep.angle_sum - math.pi):.3e}")
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_classify(args, cfg):
    examples = classify_examples(cfg, backend=args.backend)
    if args.format == "json":
        return _json([{"kind": e.kind, "source": e.source, **e.report.to_dict()}
                      for e in examples]), EXIT_OK
    header = ["kind", "angle_sum", "sum_minus_pi", "source"]
    rows = [[e.kind, f"{e.report.angle_sum:.6f}", f"{e.report.angle_sum - math.pi:+.3e}", e.source]
            for e in examples]
    return (_csv if args.format == "csv" else _plain)(header, rows), EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    d = SolverConfig()
    g = common.add_argument_group("solver")
    g.add_argument("--solver-tol", type=_number, default=d.tol)
    g.add_argument("--solver-max-iter", type=int, default=d.max_iter)
    g.add_argument("--solver-alpha-grid", type=int, default=d.n_alpha)
    g.add_argument("--solver-theta-grid", type=int, default=d.n_theta)
    g.add_argument("--solver-s-window", type=_number, default=d.s_window)
    g.add_argument("--solver-ws-bound", type=_number, default=d.ws_bound)
    g.add_argument("--solver-fd-step", type=_number, default=d.fd_step)
    g.add_argument("--backend", choices=("numba", "numpy"), default=None,
                   help="kernel backend (default: numba when available)")
    common.add_argument("--out", metavar="FILE", help="write to FILE instead of stdout")

    def fmt(p, default):
        p.add_argument("--format", choices=("csv", "json", "plain"), default=default)

    parser = _Parser(prog="nilgeo", description="Geodesics, distances and geodesic "
                     "triangles in Nil geometry.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("distance", parents=[common], help="geodesic distance of two points")
    p.add_argument("--from", dest="p", type=_triple, required=True)
    p.add_argument("--to", dest="q", type=_triple, required=True)
    fmt(p, "plain")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("triangle", parents=[common], help="interior angles of a triangle")
    for k in (1, 2, 3):
        p.add_argument(f"--a{k}", type=_triple, required=True)
    fmt(p, "plain")
    p.set_defaults(func=_cmd_triangle)

    p = sub.add_parser("table", parents=[common], help="reproduce or extend the angle-sum tables")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--family", choices=("fibre", "hyperbolic"))
    p.add_argument("--fixed", type=_binding, help="NAME=VALUE, e.g. z=0.5")
    p.add_argument("--vary", type=_grid, help="start:stop:count or a comma list")
    p.add_argument("--with-limits", action="store_true",
                   help="add symbolic rows for the parameter -> 0 and -> infinity limits")
    fmt(p, "csv")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("geodesic", parents=[common], help="export a geodesic polyline as CSV")
    p.add_argument("--alpha", type=_number, required=True)
    p.add_argument("--theta", type=_number, required=True)
    p.add_argument("--length", type=_number, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--start", type=_triple, default=NilPoint(0, 0, 0))
    p.set_defaults(func=_cmd_geodesic, format="csv")

    p = sub.add_parser("find-pi", parents=[common], help="triangle with angle sum exactly pi")
    p.add_argument("--hyperbolic", type=_pair, required=True, metavar="X3,Y")
    p.add_argument("--fibre", type=_pair, required=True, metavar="X3,Z")
    p.add_argument("--tol", type=_number, default=1e-6)
    fmt(p, "plain")
    p.set_defaults(func=_cmd_find_pi)

    p = sub.add_parser("classify", parents=[common],
                       help="triangles with angle sum above, below and equal to pi")
    fmt(p, "plain")
    p.set_defaults(func=_cmd_classify)
    return parser


def _config(args) -> SolverConfig:
    return SolverConfig(tol=args.solver_tol, max_iter=args.solver_max_iter,
                        n_alpha=args.solver_alpha_grid, n_theta=args.solver_theta_grid,
                        s_window=args.solver_s_window, ws_bound=args.solver_ws_bound,
                        fd_step=args.solver_fd_step)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        if args.command is None:
            raise UsageError(parser.format_usage() + "nilgeo: error: a command is required")
        try:
            cfg = _config(args)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        text, code = args.func(args, cfg)
    except UsageError as exc:
        print(str(exc).rstrip("\n"), file=stderr)
        return EXIT_USAGE
    except SolverFailure as exc:
        print(f"nilgeo: solver failure: {exc}", file=stderr)
        return EXIT_SOLVER

    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if code == EXIT_SOLVER:
        print("nilgeo: one or more rows failed to solve", file=stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
