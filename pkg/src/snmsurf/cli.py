"""Command-line front end.

    snmsurf curvature --type I --f "x^2" --g "y^2" --grid 0,0,1,1,5,5 [--verify]
    snmsurf profile --family '{"tag": "T51", "a": 0, "K0": 0.5, "c": 2}' [--samples 101]
    snmsurf verify --suite all|oracle|cylinders|classification|k1 [--n N]
    snmsurf examples [--samples 101]

Exit codes: 0 ok, 1 verification failure, 2 input parse error, 3 constraint violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import shlex
import sys

import numpy as np

from . import __version__
from .expr import ExpressionSyntaxError
from .jets import JetError
from .oracle import OracleConfig, intrinsic_K_fd
from .profiles import (
    EXAMPLES,
    ConstraintError,
    QuadratureError,
    example_curve,
    family_from_json,
    quadrature_profile,
)
from .surface import TranslationSurface, curvature_grid, grid_points
from .svg import polyline_svg
from . import verify as suites

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CONSTRAINT = 0, 1, 2, 3


class UsageError(Exception):
    code = EXIT_PARSE


class Constraint(Exception):
    code = EXIT_CONSTRAINT


def _num(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _header(argv, seed) -> str:
    return f"snmsurf {__version__} | command: {shlex.join(['snmsurf', *argv])} | seed: {seed}"


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    return x


def _dump_json(meta: str, payload: dict) -> str:
    return json.dumps(_jsonable({"header": meta, **payload}), indent=2, sort_keys=False) + "\n"


def _csv(meta_lines, columns, rows) -> str:
    buf = io.StringIO()
    for line in meta_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


# commands

def _parse_grid(text: str):
    try:
        parts = [p.strip() for p in text.split(",")]
        u0, v0, u1, v1 = (float(p) for p in parts[:4])
        nu, nv = int(parts[4]), int(parts[5])
        if len(parts) != 6 or nu < 1 or nv < 1:
            raise ValueError
    except (ValueError, IndexError):
        raise UsageError(f"--grid expects u0,v0,u1,v1,nu,nv; got {text!r}") from None
    return grid_points(u0, v0, u1, v1, nu, nv)


def cmd_curvature(args, meta: str):
    try:
        s = TranslationSurface(args.type, args.f, args.g)
    except ExpressionSyntaxError as exc:
        raise UsageError(f"parse error: {exc}") from None
    points = _parse_grid(args.grid)
    records = curvature_grid(s, points, gauss=args.verify)
    cfg = OracleConfig(tolerance=args.tol)
    failed = False
    if args.verify:
        for r in records:
            if r.flag != "ok":
                continue
            try:
                r.K_oracle = intrinsic_K_fd(s, (r.u, r.v), cfg)
            except (JetError, ArithmeticError) as exc:
                r.flag = f"oracle: {exc}"
                r.passed = False
                continue
            r.err_closed = abs(r.K_closed - r.K_oracle)
            r.err_gauss = abs(r.K_gauss - r.K_oracle)
            r.passed = r.err_closed <= cfg.tol and r.err_gauss <= cfg.tol
        failed = not all(r.passed for r in records if r.flag == "ok")
    columns = ["u", "v", "K_closed"] + (["K_gauss", "K_oracle"] if args.verify else []) + ["flag"]

    def row(r):
        vals = [r.u, r.v, r.K_closed] + ([r.K_gauss, r.K_oracle] if args.verify else [])
        return [_num(x) for x in vals] + [r.flag]

    if args.format == "csv":
        text = _csv([meta, f"surface: type {s.kind}, f = {s.f}, g = {s.g}"], columns,
                    [row(r) for r in records])
    elif args.format == "json":
        text = _dump_json(meta, {"surface": {"kind": s.kind, "f": str(s.f), "g": str(s.g)},
                                 "columns": columns, "rows": [row(r) for r in records]})
    else:
        raise UsageError("curvature output supports csv and json")
    return text, (EXIT_FAIL if failed else EXIT_OK)


def _load_family(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid family JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise UsageError("family JSON must be an object")
    try:
        return family_from_json(obj)
    except ConstraintError as exc:
        raise Constraint(f"constraint violation: {exc}") from None
    except TypeError as exc:
        raise UsageError(f"invalid family fields: {exc}") from None


def cmd_profile(args, meta: str):
    fam = _load_family(args.family)
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    lo, hi = fam.domain.window(args.window)
    try:
        curve = quadrature_profile(fam, np.linspace(lo, hi, args.samples))
    except QuadratureError as exc:
        raise Constraint(str(exc)) from None
    dom = fam.domain
    dom_line = (f"maximal_domain: ({_num(dom.lower)}, {_num(dom.upper)}) "
                f"lower={dom.lower_kind}/{dom.lower_limit} upper={dom.upper_kind}/{dom.upper_limit}")
    fam_line = "family: " + json.dumps(_jsonable(fam.to_json()), sort_keys=True)
    rows = [(t, smp.value, smp.param, smp.slope) for t, smp in zip(curve.grid, curve.samples)]
    columns = ["t", "profile", "x_of_t", "slope"]
    if args.format == "csv":
        return _csv([meta, fam_line, dom_line], columns,
                    [[_num(x) for x in r] for r in rows]), EXIT_OK
    if args.format == "json":
        return _dump_json(meta, {"family": fam.to_json(),
                                 "maximal_domain": {"lower": dom.lower, "upper": dom.upper,
                                                    "lower_kind": dom.lower_kind,
                                                    "upper_kind": dom.upper_kind,
                                                    "lower_limit": dom.lower_limit,
                                                    "upper_limit": dom.upper_limit},
                                 "columns": columns, "rows": [list(r) for r in rows]}), EXIT_OK
    xs = [r[2] for r in rows]
    ys = [r[1] for r in rows]
    return polyline_svg([(fam.tag, xs, ys)], title=f"{fam.tag} profile",
                        xlabel=fam.variable, ylabel="profile"), EXIT_OK


def cmd_verify(args, meta: str):
    chosen = list(suites.SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in chosen:
        fn = suites.SUITES[name]
        kwargs = {"seed": args.seed}
        if args.n is not None:
            kwargs["n"] = args.n
        if name == "oracle":
            kwargs["tol"] = args.tol
        if name == "cylinders":
            kwargs["identity"] = args.identity
        results.append(fn(**kwargs))
    if len(results) == 1:
        payload = results[0].to_json()
    else:
        payload = {"suite": "all", "n": args.n,
                   "failures": [f for r in results for f in r.failures],
                   "max_errors": {r.suite: r.max_errors for r in results},
                   "suites": [r.to_json() for r in results]}
    if args.format == "csv":
        raise UsageError("verify writes a JSON report; use --format json")
    ok = all(r.passed for r in results)
    return _dump_json(meta, payload), (EXIT_OK if ok else EXIT_FAIL)


def cmd_examples(args, meta: str):
    names = [args.name] if args.name else list(EXAMPLES)
    series = []
    rows = []
    for name in names:
        if name not in EXAMPLES:
            raise UsageError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}")
        fam = EXAMPLES[name][0]
        ts, xs = example_curve(name, args.samples)
        curve = quadrature_profile(fam, ts)
        xq = curve.params + (xs[0] - curve.params[0])
        series.append((name, list(xs), list(ts)))
        rows.extend([name, _num(t), _num(x), _num(q)] for t, x, q in zip(ts, xs, xq))
    columns = ["example", "profile", "x_closed", "x_quadrature"]
    if args.format == "csv":
        return _csv([meta], columns, rows), EXIT_OK
    if args.format == "json":
        return _dump_json(meta, {"columns": columns, "rows": rows}), EXIT_OK
    return polyline_svg(series, title=", ".join(names), xlabel="parameter", ylabel="profile"), EXIT_OK


COMMANDS = {"curvature": cmd_curvature, "profile": cmd_profile,
            "verify": cmd_verify, "examples": cmd_examples}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "svg"), default=None)
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", choices=("strict", "loose"), default="strict")

    p = argparse.ArgumentParser(prog="snmsurf", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"snmsurf {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curvature", parents=[common], help="curvature on a parameter grid")
    c.add_argument("--type", choices=("I", "II"), required=True)
    c.add_argument("--f", required=True)
    c.add_argument("--g", required=True)
    c.add_argument("--grid", default="-1,-1,1,1,5,5", help="u0,v0,u1,v1,nu,nv")
    c.add_argument("--verify", action="store_true", help="add Gauss-route and oracle columns")

    pr = sub.add_parser("profile", parents=[common], help="generate a cylinder profile")
    pr.add_argument("--family", required=True, help="family JSON")
    pr.add_argument("--samples", type=int, default=101)
    pr.add_argument("--window", type=float, default=0.9,
                    help="fraction of the maximal domain to sample")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=("all", *suites.SUITES), default="all")
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--identity", choices=("true", "printed"), default="true",
                   help="curvature identity used to judge the cylinder families")

    e = sub.add_parser("examples", parents=[common], help="closed-form example curves")
    e.add_argument("--name", default=None)
    e.add_argument("--samples", type=int, default=101)
    return p


_DEFAULT_FORMAT = {"curvature": "csv", "profile": "csv", "verify": "json", "examples": "csv"}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.format is None:
        args.format = _DEFAULT_FORMAT[args.command]
    meta = _header(argv, args.seed)
    try:
        text, code = COMMANDS[args.command](args, meta)
    except (UsageError, Constraint) as exc:
        print(f"snmsurf: {exc}", file=sys.stderr)
        return exc.code
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
