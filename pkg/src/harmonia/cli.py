"""Command-line front end for harmonia.

Exit codes: 0 success, 1 a check failed, 2 invalid input or runtime error.
"""
from __future__ import annotations

import argparse
import ast
import json
import math
import sys
from pathlib import Path

import numpy as np

from harmonia import __version__, boundary, disk, exppoly, green, radial
from harmonia.catalog import KINDS, SpaceError, make_space
from harmonia.config import ConfigError, load_config, parse_grid, parse_list
from harmonia.report import fmt, rows_to_csv
from harmonia.suites import SUITES, SuiteError, run_suite, suite_rows

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
QUANTITIES = ("density", "mu", "green", "eigenvalue", "scal_sphere", "martin_ratio")

_FUNCS = {name: getattr(np, name) for name in
          ("sin", "cos", "tan", "exp", "log", "sqrt", "abs", "sinh", "cosh", "tanh", "arctan", "sign",
           "minimum", "maximum")}
_CONSTS = {"pi": math.pi, "e": math.e}
_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Call, ast.Load,
          ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.Mod, ast.USub, ast.UAdd)


class CliError(ValueError):
    pass


def compile_expression(text: str, variables=("theta",), params=None):
    """Compile a whitelisted arithmetic expression into a vectorized callable of ``variables``."""
    params = dict(params or {})
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise CliError(f"cannot parse expression {text!r}") from exc
    allowed = set(_FUNCS) | set(_CONSTS) | set(variables) | set(params)
    for node in ast.walk(tree):
        if not isinstance(node, _NODES):
            raise CliError(f"expression element {type(node).__name__} is not allowed")
        if isinstance(node, ast.Name) and node.id not in allowed:
            raise CliError(f"unknown name {node.id!r} in expression")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name) and node.func.id in _FUNCS):
            raise CliError("only elementary functions may be called")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise CliError("only numeric constants are allowed")
    code = compile(tree, "<expression>", "eval")
    env = {"__builtins__": {}, **_FUNCS, **_CONSTS, **params}

    def fn(*args):
        scope = dict(env, **dict(zip(variables, args)))
        return eval(code, scope)  # noqa: S307 - AST whitelisted above

    return fn


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise CliError(f"cannot read complex number {text!r} (use a+bi)") from exc


def _space_args(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--space", choices=KINDS, required=required, help="catalog kind")
    p.add_argument("--dim", type=int, default=2, help="manifold dimension n")
    p.add_argument("--eigen", default=None, help="rank1_model curvature eigenvalues, e.g. -4:1,-1:2")


def _common_args(p: argparse.ArgumentParser):
    p.add_argument("--config", default=None, help="key = value config file (default: $HARMONIA_CONFIG)")
    p.add_argument("--output", "-o", default=None, help="write output to this file instead of stdout")


def _space(args):
    return make_space(args.space, args.dim, args.eigen)


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
        return
    p = Path(path)
    try:
        p.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise CliError(f"cannot write {p}: {exc.strerror}") from exc


def cmd_verify(args) -> int:
    overrides = {}
    if args.grid:
        overrides["mu_grid"] = args.grid
        overrides["box_grid"] = args.grid
    if args.tmax is not None:
        overrides["jacobi_tmax"] = args.tmax
    cfg = load_config(args.config, overrides)
    space = _space(args)
    report = run_suite(args.suite, space, cfg, jobs=args.jobs)
    print(report.table(), file=sys.stderr)
    _emit(report.to_json() + "\n", args.output)
    if args.csv:
        rows = suite_rows(args.suite, space, cfg)
        _emit(rows_to_csv(["x", "quantity", "value", "reference", "residual"], rows), args.csv)
    return EXIT_OK if report.passed else EXIT_FAIL


def table_rows(quantity: str, space, grid, a: float = 1.0):
    h = space.mean_curvature_h
    if quantity == "density":
        f, f1, f2 = space.density(grid)
        return ["r", "f", "f1", "f2"], list(zip(grid, np.atleast_1d(f), np.atleast_1d(f1), np.atleast_1d(f2)))
    if quantity == "mu":
        return ["r", "mu"], list(zip(grid, np.atleast_1d(radial.mu(space, grid))))
    if np.any(grid <= 0):
        raise CliError(f"{quantity} needs a grid of positive values")
    if quantity == "green":
        k = green.green_kernel(space)
        return ["r", "green"], list(zip(grid, np.atleast_1d(k(grid))))
    if quantity == "eigenvalue":
        return ["r", "eigenvalue"], list(zip(grid, np.atleast_1d(radial.sphere_eigenvalue(space, grid))))
    if quantity == "scal_sphere":
        return ["r", "scal_sphere"], list(zip(grid, np.atleast_1d(radial.sphere_scalar_curvature(space, grid))))
    k = green.green_kernel(space)
    rows = [(s, green.martin_limit(k, a, float(s)), math.exp(-h * a)) for s in grid]
    return ["s", "ratio", "limit"], rows


def cmd_emit(args) -> int:
    space = _space(args)
    grid = parse_grid(args.grid)
    header, rows = table_rows(args.quantity, space, grid, args.a)
    if args.format == "csv":
        text = rows_to_csv(header, rows)
    else:
        text = json.dumps({"quantity": args.quantity, "columns": header,
                           "rows": [[float(v) for v in row] for row in rows]}, indent=2) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_green(args) -> int:
    cfg = load_config(args.config)
    space = _space(args)
    k = green.green_kernel(space, cfg.green_cut)
    res = green.verify_fundamental(k, green.bump())
    out = {"space": space.name, "dim": space.dim_n, "r": args.r, "green": k(args.r),
           "fundamental_residual": res, "tolerance": cfg.tol_green}
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK if res <= cfg.tol_green else EXIT_FAIL


def cmd_martin(args) -> int:
    space = _space(args)
    k = green.green_kernel(space)
    ratio = green.martin_limit(k, args.a, args.s)
    limit = math.exp(-space.mean_curvature_h * args.a)
    out = {"a": args.a, "s": args.s, "ratio": ratio, "limit": limit, "difference": ratio - limit}
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_disk(args) -> int:
    z = parse_complex(args.z) if args.z else 0j
    if args.op == "distance":
        val = disk.distance(disk.DiskPoint(z), disk.DiskPoint(parse_complex(args.w)))
    elif args.op == "busemann":
        val = disk.busemann(disk.BoundaryAngle(args.xi), disk.DiskPoint(z))
    elif args.op == "gromov":
        val = disk.gromov_product(disk.DiskPoint(z), disk.DiskPoint(parse_complex(args.w)),
                                  disk.DiskPoint(parse_complex(args.p)))
    else:
        cfg = load_config(args.config)
        from harmonia.suites import divergence_rows

        rows = divergence_rows(cfg)
        _emit(rows_to_csv(["t", "quantity", "actual", "bound", "margin"], rows), args.output)
        return EXIT_OK if all(r[4] >= 0 for r in rows) else EXIT_FAIL
    _emit(fmt(val) + "\n", args.output)
    return EXIT_OK


def cmd_dirichlet(args) -> int:
    phi = compile_expression(args.phi, ("theta",), {"k": args.k})
    z = parse_complex(args.z)
    H = boundary.dirichlet_solve(phi, disk.DiskPoint(z), args.nodes)
    theta = 2 * np.pi * np.arange(max(args.nodes, 4096)) / max(args.nodes, 4096)
    vals = np.asarray(phi(theta), dtype=float) * np.ones_like(theta)
    lap = disk.hyperbolic_laplacian_fd(lambda w: boundary.dirichlet_solve(phi, w, args.nodes), z)
    out = {"z": [z.real, z.imag], "H": H, "laplacian_residual": lap,
           "max_principle_slack": [H - float(vals.min()), float(vals.max()) - H]}
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_meanvalue(args) -> int:
    arcs = parse_list(args.arcs)
    phi = compile_expression(args.phi, ("theta",), {"k": args.k})
    H = lambda w: boundary.dirichlet_solve(phi, np.asarray(w), args.nodes)  # noqa: E731
    avg = boundary.mean_value_at_infinity(H, args.xi, arcs)
    target = float(np.asarray(phi(np.array([args.xi])), dtype=float)[0])
    rows = [(L, a, target, abs(a - target)) for L, a in zip(arcs, avg)]
    _emit(rows_to_csv(["half_length", "average", "boundary_value", "error"], rows), args.output)
    return EXIT_OK


def cmd_fit(args) -> int:
    cfg = load_config(args.config)
    space = _space(args)
    grid = parse_grid(args.range)
    samples = np.column_stack([grid, space.f(grid)])
    p = exppoly.fit(samples, cfg.max_terms, cfg.max_degree)
    data = p.to_dict()
    data["leading_rate"] = p.leading_rate
    data["mean_curvature_h"] = space.mean_curvature_h
    _emit(json.dumps(data, indent=2) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmonia", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"harmonia {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    p.add_argument("suite", choices=SUITES)
    _space_args(p)
    _common_args(p)
    p.add_argument("--grid", default=None, help="radial grid a:b:step")
    p.add_argument("--tmax", type=float, default=None, help="Jacobi integration horizon")
    p.add_argument("--csv", default=None, help="also write the per-point table as CSV")
    p.add_argument("--jobs", type=int, default=1, help="run checks on this many threads")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit", help="tabulate a radial quantity")
    p.add_argument("quantity", choices=QUANTITIES)
    _space_args(p)
    _common_args(p)
    p.add_argument("--grid", required=True, help="a:b:step")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--a", type=float, default=1.0, help="shift a for martin_ratio")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("green", help="Green's kernel value and fundamental-solution residual")
    _space_args(p)
    _common_args(p)
    p.add_argument("--r", type=float, required=True)
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("martin", help="Martin quotient G(s+a)/G(s) against exp(-h a)")
    _space_args(p)
    _common_args(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--s", type=float, default=40.0)
    p.set_defaults(func=cmd_martin)

    p = sub.add_parser("disk", help="Poincare disk geometry")
    p.add_argument("--op", choices=("distance", "busemann", "gromov", "divergence"), required=True)
    p.add_argument("--z", default=None, help="point a+bi")
    p.add_argument("--w", default="0", help="second point a+bi")
    p.add_argument("--p", default="0", help="base point a+bi (gromov)")
    p.add_argument("--xi", type=float, default=0.0, help="boundary angle")
    _common_args(p)
    p.set_defaults(func=cmd_disk)

    p = sub.add_parser("dirichlet", help="solve the Dirichlet problem at infinity on the disk")
    p.add_argument("--phi", required=True, help="boundary data in theta, e.g. 'cos(k*theta)'")
    p.add_argument("--k", type=float, default=1.0, help="value of k inside --phi")
    p.add_argument("--z", required=True)
    p.add_argument("--nodes", type=int, default=512)
    _common_args(p)
    p.set_defaults(func=cmd_dirichlet)

    p = sub.add_parser("meanvalue", help="horocycle averages toward a boundary point")
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--arcs", default="1,5,25,125", help="half-lengths l1,l2,...")
    p.add_argument("--phi", default="cos(theta)")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--nodes", type=int, default=512)
    _common_args(p)
    p.set_defaults(func=cmd_meanvalue)

    p = sub.add_parser("fit-density", help="Prony fit of a catalog density")
    _space_args(p)
    _common_args(p)
    p.add_argument("--range", default="0:10:0.05", help="sample range a:b:step")
    p.set_defaults(func=cmd_fit)
    return parser


def _preprocess(argv):
    # let '--eigen -4:1,-1:2' through: argparse would read the value as an option
    out = list(argv)
    for i, tok in enumerate(out[:-1]):
        if tok == "--eigen" and out[i + 1].startswith("-"):
            out[i:i + 2] = [f"--eigen={out[i + 1]}"]
            break
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    args = parser.parse_args(_preprocess(argv))
    try:
        return args.func(args)
    except (SpaceError, ConfigError, SuiteError, CliError, green.GreenKernelError, disk.DiskError,
            boundary.BoundaryError, exppoly.FitError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
