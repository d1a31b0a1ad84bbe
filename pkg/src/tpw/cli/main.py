"""Command-line entry point: ``tpw <command> MODEL ...``.

MODEL is a fixture name (M1..M4) or a model file.  Every command writes a
JSON report to stdout (or ``--report FILE``) and one PASS/FAIL line per
check to stderr.  The exit code is 0 when every check passes, 1 when some
check fails and 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from tpw.checks import CheckResult, Part, worst
from tpw.cli.modelfile import ModelFileError, load_model
from tpw.cli.report import build_report, dumps
from tpw.convergence import DEFAULT_GRIDS, STUDIES
from tpw.expr import DomainError, ExprSyntaxError, parse
from tpw.pathspace import (
    FLOW_STEPS,
    AlgebroidPath,
    GaugeGenerator,
    Grid,
    PathTangent,
    anchor_residual_norm,
    gauge_flow,
    momentum,
    omega,
    omega0,
    omega1,
    solve_base_path,
)
from tpw.pathspace.checks import PROBE_GENERATOR_SCALE, momentum_constants
from tpw.pathspace.sampling import random_generator
from tpw.suite import (
    CHECK_NAMES,
    CONVERGENCE_ORDER,
    ENDPOINT_TOL,
    GAP_ORDER,
    GROWTH_FACTOR,
    SYMBOLIC_CHECKS,
    run_suite,
)
from tpw.tensorcalc.calibration import default_calibration

SEED_ENV = "TPW_SEED"
STUDY_ORDERS = {"path": CONVERGENCE_ORDER, "momentum": GAP_ORDER, "omega1": GAP_ORDER}
PROBES = 5


class InputError(Exception):
    """Unusable command-line input; reported with exit code 2."""


def _seed(args) -> int:
    value = os.environ.get(SEED_ENV)
    if value is None or value == "":
        return args.seed
    try:
        return int(value)
    except ValueError:
        raise InputError(f"{SEED_ENV}={value!r} is not an integer") from None


def _model(args, check_closed: bool = True):
    return load_model(args.model, default_calibration(), check_closed=check_closed)


def _floats(text: str, n: int, what: str) -> np.ndarray:
    try:
        values = np.array([float(tok) for tok in text.split(",")])
    except ValueError:
        raise InputError(f"{what} must be {n} comma-separated numbers, got {text!r}") from None
    if values.shape != (n,):
        raise InputError(f"{what} needs {n} values, got {values.size}")
    return values


def _exprs(text: str, n: int, what: str, allow_x: bool):
    parts = [p for p in text.split(",")]
    if len(parts) != n:
        raise InputError(f"{what} needs {n} comma-separated expressions, got {len(parts)}")
    out = []
    for k, p in enumerate(parts):
        try:
            e = parse(p, n if allow_x else 0)
        except ExprSyntaxError as exc:
            raise InputError(f"{what} component {k + 1}: {exc}") from None
        out.append(e)
    return out


def _read_json(path: str, what: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"{what} file {path!r} not found") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path!r} is not valid JSON: {exc}") from None


def _load_path(path: str, n: int) -> AlgebroidPath:
    data = _read_json(path, "path")
    data = data.get("path", data)
    try:
        p = AlgebroidPath.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"path file {path!r}: {exc}") from None
    if p.n != n:
        raise InputError(f"path file {path!r} has dimension {p.n}, model has {n}")
    return p


def _load_tangent(path: str, like: AlgebroidPath) -> PathTangent:
    data = _read_json(path, "tangent")
    try:
        u = PathTangent.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"tangent file {path!r}: {exc}") from None
    if u.xi.shape != like.X.shape:
        raise InputError(f"tangent file {path!r} has shape {u.xi.shape}, path has {like.X.shape}")
    return u


def _write_json(path: str, data: dict):
    Path(path).write_text(json.dumps(data, sort_keys=True) + "\n")


def cmd_verify(args):
    numeric = None
    warnings = []
    model = _model(args, check_closed=False)
    if args.mode == "symbolic":
        if model.exact:
            numeric = False
        else:
            warnings.append(f"{model.name} is not in the exact fragment; verifying numerically")
            numeric = True
    elif args.mode == "numeric":
        numeric = True
    seed = _seed(args)
    points = None
    if numeric or (numeric is None and not model.exact):
        points = model.sample_points(np.random.default_rng([seed, 100]), args.points)
    checks = run_suite(model, seed=seed, names=SYMBOLIC_CHECKS, numeric=numeric, points=points)
    mode = "numeric" if numeric or (numeric is None and not model.exact) else "symbolic"
    return model, checks, {"mode": mode, "points": args.points if mode == "numeric" else None, "seed": seed}, None, warnings


def cmd_path(args):
    model = _model(args)
    x0 = _floats(args.x0, model.n, "--x0")
    eta = _exprs(args.eta, model.n, "--eta", allow_x=False) if args.eta else [0] * model.n
    path = solve_base_path(model, x0, eta, Grid(args.grid))
    results = {
        "target": path.target.tolist(),
        "source": path.source.tolist(),
        "anchor_residual": anchor_residual_norm(model, path),
    }
    if args.out:
        _write_json(args.out, path.to_json())
        results["written"] = args.out
    else:
        results["path"] = path.to_json()
    return model, [], {"grid": args.grid, "x0": x0.tolist(), "eta": args.eta}, results, []


def cmd_gauge(args):
    model = _model(args)
    path = _load_path(args.path, model.n)
    try:
        B = GaugeGenerator.closed_form(_exprs(args.B, model.n, "--B", allow_x=True))
    except ValueError as exc:
        raise InputError(f"--B: {exc}") from None
    flowed = gauge_flow(model, B, path, args.s, args.steps)
    drift = float(max(np.max(np.abs(flowed.X[0] - path.X[0])), np.max(np.abs(flowed.X[-1] - path.X[-1]))))
    checks = [CheckResult("endpoints", [Part("endpoint_drift", drift, ENDPOINT_TOL)])]
    results = {"anchor_residual_before": anchor_residual_norm(model, path), "anchor_residual_after": anchor_residual_norm(model, flowed)}
    if path.on_shell:
        seed = _seed(args)
        N = path.grid.N
        C = max(a for a, _ in momentum_constants(model, np.random.default_rng([seed, 6]), N))
        rng = np.random.default_rng([seed, 8])
        probes = [random_generator(rng, model.n, PROBE_GENERATOR_SCALE) for _ in range(PROBES)]
        after = worst(abs(momentum(model, b, flowed)) for b in probes)
        results.update(bound_C=C, probe_momentum_before=worst(abs(momentum(model, b, path)) for b in probes), probe_momentum_after=after)
        checks.append(CheckResult("constraint_growth", [Part("growth", after * N**2 / C if C > 0 else (0.0 if after == 0 else np.inf), GROWTH_FACTOR)]))
    if args.out:
        _write_json(args.out, flowed.to_json())
        results["written"] = args.out
    else:
        results["path"] = flowed.to_json()
    return model, checks, {"s": args.s, "steps": args.steps, "B": args.B, "grid": path.grid.N}, results, []


def cmd_omega(args):
    model = _model(args)
    path = _load_path(args.path, model.n)
    u, v = _load_tangent(args.u, path), _load_tangent(args.v, path)
    value = {"0": lambda: omega0(path, u, v), "1": lambda: omega1(model, path, u, v), "total": lambda: omega(model, path, u, v)}[args.which]()
    return model, [], {"which": args.which, "grid": path.grid.N}, {"value": value}, []


def cmd_suite(args):
    model = _model(args)
    seed = _seed(args)
    unknown = [c for c in args.check if c not in CHECK_NAMES]
    if unknown:
        raise InputError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECK_NAMES)}")
    checks = run_suite(model, grid=args.grid, seed=seed, names=args.check or None)
    return model, checks, {"grid": args.grid, "seed": seed}, None, []


def cmd_convergence(args):
    model = _model(args)
    seed = _seed(args)
    grids = DEFAULT_GRIDS[args.study] if args.grids is None else tuple(args.grids)
    try:
        study = STUDIES[args.study](model, np.random.default_rng([seed, 200]), grids)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    check = CheckResult(f"{args.study}_convergence", [Part("slope", study.slope, STUDY_ORDERS[args.study], ">=")])
    return model, [check], {"study": args.study, "grids": list(study.grids), "seed": seed}, study.to_json(), []


def _grid_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tpw", description="Verification tools for twisted Poisson models and their path spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model", help="fixture name (M1..M4) or model file")
        p.add_argument("--seed", type=int, default=0, help=f"random seed (overridden by ${SEED_ENV})")
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("verify", cmd_verify, "symbolic identities of (pi, phi)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--symbolic", dest="mode", action="store_const", const="symbolic")
    mode.add_argument("--numeric", dest="mode", action="store_const", const="numeric")
    p.add_argument("--points", type=_positive, default=5, help="sample points for numeric verification")

    p = add("path", cmd_path, "solve dX/dt = pi#(X) eta")
    p.add_argument("--x0", required=True, help="start point, comma-separated")
    p.add_argument("--eta", help="eta_i(t) expressions, comma-separated (default 0)")
    p.add_argument("--grid", type=_positive, default=200)
    p.add_argument("--out", help="write the path JSON here")

    p = add("gauge", cmd_gauge, "flow a path along a gauge generator")
    p.add_argument("path", help="path JSON file")
    p.add_argument("--B", required=True, help="B_i(t, x) expressions vanishing at t=0 and t=1, comma-separated")
    p.add_argument("--s", type=float, default=1.0, help="total flow time")
    p.add_argument("--steps", type=_positive, default=FLOW_STEPS)
    p.add_argument("--out", help="write the flowed path JSON here")

    p = add("omega", cmd_omega, "evaluate Omega_0, Omega_1 or Omega on two tangents")
    p.add_argument("path", help="path JSON file")
    p.add_argument("u", help="tangent JSON file")
    p.add_argument("v", help="tangent JSON file")
    p.add_argument("--which", choices=("0", "1", "total"), default="total")

    p = add("suite", cmd_suite, "run the acceptance checks")
    p.add_argument("--grid", type=_positive, default=200)
    p.add_argument("--check", action="append", default=[], help=f"run only this check (repeatable): {', '.join(CHECK_NAMES)}")

    p = add("convergence", cmd_convergence, "grid-refinement order study")
    p.add_argument("study", choices=sorted(STUDIES))
    p.add_argument("--grids", type=_grid_list, help="comma-separated doubling grids")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        model, checks, params, results, warnings = args.func(args)
    except (InputError, ModelFileError, FileNotFoundError, ExprSyntaxError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"tpw: error: {msg}", file=sys.stderr)
        return 2
    except (DomainError, ArithmeticError) as exc:
        print(f"tpw: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    for w in warnings:
        print(f"tpw: warning: {w}", file=sys.stderr)
    report = build_report(args.command, model, checks, params, results, warnings, time.perf_counter() - start)
    text = dumps(report)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    for c in checks:
        print(c.line(), file=sys.stderr)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
