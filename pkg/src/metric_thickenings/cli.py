"""Command-line interface: ``smt complex|betti|wasserstein|contains|verify``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time
from pathlib import Path

from . import verification
from .errors import DomainError, InputError, PreconditionError, StructuralError
from .homology import betti, parse_grid
from .homotopy import verify_deformation
from .io import read_measure, read_space
from .metric_space import PointedMetricSpace
from .thickening import (
    CLOSED,
    OPEN,
    ScaleParameter,
    cech,
    contains,
    failing_face,
    thickening_product,
    vietoris_rips,
)
from .wasserstein import WassersteinConfig, is_coupling, wasserstein

EXIT_FAIL = 1
EXIT_USAGE = 2

CONSTRUCTIONS = {
    "vr": (vietoris_rips, CLOSED),
    "vr-strict": (vietoris_rips, OPEN),
    "cech": (cech, CLOSED),
    "cech-strict": (cech, OPEN),
}


def _float(text: str) -> float:
    value = float(text)
    if math.isnan(value):
        raise argparse.ArgumentTypeError("NaN is not allowed")
    return value


def _digest(args: argparse.Namespace) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key == "func":
            continue
        if key in ("input", "input2", "mu", "nu", "measure") and value:
            out[key] = {"path": value, "sha256": hashlib.sha256(Path(value).read_bytes()).hexdigest()}
        else:
            out[key] = value
    return out


def _json_value(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _emit(payload, fmt: str = "json", rows: list[dict] | None = None) -> None:
    if fmt == "csv" and rows is not None:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _json_value(v) for k, v in row.items()})
        return
    json.dump(payload, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def _report(command: str, args, results, start: float, passed: bool | None = None) -> dict:
    report = {"command": command, "inputs": _digest(args), "results": results}
    if passed is not None:
        report["pass"] = passed
    report["timing"] = time.perf_counter() - start
    return report


def _thickening(args, r: float | None = None):
    build, default_convention = CONSTRUCTIONS[args.construction]
    convention = args.convention or default_convention
    space = read_space(args.input, args.metric)
    return build(space, ScaleParameter(args.r if r is None else r, convention))


def cmd_complex(args) -> int:
    T = _thickening(args)
    _emit({**T.complex.to_json(), "construction": args.construction, "r": _json_value(args.r)})
    return 0


def cmd_betti(args) -> int:
    start = time.perf_counter()
    space = read_space(args.input, args.metric)
    build, default_convention = CONSTRUCTIONS[args.construction]
    convention = args.convention or default_convention
    rows = []
    for r in parse_grid(args.r_grid):
        vector = betti(build(space, ScaleParameter(r, convention)).complex, args.dim_cap)
        row = {"r": r}
        row.update({f"b{k}": v for k, v in enumerate(vector.values)})
        rows.append(row)
    results = {"dim_cap": args.dim_cap, "convention": convention, "table": [{k: _json_value(v) for k, v in r.items()} for r in rows]}
    _emit(_report("betti", args, results, start), args.format, rows)
    return 0


def cmd_wasserstein(args) -> int:
    space = read_space(args.space, args.metric)
    mu = read_measure(args.mu, space)
    nu = read_measure(args.nu, space)
    config = WassersteinConfig(p=args.p)
    distance, plan = wasserstein(mu, nu, config)
    payload = {"distance": _json_value(distance), "p": args.p, "plan": plan.to_json() if plan else []}
    if plan is not None:
        payload["is_coupling"] = bool(is_coupling(plan))
    _emit(payload)
    return 0


def cmd_contains(args) -> int:
    T = _thickening(args)
    mu = read_measure(args.measure, T.space)
    face = failing_face(T, mu)
    payload = {"contains": contains(T, mu)}
    if face is not None:
        payload["failing_face"] = list(face)
    _emit(payload)
    return 0


def _homotopy_from_files(args, kind: str):
    X = read_space(args.input, args.metric)
    Y = read_space(args.input2, args.metric) if args.input2 else X
    build, convention = CONSTRUCTIONS[args.construction]
    s = ScaleParameter(args.r, args.convention or convention)
    if kind == "product":
        M, N = build(X, s), build(Y, s)
        T = thickening_product(M, N)
    else:
        bx = args.basepoint or X.points[0]
        by = args.basepoint2 or args.basepoint or Y.points[0]
        T, M, N = verification.wedge_pair(PointedMetricSpace(X, bx), PointedMetricSpace(Y, by), s, build)
    return verify_deformation(T, kind, args.samples, args.seed, factors=(M, N))


def cmd_verify(args) -> int:
    start = time.perf_counter()
    suite = args.suite
    if suite in ("product", "wedge"):
        if not args.input or args.r is None:
            raise PreconditionError(f"'verify {suite}' needs --input and --r")
        report = _homotopy_from_files(args, suite)
        _emit(_report(f"verify {suite}", args, report.to_json(), start, report.ok))
        return 0 if report.ok else EXIT_FAIL
    fn = verification.SUITES[suite]
    kwargs = {}
    if suite in ("homotopy-product", "homotopy-wedge"):
        kwargs["samples"] = args.samples
    if suite == "metric-axioms" and args.samples != 100:
        kwargs["trials"] = args.samples
    if suite in ("wedge-betti", "homology", "wedge-strict-containment"):
        kwargs["dim_cap"] = args.dim_cap
    if suite != "wedge-strict-containment":
        kwargs["seed"] = args.seed
    result = fn(**kwargs)
    _emit(_report(f"verify {suite}", args, result.to_json(), start, result.passed))
    return 0 if result.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smt", description="Simplicial metric thickenings on finite metric spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def space_flags(p, name="--input", required=True):
        p.add_argument(name, required=required, help="distance-matrix CSV (or point cloud with --metric)")
        p.add_argument("--metric", choices=("l1", "l2", "linf"), help="read the input as a point cloud under this norm")

    def construction_flags(p, r_required=True):
        p.add_argument("--construction", choices=sorted(CONSTRUCTIONS), default="vr")
        p.add_argument("--r", type=_float, required=r_required, help="scale; 'inf' allowed")
        p.add_argument("--convention", choices=(CLOSED, OPEN), help="override the construction's comparison")

    p = sub.add_parser("complex", help="emit the complex as JSON")
    space_flags(p)
    construction_flags(p)
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("betti", help="Betti numbers along a grid of scales")
    space_flags(p)
    p.add_argument("--construction", choices=sorted(CONSTRUCTIONS), default="vr")
    p.add_argument("--convention", choices=(CLOSED, OPEN))
    p.add_argument("--r-grid", required=True, help="start:step:stop or comma-separated values")
    p.add_argument("--dim-cap", type=int, default=3)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("wasserstein", help="exact Wasserstein distance between two measures")
    space_flags(p, "--space")
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--p", type=_float, default=1.0)
    p.set_defaults(func=cmd_wasserstein)

    p = sub.add_parser("contains", help="whether a measure lies in a thickening")
    space_flags(p)
    construction_flags(p)
    p.add_argument("--measure", required=True)
    p.set_defaults(func=cmd_contains)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(verification.SUITES) + ["product", "wedge"])
    space_flags(p, required=False)
    p.add_argument("--input2", help="second factor for 'verify product|wedge' (defaults to --input)")
    p.add_argument("--basepoint")
    p.add_argument("--basepoint2")
    construction_flags(p, r_required=False)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim-cap", type=int, default=3)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, StructuralError, PreconditionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
