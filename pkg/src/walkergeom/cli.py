"""Command-line front end.

    walkergeom curvature --metric cfg.json --at 0,0,0,0 [--format text|json]
    walkergeom report    --metric cfg.json [--points N] [--seed S] [--format ...]
    walkergeom verify    --suite NAME [--seed S] [--format ...]
    walkergeom extend    --affine cfg.json --out derived.json

Exit codes: 0 clean, 1 verification failure or violated implication,
2 usage/parse error, 3 numeric-domain or sampling failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .config import load_config, metric_from_config, write_extended_config
from .errors import (
    DomainError,
    OracleError,
    ParseError,
    SamplingError,
    UsageError,
)
from .operators import point_curvature
from .properties import evaluate_all_properties, implication_violations
from .suites import PROBE_POINTS, SUITE_NAMES, run_suite
from .walker import curvature_at

COMPONENT_CUTOFF = 1e-12


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _parse_point(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(f"--at expects four comma-separated coordinates, "
                         f"got {text!r}")
    try:
        return tuple(float(c) for c in parts)
    except ValueError as e:
        raise UsageError(f"--at coordinates must be numbers: {e}") from e


def _matrix_lines(name: str, m: np.ndarray) -> list:
    lines = [f"{name}:"]
    for row in m:
        lines.append("  [" + ", ".join(f"{v:.12g}" for v in row) + "]")
    return lines


def independent_components(tensor) -> list:
    """Nonzero R_{ijkl} with i<j, k<l, (i,j) <= (k,l) in lexicographic order."""
    out = []
    pairs = [(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a:]:
            v = tensor.component(i, j, k, l)
            if abs(v) > COMPONENT_CUTOFF:
                out.append((i, j, k, l, v))
    return out


def cmd_curvature(args) -> int:
    cfg = load_config(args.metric)
    M = metric_from_config(cfg)
    point = _parse_point(args.at)
    tensor = curvature_at(M, point)
    pack = point_curvature(M, point)
    comps = independent_components(tensor)

    if args.format == "json":
        _emit_json({
            "point": list(point),
            "components": [{"indices": [i, j, k, l], "value": v}
                           for i, j, k, l, v in comps],
            "ricci_tensor": pack.ricci_tensor.tolist(),
            "ricci_operator": pack.ricci_operator.tolist(),
            "scalar_curvature": pack.scalar_curvature,
            "symmetry_residual": tensor.symmetry_residual,
            "bianchi_residual": tensor.bianchi_residual,
        })
        return 0

    print("point (" + ", ".join(f"{c:g}" for c in point) + ")")
    if comps:
        for i, j, k, l, v in comps:
            print(f"R_{i}{j}{k}{l} = {v:.12g}")
    else:
        print("no nonzero components")
    for line in _matrix_lines("Ricci tensor", pack.ricci_tensor):
        print(line)
    for line in _matrix_lines("Ricci operator", pack.ricci_operator):
        print(line)
    print(f"scalar curvature: {pack.scalar_curvature:.12g}")
    return 0


def cmd_report(args) -> int:
    cfg = load_config(args.metric)
    M = metric_from_config(cfg)
    seed = cfg.seed if args.seed is None else args.seed
    points = [tuple(p) for p in cfg.points] or list(PROBE_POINTS)
    if args.points:
        rng = np.random.Generator(np.random.Philox(int(seed)))
        points += [tuple(float(c) for c in rng.uniform(-1.0, 1.0, 4))
                   for _ in range(args.points)]

    restricted = M.restricted
    rows = []
    violations = []
    for pt in points:
        reports = evaluate_all_properties(M, pt, seed=seed,
                                          thresholds=cfg.thresholds)
        for msg in implication_violations(reports, restricted):
            violations.append({"point": list(pt), "message": msg})
        rows.append((pt, reports))

    if args.format == "json":
        _emit_json({
            "metric": cfg.fields,
            "restricted": restricted,
            "seed": seed,
            "points": [list(p) for p, _ in rows],
            "reports": [{"point": list(p),
                         "properties": {k: r.as_dict() for k, r in rep.items()}}
                        for p, rep in rows],
            "violations": violations,
        })
    else:
        print(f"metric kind: {cfg.kind}  restricted: {restricted}  seed: {seed}")
        for pt, reports in rows:
            print("point (" + ", ".join(f"{c:g}" for c in pt) + ")")
            for name, rep in reports.items():
                print(f"  {name:22s} {rep.verdict:5s}  residual {rep.residual:.12g}"
                      f"  threshold {rep.threshold:.12g}")
        for v in violations:
            pt = ", ".join(f"{c:g}" for c in v["point"])
            print(f"implication violated at ({pt}): {v['message']}")

    return 1 if violations else 0


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed)
    if args.format == "json":
        _emit_json(report.as_dict())
    else:
        print(f"suite {report.suite}  seed {report.seed}  verdict {report.verdict}")
        for inst in report.instances:
            print(f"  {inst['name']:34s} "
                  f"{'ok' if inst['match'] else 'MISMATCH'}")
            for mm in inst.get("mismatches", []):
                print(f"    {mm.get('property')}: expected {mm.get('expected')}, "
                      f"got {mm.get('got')}")
        for check in report.checks:
            print(f"  [{'ok' if check['pass'] else 'FAIL'}] {check['name']}")
    return 0 if report.passed else 1


def cmd_extend(args) -> int:
    cfg = load_config(args.affine)
    out = write_extended_config(cfg, args.out)
    if args.format == "json":
        _emit_json(out.as_dict())
    else:
        print(f"wrote {args.out}")
        for name in ("g33", "g34", "g44"):
            print(f"  {name} = {out.fields[name]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkergeom",
        description="Curvature and property verification for four-dimensional "
                    "Walker metrics and their affine extensions.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curvature", help="curvature components at one point")
    c.add_argument("--metric", required=True, help="metric config file")
    c.add_argument("--at", required=True, help="point as x1,x2,x3,x4")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_curvature)

    r = sub.add_parser("report", help="evaluate all properties at probe points")
    r.add_argument("--metric", required=True, help="metric config file")
    r.add_argument("--points", type=int, default=0,
                   help="additional random probe points")
    r.add_argument("--seed", type=int, default=None,
                   help="override the config seed")
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.set_defaults(func=cmd_report)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("--suite", required=True,
                   help="one of: " + ", ".join(SUITE_NAMES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extend", help="write the metric a connection induces")
    e.add_argument("--affine", required=True, help="affine connection config")
    e.add_argument("--out", required=True, help="output walker config path")
    e.add_argument("--format", choices=("text", "json"), default="text")
    e.set_defaults(func=cmd_extend)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DomainError, SamplingError, OracleError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
