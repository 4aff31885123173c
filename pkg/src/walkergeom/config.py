"""JSON configuration files describing metrics and affine connections.

A config is a JSON object with top-level keys:

    kind        "walker" or "affine_extension"
    fields      expression strings; for "walker" the keys are g33, g34, g44,
                for "affine_extension" the six Christoffel symbols
                gamma_33_3 ... gamma_44_4 plus xi_33, xi_34, xi_44
    defs        named sub-expressions usable inside any field expression
    points      probe points (lists of four floats)
    seed        RNG seed for sampled checks
    thresholds  per-property residual threshold overrides

Every field is optional; omitted expressions default to "0".  Definitions may
reference one another as long as the reference graph is acyclic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .affine import AffineConnection2, riemannian_extension
from .errors import ParseError, UsageError
from .expr import ScalarField, parse_field, to_source
from .walker import WalkerMetric

WALKER_FIELDS = ("g33", "g34", "g44")
CONNECTION_FIELDS = ("gamma_33_3", "gamma_33_4", "gamma_34_3",
                     "gamma_34_4", "gamma_44_3", "gamma_44_4")
XI_FIELDS = ("xi_33", "xi_34", "xi_44")
_TOP_KEYS = {"kind", "fields", "defs", "points", "seed", "thresholds"}
_RESERVED = {"x1", "x2", "x3", "x4", "sin", "cos", "exp", "log", "lin_inv"}


@dataclass
class MetricConfig:
    kind: str
    fields: dict = field(default_factory=dict)
    defs: dict = field(default_factory=dict)
    points: list = field(default_factory=list)
    seed: int = 0
    thresholds: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "fields": dict(self.fields),
            "defs": dict(self.defs),
            "points": [list(map(float, p)) for p in self.points],
            "seed": int(self.seed),
            "thresholds": {k: float(v) for k, v in self.thresholds.items()},
        }


def _field_names(kind: str) -> tuple:
    if kind == "walker":
        return WALKER_FIELDS
    if kind == "affine_extension":
        return CONNECTION_FIELDS + XI_FIELDS
    raise UsageError(f"unknown config kind {kind!r} "
                     "(expected 'walker' or 'affine_extension')")


def load_config(path: str) -> MetricConfig:
    """Read and structurally validate a config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read config {path!r}: {e}") from e
    except json.JSONDecodeError as e:
        raise UsageError(f"config {path!r} is not valid JSON: {e}") from e
    return config_from_dict(raw, origin=path)


def config_from_dict(raw: dict, origin: str = "<config>") -> MetricConfig:
    if not isinstance(raw, dict):
        raise UsageError(f"{origin}: top level must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise UsageError(f"{origin}: unknown top-level keys {sorted(unknown)}")
    kind = raw.get("kind", "walker")
    allowed = _field_names(kind)

    fields = raw.get("fields", {})
    if not isinstance(fields, dict):
        raise UsageError(f"{origin}: 'fields' must be an object")
    bad = set(fields) - set(allowed)
    if bad:
        raise UsageError(f"{origin}: fields {sorted(bad)} not valid for "
                         f"kind {kind!r} (allowed: {', '.join(allowed)})")

    defs = raw.get("defs", {})
    if not isinstance(defs, dict):
        raise UsageError(f"{origin}: 'defs' must be an object")
    for name in defs:
        if name in _RESERVED:
            raise UsageError(f"{origin}: definition name {name!r} shadows a "
                             "reserved name")

    points = raw.get("points", [])
    if not isinstance(points, list):
        raise UsageError(f"{origin}: 'points' must be a list")
    for p in points:
        if not (isinstance(p, list) and len(p) == 4
                and all(isinstance(c, (int, float)) for c in p)):
            raise UsageError(f"{origin}: each point must be a list of four "
                             f"numbers, got {p!r}")

    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        raise UsageError(f"{origin}: 'seed' must be an integer")

    thresholds = raw.get("thresholds", {})
    if not isinstance(thresholds, dict) or not all(
            isinstance(v, (int, float)) for v in thresholds.values()):
        raise UsageError(f"{origin}: 'thresholds' must map names to numbers")

    return MetricConfig(kind=kind, fields={k: str(v) for k, v in fields.items()},
                        defs={k: str(v) for k, v in defs.items()},
                        points=points, seed=seed,
                        thresholds={k: float(v) for k, v in thresholds.items()})


def resolve_defs(defs: dict) -> dict:
    """Parse named sub-expressions, allowing acyclic cross-references.

    Repeatedly parses the pending definitions against the ones already
    resolved; a full pass with no progress means the remainder form a cycle
    (or reference a name that does not exist anywhere).
    """
    resolved: dict[str, ScalarField] = {}
    pending = dict(defs)
    while pending:
        progressed = False
        last_error = None
        for name in sorted(pending):
            try:
                resolved[name] = parse_field(pending[name], defs=resolved)
            except ParseError as e:
                if "unknown identifier" not in str(e):
                    raise UsageError(f"definition {name!r}: {e}") from e
                last_error = (name, e)
                continue
            del pending[name]
            progressed = True
        if not progressed:
            names = ", ".join(sorted(pending))
            detail = f" ({last_error[1]})" if last_error else ""
            raise UsageError(
                f"definitions {{{names}}} contain a cycle or an undefined "
                f"reference{detail}")
    return resolved


def _parse_fields(cfg: MetricConfig) -> dict:
    env = resolve_defs(cfg.defs)
    out = {}
    for name in _field_names(cfg.kind):
        src = cfg.fields.get(name, "0")
        try:
            out[name] = parse_field(src, defs=env)
        except ParseError as e:
            raise UsageError(f"field {name!r}: {e}") from e
    return out


def metric_from_config(cfg: MetricConfig) -> WalkerMetric:
    """Build the metric a config describes, extending a connection if needed."""
    if cfg.kind == "walker":
        trees = _parse_fields(cfg)
        return WalkerMetric(g34=trees["g34"], g33=trees["g33"], g44=trees["g44"])
    connection, xi = connection_from_config(cfg)
    return riemannian_extension(connection, **xi)


def connection_from_config(cfg: MetricConfig):
    """Return (AffineConnection2, xi kwargs) for an affine_extension config."""
    if cfg.kind != "affine_extension":
        raise UsageError(f"config kind {cfg.kind!r} does not describe an "
                         "affine connection")
    trees = _parse_fields(cfg)
    connection = AffineConnection2(**{name: trees[name]
                                      for name in CONNECTION_FIELDS})
    xi = {name.replace("_", ""): trees[name] for name in XI_FIELDS}
    return connection, xi


def write_extended_config(cfg: MetricConfig, out_path: str) -> MetricConfig:
    """Assemble the metric of an affine_extension config and write it back out
    as an equivalent walker-kind config, carrying points/seed/thresholds
    forward."""
    connection, xi = connection_from_config(cfg)
    metric = riemannian_extension(connection, **xi)
    out = MetricConfig(
        kind="walker",
        fields={"g33": to_source(metric.g33),
                "g34": to_source(metric.g34),
                "g44": to_source(metric.g44)},
        defs={},
        points=cfg.points,
        seed=cfg.seed,
        thresholds=cfg.thresholds,
    )
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(out.as_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return out
