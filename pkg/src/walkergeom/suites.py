"""Catalog families and the verification suites built on them.

Each suite instantiates a small catalog of metrics or connections whose
property pattern is known, evaluates every property at fixed probe points,
and compares verdicts against the expected pattern.  Expected "fails"
entries additionally require the residual to clear the robustness floor
(FAIL_FLOOR), so a probe drifting onto a degenerate locus is distinguished
from a genuine regression.

Probe points are fixed, irrational-looking, and away from every singular
hyperplane used by the catalog; randomness only enters through the sampled
vector checks, driven by the suite seed.  Reports carry no timestamps, so a
seed determines the report bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .affine import (
    AffineConnection2,
    affine_ricci_at,
    check_affine_osserman,
    pq_connection,
    riemannian_extension,
)
from .errors import UsageError
from .expr import (
    ZERO,
    Add,
    Const,
    Mul,
    Pow,
    ScalarField,
    coords_used,
    lin_inv,
    parse_field,
    ricci_flat_pq,
    to_source,
    x1,
    x2,
    x3,
    x4,
)
from .jets import eval_jet2, fd_jet2_oracle
from .operators import calibration_info, point_curvature
from .properties import (
    DEFAULT_THRESHOLD,
    FAIL_FLOOR,
    check_thm_conditions,
    evaluate_all_properties,
    pq_condition_residuals,
    spectrum_matches,
)
from .walker import WalkerMetric, curvature_at, curvature_table_restricted

SUITE_NAMES = ("thm1.3", "thm1.5", "thm1.6", "thm1.8", "thm1.10",
               "lemma1.4", "remarks", "oracle")

PROBE_POINTS = ((0.3, -0.7, 1.1, 0.9),
                (-0.4, 0.8, 0.6, -1.2),
                (0.9, 0.2, -0.5, 1.3))
BASE_POINTS = ((1.1, 0.9), (0.6, -1.2), (-0.5, 1.3))
SAMPLES = 50
ZERO_TOL = 1e-10
# Repeated roots of the common characteristic polynomial split by about the
# square root of the coefficient noise under companion-matrix extraction, so
# the per-point multiset comparison gets a floor well above that splitting.
SPECTRUM_TOL = 1e-4


@dataclass
class FamilyInstance:
    """One catalog member: a construction plus its expected verdict pattern."""

    name: str
    metric: WalkerMetric | None = None
    connection: AffineConnection2 | None = None
    xi: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    points: tuple = PROBE_POINTS
    expected: dict = field(default_factory=dict)
    spectrum: tuple | None = None
    rho_squared_identity: bool = False
    conditions: tuple = ()          # (which, p, q, s, xi, eta, expected verdict)
    affine_pattern: dict | None = None   # {"sym": "zero"|"nonzero", "anti": ...}
    pq_fields: tuple | None = None  # closed-form affine Ricci cross-check

    def __post_init__(self):
        if self.metric is None and self.connection is not None:
            self.metric = riemannian_extension(self.connection, **self.xi)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    calibration: dict
    verdict: str
    instances: list
    checks: list

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "calibration": self.calibration,
            "verdict": self.verdict,
            "instances": self.instances,
            "checks": self.checks,
        }


# --- catalog field builders ------------------------------------------------------


def _warped(p: ScalarField, q: ScalarField, s: ScalarField | None = None) -> ScalarField:
    """g34 = x1*p + x2*q + s with vanishing pieces skipped."""
    terms = []
    for coeff, f in ((x1, p), (x2, q)):
        if not _is_zero(f):
            terms.append(Mul(coeff, f))
    if s is not None and not _is_zero(s):
        terms.append(s)
    if not terms:
        return ZERO
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def _is_zero(f: ScalarField) -> bool:
    from .expr import is_zero
    return is_zero(f)


def random_polynomial_field(rng: np.random.Generator, degree: int = 3,
                            coeff_range: float = 2.0) -> ScalarField:
    """Dense random polynomial in x1..x4 of total degree <= degree."""
    variables = (x1, x2, x3, x4)
    terms = []
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            for c in range(degree + 1 - a - b):
                for d in range(degree + 1 - a - b - c):
                    coeff = float(rng.uniform(-coeff_range, coeff_range))
                    term: ScalarField = Const(coeff)
                    for var, e in zip(variables, (a, b, c, d)):
                        if e == 1:
                            term = Mul(term, var)
                        elif e > 1:
                            term = Mul(term, Pow(var, e))
                    terms.append(term)
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


# --- instance evaluation -----------------------------------------------------------


def _float_list(xs):
    return [float(v) for v in xs]


def _evaluate_instance(inst: FamilyInstance, seed: int) -> dict:
    out = {
        "name": inst.name,
        "params": inst.params,
        "expected": dict(inst.expected),
        "results": [],
        "match": True,
    }
    mismatches = []

    for pt in inst.points:
        reports = evaluate_all_properties(inst.metric, pt, SAMPLES, seed)
        entry = {
            "point": _float_list(pt),
            "reports": {k: r.as_dict() for k, r in reports.items()},
        }
        for prop, want in inst.expected.items():
            rep = reports[prop]
            if rep.verdict != want:
                mismatches.append({"point": _float_list(pt), "property": prop,
                                   "expected": want, "got": rep.verdict,
                                   "residual": rep.residual})
            elif want == "fails" and rep.residual < FAIL_FLOOR:
                mismatches.append({"point": _float_list(pt), "property": prop,
                                   "expected": "fails above floor",
                                   "got": f"residual {rep.residual:.3e}",
                                   "residual": rep.residual})
        if inst.spectrum is not None:
            got = reports["osserman"].extra.get("spectrum", [])
            ok, sign = spectrum_matches(got, inst.spectrum, SPECTRUM_TOL)
            entry["spectrum"] = {"target": _float_list(inst.spectrum),
                                 "estimate": got, "match": ok, "sign": sign}
            if not ok:
                mismatches.append({"point": _float_list(pt), "property": "spectrum",
                                   "expected": _float_list(inst.spectrum),
                                   "got": got, "residual": float("nan")})
        if inst.rho_squared_identity:
            pack = point_curvature(inst.metric, pt)
            rho = pack.ricci_operator
            res = float(np.linalg.norm(rho @ rho + np.eye(4)))
            entry["rho_squared_identity_residual"] = res
            if res > DEFAULT_THRESHOLD:
                mismatches.append({"point": _float_list(pt),
                                   "property": "rho_squared_identity",
                                   "expected": "residual <= 1e-9",
                                   "got": f"{res:.3e}", "residual": res})
        out["results"].append(entry)

    if inst.conditions:
        cond_out = []
        for which, p, q, s, xi, eta, want in inst.conditions:
            rep = check_thm_conditions(p, q, s, inst.points[0], which, xi=xi, eta=eta)
            cond_out.append({"which": which, "verdict": rep.verdict,
                             "residual": rep.residual})
            if rep.verdict != want or (want == "fails" and rep.residual < FAIL_FLOOR):
                mismatches.append({"point": _float_list(inst.points[0]),
                                   "property": f"condition:{which}",
                                   "expected": want, "got": rep.verdict,
                                   "residual": rep.residual})
        out["conditions"] = cond_out

    if inst.connection is not None and inst.affine_pattern is not None:
        affine_out = []
        for b in BASE_POINTS:
            ric = affine_ricci_at(inst.connection, b)
            sym = float(np.abs(ric.sym).max())
            anti = float(np.abs(ric.anti).max())
            affine_out.append({"base_point": _float_list(b), "sym": sym, "anti": anti})
            for part, size in (("sym", sym), ("anti", anti)):
                want = inst.affine_pattern.get(part)
                if want == "zero" and size > ZERO_TOL:
                    mismatches.append({"point": _float_list(b),
                                       "property": f"affine_ricci_{part}",
                                       "expected": "zero", "got": f"{size:.3e}",
                                       "residual": size})
                if want == "nonzero" and size < FAIL_FLOOR:
                    mismatches.append({"point": _float_list(b),
                                       "property": f"affine_ricci_{part}",
                                       "expected": "nonzero", "got": f"{size:.3e}",
                                       "residual": size})
        osr = check_affine_osserman(inst.connection, BASE_POINTS[0], SAMPLES, seed)
        affine_out.append({"affine_osserman": osr.as_dict()})
        want = inst.affine_pattern.get("affine_osserman")
        if want and (osr.verdict != want
                     or (want == "fails" and osr.residual < FAIL_FLOOR)):
            mismatches.append({"point": _float_list(BASE_POINTS[0]),
                               "property": "affine_osserman",
                               "expected": want, "got": osr.verdict,
                               "residual": osr.residual})
        out["affine"] = affine_out

    if inst.pq_fields is not None:
        p, q = inst.pq_fields
        worst = 0.0
        for b in BASE_POINTS:
            ric = affine_ricci_at(inst.connection, b)
            jp = eval_jet2(p, b)
            jq = eval_jet2(q, b)
            pv, p3, p4 = jp.value, jp.grad[0], jp.grad[1]
            qv, q3, q4 = jq.value, jq.grad[0], jq.grad[1]
            closed = np.array([
                [0.5 * q3 - 0.25 * qv * qv, 0.25 * pv * qv - 0.5 * q4],
                [0.25 * pv * qv - 0.5 * p3, 0.5 * p4 - 0.25 * pv * pv],
            ])
            diff = float(np.abs(ric.tensor - closed).max())
            worst = max(worst, diff / (1.0 + float(np.abs(closed).max())))
        out["closed_form_ricci_residual"] = worst
        if worst > ZERO_TOL:
            mismatches.append({"point": None, "property": "closed_form_ricci",
                               "expected": f"residual <= {ZERO_TOL}",
                               "got": f"{worst:.3e}", "residual": worst})

    out["mismatches"] = mismatches
    out["match"] = not mismatches
    return out


def _agreement_check(name: str, instances: list, groups: tuple) -> dict:
    """Suite-level assertion that verdict groups agree at every point."""
    disagreements = []
    for inst in instances:
        for entry in inst["results"]:
            verdicts = {k: entry["reports"][k]["verdict"]
                        for k in groups if k in entry["reports"]}
            if len(set(verdicts.values())) > 1:
                disagreements.append({"instance": inst["name"],
                                      "point": entry["point"],
                                      "verdicts": verdicts})
    return {"name": name, "pass": not disagreements,
            "disagreements": disagreements}


def _finish(suite: str, seed: int, instances: list, checks: list) -> SuiteReport:
    ok = all(i["match"] for i in instances) and all(c["pass"] for c in checks)
    return SuiteReport(suite=suite, seed=int(seed), calibration=calibration_info(),
                       verdict="pass" if ok else "fail",
                       instances=instances, checks=checks)


# --- the suites ----------------------------------------------------------------------


_HOLD_ALL = {name: "holds" for name in (
    "einstein", "ricci_flat", "jacobi_ricci", "curvature_ricci", "jacobi_jacobi",
    "curvature_jacobi", "curvature_curvature", "nilpotent_jacobi", "osserman",
    "self_dual", "conformally_osserman", "range_kernel_plane")}


def _suite_thm13(seed: int) -> SuiteReport:
    pA, qA = parse_field("x3^2"), parse_field("x4")
    sA = parse_field("x3*x4")
    pL, qL = ricci_flat_pq(1.0, 1.0, 1.0)
    xiB = parse_field("x1^2*x4")
    one = parse_field("1")

    instances = [
        FamilyInstance(
            name="affine-warping",
            metric=WalkerMetric(g34=_warped(pA, qA, sA)),
            params={"g34": "x1*x3^2 + x2*x4 + x3*x4"},
            expected={"self_dual": "holds", "anti_self_dual": "fails",
                      "conformally_osserman": "holds"},
            conditions=(("thm13_2", pA, qA, sA, None, None, "fails"),),
        ),
        FamilyInstance(
            name="closed-pair-with-fiber-term",
            metric=WalkerMetric(g34=parse_field("x1 + x2 + x4^2 + x1^2*x4")),
            params={"g34": "x1 + x2 + x4^2 + x1^2*x4"},
            expected={"anti_self_dual": "holds", "self_dual": "fails",
                      "conformally_osserman": "holds"},
            conditions=(("thm13_2", one, one, parse_field("x4^2"), xiB, None,
                         "holds"),),
        ),
        FamilyInstance(
            name="inverse-linear-family",
            metric=WalkerMetric(g34=_warped(pL, qL)),
            params={"a0": 1.0, "a3": 1.0, "a4": 1.0},
            expected=dict(_HOLD_ALL, anti_self_dual="holds"),
            conditions=(("thm13_3c", pL, qL, ZERO, None, None, "holds"),),
        ),
        FamilyInstance(
            name="closed-one-form-negative",
            metric=WalkerMetric(g34=parse_field("x1*x3 + x2*x4")),
            params={"g34": "x1*x3 + x2*x4"},
            expected={"einstein": "fails", "ricci_flat": "fails",
                      "osserman": "fails", "self_dual": "holds"},
            conditions=(("thm13_3c", x3, x4, ZERO, None, None, "fails"),),
        ),
    ]
    results = [_evaluate_instance(i, seed) for i in instances]
    checks = [_agreement_check("einstein-ricci-flat-osserman-equivalence",
                               results, ("einstein", "ricci_flat", "osserman"))]
    return _finish("thm1.3", seed, results, checks)


def _suite_thm15(seed: int) -> SuiteReport:
    instances = [
        FamilyInstance(
            name="closed-one-form",
            metric=WalkerMetric(g34=parse_field("x1*x3 + x2*x4")),
            params={"g34": "x1*x3 + x2*x4"},
            expected={"jacobi_ricci": "holds", "curvature_ricci": "holds",
                      "curvature_curvature": "holds", "jacobi_jacobi": "fails",
                      "curvature_jacobi": "fails", "einstein": "fails"},
            conditions=(("thm15_3", x3, x4, ZERO, None, None, "holds"),),
        ),
        FamilyInstance(
            name="closed-one-form-deformed",
            metric=WalkerMetric(g34=parse_field("x1*x3*x4 + x2*x4^2/2 + x3^2*x4")),
            params={"g34": "x1*x3*x4 + x2*x4^2/2 + x3^2*x4"},
            expected={"jacobi_ricci": "holds", "curvature_ricci": "holds",
                      "curvature_curvature": "holds", "einstein": "fails"},
            conditions=(("thm15_3", parse_field("x3*x4"), parse_field("x4^2/2"),
                         parse_field("x3^2*x4"), None, None, "holds"),),
        ),
        FamilyInstance(
            name="quadratic-fiber-negative",
            metric=WalkerMetric(g34=parse_field("x1^2")),
            params={"g34": "x1^2"},
            expected={"jacobi_ricci": "fails", "curvature_ricci": "fails",
                      "curvature_curvature": "fails"},
        ),
    ]
    results = [_evaluate_instance(i, seed) for i in instances]
    checks = [
        _agreement_check("jacobi-ricci-equals-curvature-ricci",
                         results, ("jacobi_ricci", "curvature_ricci")),
        _agreement_check("curvature-curvature-joins-on-restricted",
                         results, ("jacobi_ricci", "curvature_ricci",
                                   "curvature_curvature")),
    ]
    return _finish("thm1.5", seed, results, checks)


def _suite_thm16(seed: int) -> SuiteReport:
    pL, qL = ricci_flat_pq(1.0, 1.0, 1.0)
    instances = [
        FamilyInstance(
            name="inverse-linear-deformed",
            metric=WalkerMetric(g34=_warped(pL, qL, parse_field("x3*x4"))),
            params={"a0": 1.0, "a3": 1.0, "a4": 1.0, "s": "x3*x4"},
            expected=dict(_HOLD_ALL),
        ),
        FamilyInstance(
            name="closed-one-form-negative",
            metric=WalkerMetric(g34=parse_field("x1*x3 + x2*x4")),
            params={"g34": "x1*x3 + x2*x4"},
            expected={"range_kernel_plane": "fails", "nilpotent_jacobi": "fails",
                      "jacobi_jacobi": "fails", "curvature_jacobi": "fails",
                      "ricci_flat": "fails", "curvature_curvature": "holds"},
        ),
    ]
    results = [_evaluate_instance(i, seed) for i in instances]
    checks = [_agreement_check(
        "range-kernel-nilpotency-chain", results,
        ("range_kernel_plane", "curvature_jacobi", "jacobi_jacobi",
         "nilpotent_jacobi", "ricci_flat"))]
    return _finish("thm1.6", seed, results, checks)


def _suite_thm18(seed: int) -> SuiteReport:
    pL, qL = ricci_flat_pq(1.0, 1.0, 1.0)
    p15, q15 = x3, x4
    instances = [
        FamilyInstance(
            name="inverse-linear-connection",
            connection=pq_connection(pL, qL),
            xi={"xi34": parse_field("x3*x4")},
            params={"a0": 1.0, "a3": 1.0, "a4": 1.0, "xi34": "x3*x4"},
            expected=dict(_HOLD_ALL),
            affine_pattern={"sym": "zero", "anti": "zero",
                            "affine_osserman": "holds"},
            pq_fields=(pL, qL),
        ),
        FamilyInstance(
            name="closed-one-form-connection",
            connection=pq_connection(p15, q15),
            params={"p": "x3", "q": "x4"},
            expected={"curvature_curvature": "holds", "curvature_ricci": "holds",
                      "jacobi_ricci": "holds", "osserman": "fails",
                      "curvature_jacobi": "fails", "jacobi_jacobi": "fails",
                      "einstein": "fails", "ricci_flat": "fails",
                      "nilpotent_jacobi": "fails",
                      "range_kernel_plane": "fails"},
            affine_pattern={"sym": "nonzero", "anti": "zero",
                            "affine_osserman": "fails"},
            pq_fields=(p15, q15),
        ),
    ]
    results = [_evaluate_instance(i, seed) for i in instances]
    checks = [_agreement_check(
        "restricted-commuting-class", results,
        ("jacobi_ricci", "curvature_ricci", "curvature_curvature"))]
    return _finish("thm1.8", seed, results, checks)


def _suite_thm110(seed: int) -> SuiteReport:
    f = x3
    pL, qL = ricci_flat_pq(1.0, 1.0, 1.0)
    all_commuting_hold = {
        "curvature_curvature": "holds", "curvature_ricci": "holds",
        "jacobi_ricci": "holds", "curvature_jacobi": "holds",
        "jacobi_jacobi": "holds", "osserman": "holds",
        "einstein": "holds", "ricci_flat": "holds", "nilpotent_jacobi": "holds",
    }
    instances = [
        FamilyInstance(
            name="flat-connection",
            connection=AffineConnection2(),
            xi={"xi33": parse_field("x3^2"), "xi34": parse_field("x3*x4"),
                "xi44": parse_field("x4^2")},
            params={"xi33": "x3^2", "xi34": "x3*x4", "xi44": "x4^2"},
            expected=dict(all_commuting_hold),
            affine_pattern={"sym": "zero", "anti": "zero",
                            "affine_osserman": "holds"},
        ),
        FamilyInstance(
            name="inverse-linear-connection",
            connection=pq_connection(pL, qL),
            xi={"xi33": parse_field("x4^2"), "xi34": x3,
                "xi44": parse_field("x3^2")},
            params={"a0": 1.0, "a3": 1.0, "a4": 1.0,
                    "xi33": "x4^2", "xi34": "x3", "xi44": "x3^2"},
            expected=dict(all_commuting_hold),
            affine_pattern={"sym": "zero", "anti": "zero",
                            "affine_osserman": "holds"},
        ),
        FamilyInstance(
            name="antisymmetric-ricci-connection",
            connection=AffineConnection2(gamma_34_3=f, gamma_44_4=f),
            params={"gamma_34_3": "x3", "gamma_44_4": "x3"},
            expected={"curvature_ricci": "holds", "jacobi_ricci": "holds",
                      "osserman": "holds", "einstein": "holds",
                      "ricci_flat": "holds", "curvature_curvature": "fails",
                      "curvature_jacobi": "fails", "jacobi_jacobi": "fails",
                      "nilpotent_jacobi": "fails"},
            affine_pattern={"sym": "zero", "anti": "nonzero",
                            "affine_osserman": "holds"},
        ),
        FamilyInstance(
            name="symmetric-ricci-connection",
            connection=AffineConnection2(gamma_33_4=x4),
            params={"gamma_33_4": "x4"},
            expected={"curvature_curvature": "holds", "curvature_ricci": "holds",
                      "jacobi_ricci": "holds", "curvature_jacobi": "fails",
                      "jacobi_jacobi": "fails", "osserman": "fails",
                      "einstein": "fails", "ricci_flat": "fails"},
            affine_pattern={"sym": "nonzero", "anti": "zero",
                            "affine_osserman": "fails"},
        ),
        FamilyInstance(
            name="generic-connection",
            connection=AffineConnection2(gamma_34_3=f, gamma_44_4=f,
                                         gamma_33_4=x4),
            params={"gamma_34_3": "x3", "gamma_44_4": "x3", "gamma_33_4": "x4"},
            expected={"curvature_curvature": "fails", "curvature_ricci": "fails",
                      "jacobi_ricci": "fails", "curvature_jacobi": "fails",
                      "jacobi_jacobi": "fails", "osserman": "fails"},
            affine_pattern={"sym": "nonzero", "anti": "nonzero",
                            "affine_osserman": "fails"},
        ),
    ]
    results = [_evaluate_instance(i, seed) for i in instances]
    checks = [_agreement_check("jacobi-ricci-equals-curvature-ricci",
                               results, ("jacobi_ricci", "curvature_ricci"))]
    return _finish("thm1.10", seed, results, checks)


def _suite_lemma14(seed: int) -> SuiteReport:
    triples = ((1.0, 0.0, 0.0), (2.0, 1.0, 0.0), (1.0, 1.0, 1.0),
               (1.0, 0.0, 1.0), (0.0, 1.0, 1.0), (3.0, -1.0, 1.5))
    instances = []
    for a0, a3, a4 in triples:
        p, q = ricci_flat_pq(a0, a3, a4)
        inst = FamilyInstance(
            name=f"inverse-linear-{a0:g}-{a3:g}-{a4:g}",
            metric=WalkerMetric(g34=_warped(p, q)),
            params={"a0": a0, "a3": a3, "a4": a4},
            expected={"ricci_flat": "holds", "einstein": "holds",
                      "osserman": "holds", "nilpotent_jacobi": "holds",
                      "jacobi_jacobi": "holds", "curvature_jacobi": "holds",
                      "range_kernel_plane": "holds"},
            conditions=(("thm13_3c", p, q, ZERO, None, None, "holds"),
                        ("thm15_3", p, q, ZERO, None, None, "holds")),
        )
        result = _evaluate_instance(inst, seed)
        residuals = []
        for b in BASE_POINTS:
            res = pq_condition_residuals(p, q, b)
            residuals.append({"base_point": _float_list(b), "residuals": res})
            worst = max(res.values())
            if worst > ZERO_TOL:
                result["mismatches"].append(
                    {"point": _float_list(b), "property": "pq_conditions",
                     "expected": f"all residuals <= {ZERO_TOL}",
                     "got": f"{worst:.3e}", "residual": worst})
                result["match"] = False
        result["pq_conditions"] = residuals
        instances.append(result)
    checks = [_agreement_check("family-holds-everywhere", instances,
                               ("ricci_flat", "einstein", "osserman"))]
    return _finish("lemma1.4", seed, instances, checks)


def _suite_remarks(seed: int) -> SuiteReport:
    instances = [
        FamilyInstance(
            name="diagonal-spectrum-k1",
            metric=WalkerMetric(g34=parse_field("4*x1*x2 + x2*x4 - 0.25"),
                                g33=parse_field("4*x1^2 - 0.25*x4^2"),
                                g44=parse_field("4*x2^2")),
            params={"k": 1.0, "f": "x4"},
            expected={"osserman": "holds", "einstein": "holds",
                      "ricci_flat": "fails", "jacobi_ricci": "holds",
                      "curvature_ricci": "holds", "jacobi_jacobi": "fails",
                      "curvature_jacobi": "fails",
                      "curvature_curvature": "fails"},
            spectrum=(0.0, 4.0, 1.0, 1.0),
        ),
        FamilyInstance(
            name="diagonal-spectrum-k-neg-half",
            metric=WalkerMetric(g34=parse_field("-2*x1*x2 + x2*x4 + 0.5"),
                                g33=parse_field("-2*x1^2 + 0.5*x4^2"),
                                g44=parse_field("-2*x2^2")),
            params={"k": -0.5, "f": "x4"},
            expected={"osserman": "holds", "einstein": "holds",
                      "ricci_flat": "fails", "jacobi_ricci": "holds",
                      "curvature_ricci": "holds", "jacobi_jacobi": "fails",
                      "curvature_jacobi": "fails",
                      "curvature_curvature": "fails"},
            spectrum=(0.0, -2.0, -0.5, -0.5),
        ),
        FamilyInstance(
            name="split-quadratic",
            metric=WalkerMetric(g34=parse_field("(x2^2 - x1^2)/2"),
                                g33=parse_field("x1*x2"),
                                g44=parse_field("-x1*x2")),
            params={"g33": "x1*x2", "g44": "-x1*x2", "g34": "(x2^2 - x1^2)/2"},
            expected={"curvature_curvature": "holds", "curvature_ricci": "holds",
                      "jacobi_ricci": "holds", "einstein": "fails",
                      "curvature_jacobi": "fails", "jacobi_jacobi": "fails"},
            rho_squared_identity=True,
        ),
    ]
    results = [_evaluate_instance(i, seed) for i in instances]
    checks = [_agreement_check("jacobi-ricci-equals-curvature-ricci",
                               results, ("jacobi_ricci", "curvature_ricci"))]
    return _finish("remarks", seed, results, checks)


_JET_CATALOG = (
    ("cubic", "0.5*x1^3 - 2*x2*x3 + x4^2 - 1.25", (0.3, -0.7, 1.1, 0.9)),
    ("rational", "(x1 + 2*x2)/(x3^2 + 4)", (0.3, -0.7, 1.1, 0.9)),
    ("trig", "sin(x3)*cos(x4) + x1*exp(0.3*x2)", (0.3, -0.7, 1.1, 0.9)),
    ("log", "log(4 + x3^2 + x4^2)", (-0.4, 0.8, 0.6, -1.2)),
    ("negative-power", "(1 + x1^2)^-2 + x2^4", (0.9, 0.2, -0.5, 1.3)),
    ("nested", "exp(sin(x3) - 0.5*cos(x1*x2))", (0.3, -0.7, 1.1, 0.9)),
    ("base-only", "sin(x3*x4) + x3^3/3", (1.1, 0.9)),
)


def _suite_oracle(seed: int) -> SuiteReport:
    rng = np.random.Generator(np.random.Philox(int(seed)))
    worst_table = 0.0
    worst_outside = 0.0
    for _ in range(25):
        M = WalkerMetric(g34=random_polynomial_field(rng))
        pts = rng.uniform(-1.0, 1.0, size=(10, 4))
        for pt in pts:
            pipeline = curvature_at(M, pt).components
            table = curvature_table_restricted(M, pt).components
            scale = float(np.abs(table).max())
            worst_table = max(worst_table,
                              float(np.abs(pipeline - table).max()) / (1.0 + scale))
            off = table == 0.0
            if off.any():
                worst_outside = max(worst_outside,
                                    float(np.abs(pipeline[off]).max()) / (1.0 + scale))
    table_instance = {
        "name": "curvature-table-vs-pipeline",
        "params": {"metrics": 25, "points_per_metric": 10, "degree": 3},
        "expected": {"table_residual": "holds", "outside_orbit_residual": "holds"},
        "results": [{"table_residual": worst_table,
                     "outside_orbit_residual": worst_outside}],
        "mismatches": [],
        "match": worst_table <= DEFAULT_THRESHOLD and worst_outside <= DEFAULT_THRESHOLD,
    }
    if not table_instance["match"]:
        table_instance["mismatches"].append(
            {"property": "curvature_table",
             "expected": f"residuals <= {DEFAULT_THRESHOLD}",
             "got": f"{worst_table:.3e}/{worst_outside:.3e}",
             "residual": max(worst_table, worst_outside)})

    lin = lin_inv(1.0, 1.0, 1.0)
    fields = [(name, parse_field(src), pt) for name, src, pt in _JET_CATALOG]
    fields.append(("inverse-linear", Mul(x1, lin), (0.3, -0.7, 1.1, 0.9)))
    worst_jet = 0.0
    per_field = []
    for name, f, pt in fields:
        jet = eval_jet2(f, pt)
        ref = fd_jet2_oracle(f, pt)
        diff = max(abs(jet.value - ref.value),
                   float(np.abs(jet.grad - ref.grad).max()),
                   float(np.abs(jet.hess - ref.hess).max()))
        per_field.append({"field": name, "difference": diff})
        worst_jet = max(worst_jet, diff)
    jet_instance = {
        "name": "jets-vs-finite-differences",
        "params": {"step": 1e-4},
        "expected": {"difference": "<= 1e-5"},
        "results": per_field,
        "mismatches": [],
        "match": worst_jet <= 1e-5,
    }
    if not jet_instance["match"]:
        jet_instance["mismatches"].append(
            {"property": "jet_difference", "expected": "<= 1e-5",
             "got": f"{worst_jet:.3e}", "residual": worst_jet})

    return _finish("oracle", seed, [table_instance, jet_instance], [])


_DISPATCH = {
    "thm1.3": _suite_thm13,
    "thm1.5": _suite_thm15,
    "thm1.6": _suite_thm16,
    "thm1.8": _suite_thm18,
    "thm1.10": _suite_thm110,
    "lemma1.4": _suite_lemma14,
    "remarks": _suite_remarks,
    "oracle": _suite_oracle,
}


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    """Evaluate one named suite; raises UsageError for an unknown name."""
    if name not in _DISPATCH:
        known = ", ".join(SUITE_NAMES)
        raise UsageError(f"unknown suite {name!r} (known: {known})")
    return _DISPATCH[name](int(seed))
