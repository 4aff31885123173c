"""Residual-based verdicts for curvature conditions of Walker metrics.

Each check returns a PropertyReport with a nonnegative residual, the
threshold it was judged against, a verdict, and a witness locating the worst
offender.  Residuals are normalized as |r| / (1 + scale) where scale is the
largest magnitude feeding the expression, so verdicts are scale-free: a
condition "holds" when the residual is at most the threshold (default 1e-9)
and robustly "fails" when it clears the 1e-3 floor used by the test suites.

Commutation conditions quantified over all tangent vectors are decided on
finite polarized families: J_ij over basis pairs i <= j (10 operators) and
R_kl over k < l (6 operators).  Since each slot of the curvature tensor is
linear, vanishing of every basis commutator is equivalent to vanishing for
all vectors.

All sampling draws from a counter-based generator so a seed fixes the sample
set on every platform.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import SamplingError, UsageError
from .expr import ZERO, ScalarField, coords_used, derivative, eval_value
from .jets import eval_jet2
from .operators import (
    PointCurvature,
    pack_jacobi,
    pack_jacobi_polarized,
    pack_skew,
    point_curvature,
    sd_vanishing_side,
    weyl_split_at,
)
from .walker import WalkerMetric

DEFAULT_THRESHOLD = 1e-9
OSSERMAN_THRESHOLD = 1e-8
FAIL_FLOOR = 1e-3
EPS_CAUSAL = 1e-3

COMMUTING_KINDS = (
    "jacobi_ricci",
    "curvature_ricci",
    "jacobi_jacobi",
    "curvature_jacobi",
    "curvature_curvature",
)

PROPERTY_NAMES = (
    "einstein",
    "ricci_flat",
    "jacobi_ricci",
    "curvature_ricci",
    "jacobi_jacobi",
    "curvature_jacobi",
    "curvature_curvature",
    "nilpotent_jacobi",
    "osserman",
    "self_dual",
    "anti_self_dual",
    "conformally_osserman",
    "range_kernel_plane",
)


@dataclass
class PropertyReport:
    """One property decision at one point."""

    name: str
    residual: float
    threshold: float
    verdict: str                      # "holds" | "fails"
    witness: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "residual": float(self.residual),
            "threshold": float(self.threshold),
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.extra:
            out["extra"] = self.extra
        return out


def _report(name, residual, threshold, witness=None, extra=None) -> PropertyReport:
    residual = float(residual)
    verdict = "holds" if residual <= threshold else "fails"
    return PropertyReport(name=name, residual=residual, threshold=float(threshold),
                          verdict=verdict, witness=witness, extra=extra or {})


def _thr(thresholds, name, default=DEFAULT_THRESHOLD) -> float:
    if thresholds and name in thresholds:
        return float(thresholds[name])
    return default


def _frob(a) -> float:
    return float(np.linalg.norm(a))


def _point_list(p) -> list:
    return [float(c) for c in np.asarray(p, dtype=np.float64)]


# --- commuting families -------------------------------------------------------


def _basis_vector(i: int) -> np.ndarray:
    e = np.zeros(4)
    e[i] = 1.0
    return e


def _jacobi_family(pack: PointCurvature) -> list[tuple[str, np.ndarray]]:
    ops = []
    for i in range(4):
        for j in range(i, 4):
            ops.append((f"J_{i + 1}{j + 1}",
                        pack_jacobi_polarized(pack, _basis_vector(i), _basis_vector(j))))
    return ops


def _skew_family(pack: PointCurvature) -> list[tuple[str, np.ndarray]]:
    ops = []
    for k in range(4):
        for l in range(k + 1, 4):
            ops.append((f"R_{k + 1}{l + 1}",
                        pack_skew(pack, _basis_vector(k), _basis_vector(l))))
    return ops


def check_commuting(M: WalkerMetric, p, kind: str, threshold=None,
                    pack: PointCurvature | None = None) -> PropertyReport:
    """Largest normalized commutator over the polarized operator family."""
    if kind not in COMMUTING_KINDS:
        raise UsageError(f"unknown commuting kind {kind!r}")
    if pack is None:
        pack = point_curvature(M, p)
    threshold = DEFAULT_THRESHOLD if threshold is None else float(threshold)

    rho = [("rho", pack.ricci_operator)]
    if kind == "jacobi_ricci":
        pairs = itertools.product(rho, _jacobi_family(pack))
    elif kind == "curvature_ricci":
        pairs = itertools.product(rho, _skew_family(pack))
    elif kind == "jacobi_jacobi":
        pairs = itertools.combinations(_jacobi_family(pack), 2)
    elif kind == "curvature_jacobi":
        pairs = itertools.product(_jacobi_family(pack), _skew_family(pack))
    else:
        pairs = itertools.combinations(_skew_family(pack), 2)

    worst = 0.0
    worst_pair = None
    for (la, A), (lb, B) in pairs:
        comm = A @ B - B @ A
        res = _frob(comm) / (1.0 + _frob(A) * _frob(B))
        if res >= worst:
            worst = res
            worst_pair = (la, lb)
    witness = {"point": _point_list(pack.point),
               "left": worst_pair[0], "right": worst_pair[1]}
    return _report(kind, worst, threshold, witness)


# --- Ricci conditions ----------------------------------------------------------


def check_einstein(M: WalkerMetric, p, threshold=None,
                   pack: PointCurvature | None = None) -> PropertyReport:
    """Distance of the Ricci operator from a scalar multiple of the identity."""
    if pack is None:
        pack = point_curvature(M, p)
    threshold = DEFAULT_THRESHOLD if threshold is None else float(threshold)
    rho = pack.ricci_operator
    trace_part = (np.trace(rho) / 4.0) * np.eye(4)
    res = _frob(rho - trace_part) / (1.0 + _frob(rho))
    witness = {"point": _point_list(pack.point)}
    extra = {"scalar_curvature": float(pack.scalar_curvature)}
    return _report("einstein", res, threshold, witness, extra)


def check_ricci_flat(M: WalkerMetric, p, threshold=None,
                     pack: PointCurvature | None = None) -> PropertyReport:
    if pack is None:
        pack = point_curvature(M, p)
    threshold = DEFAULT_THRESHOLD if threshold is None else float(threshold)
    size = _frob(pack.ricci_operator)
    res = size / (1.0 + size)
    witness = {"point": _point_list(pack.point)}
    return _report("ricci_flat", res, threshold, witness)


# --- sampled vector conditions -------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def check_nilpotent_jacobi(M: WalkerMetric, p, samples: int = 50, seed: int = 0,
                           threshold=None,
                           pack: PointCurvature | None = None) -> PropertyReport:
    """max over sampled x of |J(x)^2| relative to |J(x)|^2."""
    if pack is None:
        pack = point_curvature(M, p)
    threshold = DEFAULT_THRESHOLD if threshold is None else float(threshold)
    rng = _rng(seed)
    xs = rng.uniform(-1.0, 1.0, size=(int(samples), 4))
    worst = 0.0
    worst_x = xs[0]
    for x in xs:
        J = pack_jacobi(pack, x)
        size = _frob(J)
        res = _frob(J @ J) / (1.0 + size * size)
        if res >= worst:
            worst = res
            worst_x = x
    witness = {"point": _point_list(pack.point), "vector": _point_list(worst_x)}
    return _report("nilpotent_jacobi", worst, threshold, witness)


def _char_coeffs(J: np.ndarray) -> np.ndarray:
    """Monic characteristic polynomial coefficients (c1..c4) of a 4x4 matrix.

    Faddeev-LeVerrier recursion: stable for these small dense operators and
    free of any eigenvalue ordering ambiguity.
    """
    eye = np.eye(4)
    coeffs = np.empty(4)
    Mk = J.copy()
    c = -np.trace(Mk)
    coeffs[0] = c
    for k in range(2, 5):
        Mk = J @ (Mk + c * eye)
        c = -np.trace(Mk) / k
        coeffs[k - 1] = c
    return coeffs


def check_osserman_sampled(M: WalkerMetric, p, samples: int = 50, seed: int = 0,
                           threshold=None,
                           pack: PointCurvature | None = None) -> PropertyReport:
    """Constancy of the Jacobi characteristic polynomial on unit spacelike vectors.

    Draws from the sampling cube, keeps vectors with g(x,x) > EPS_CAUSAL,
    rescales them to g(x,x) = 1, and measures the spread of each
    characteristic coefficient across the sample.  On success the root
    multiset of the mean polynomial is reported as the spectrum estimate.
    """
    if pack is None:
        pack = point_curvature(M, p)
    threshold = OSSERMAN_THRESHOLD if threshold is None else float(threshold)
    samples = int(samples)
    rng = _rng(seed)
    g = pack.metric

    accepted = []
    budget = max(50 * samples, 1000)
    drawn = 0
    while len(accepted) < samples and drawn < budget:
        x = rng.uniform(-1.0, 1.0, size=4)
        drawn += 1
        norm2 = float(x @ g @ x)
        if norm2 > EPS_CAUSAL:
            accepted.append(x / np.sqrt(norm2))
    if len(accepted) < 10:
        raise SamplingError(
            f"only {len(accepted)} spacelike directions in {drawn} draws; "
            "the metric is degenerate for unit-vector sampling here")

    coeffs = np.array([_char_coeffs(pack_jacobi(pack, x)) for x in accepted])
    spread = coeffs.max(axis=0) - coeffs.min(axis=0)
    scale = float(np.abs(coeffs).max())
    residual = float(spread.max()) / (1.0 + scale)

    k = int(spread.argmax())
    lo = int(coeffs[:, k].argmin())
    hi = int(coeffs[:, k].argmax())
    witness = {
        "point": _point_list(pack.point),
        "coefficient_index": k + 1,
        "vector_low": _point_list(accepted[lo]),
        "vector_high": _point_list(accepted[hi]),
    }

    mean = coeffs.mean(axis=0)
    roots = np.roots(np.concatenate(([1.0], mean)))
    roots = sorted(roots, key=lambda z: (z.real, z.imag))
    extra = {
        "spectrum": [[float(z.real), float(z.imag)] for z in roots],
        "coefficients": [float(c) for c in mean],
        "accepted_samples": len(accepted),
    }
    return _report("osserman", residual, threshold, witness, extra)


def spectrum_matches(spectrum, target, tol: float = 1e-6):
    """Compare a reported root multiset against real target values.

    Accepts the match up to one overall sign flip of the spectrum; returns
    (matched, sign) where sign is +1 or -1 for a match and 0 otherwise.
    """
    roots = [complex(z[0], z[1]) if not np.isscalar(z) else complex(z)
             for z in spectrum]
    want = sorted(float(t) for t in target)
    if len(roots) != len(want):
        return False, 0
    for sign in (1.0, -1.0):
        flipped = sorted((sign * z for z in roots), key=lambda z: (z.real, z.imag))
        err = max(abs(z - w) for z, w in zip(flipped, want))
        if err <= tol:
            return True, int(sign)
    return False, 0


# --- duality -------------------------------------------------------------------


def check_sd_asd(M: WalkerMetric, p, threshold=None):
    """Self-dual and anti-self-dual reports from the Weyl star split."""
    threshold = DEFAULT_THRESHOLD if threshold is None else float(threshold)
    split = weyl_split_at(M, p)
    scale = _frob(split.weyl_operator)
    side = sd_vanishing_side()
    if side == "minus":
        sd_raw, asd_raw = split.wminus_norm, split.wplus_norm
    else:
        sd_raw, asd_raw = split.wplus_norm, split.wminus_norm
    witness = {"point": _point_list(split.point)}
    extra = {
        "wplus_norm": float(split.wplus_norm),
        "wminus_norm": float(split.wminus_norm),
        "self_dual_vanishing_side": side,
    }
    sd = _report("self_dual", sd_raw / (1.0 + scale), threshold, dict(witness), dict(extra))
    asd = _report("anti_self_dual", asd_raw / (1.0 + scale), threshold, dict(witness), dict(extra))
    return sd, asd


def conformally_osserman_report(sd: PropertyReport, asd: PropertyReport) -> PropertyReport:
    """Holds exactly when either duality half vanishes."""
    residual = min(sd.residual, asd.residual)
    threshold = max(sd.threshold, asd.threshold)
    witness = sd.witness
    return _report("conformally_osserman", residual, threshold, dict(witness or {}),
                   {"from": ["self_dual", "anti_self_dual"]})


# --- curvature range/kernel confinement ----------------------------------------


def check_range_kernel_P(M: WalkerMetric, p, threshold=None,
                         pack: PointCurvature | None = None) -> PropertyReport:
    """Curvature range inside span{d1,d2} and kernel containing it.

    Checks that every value R(e_i,e_j)e_k has vanishing components 3,4 and
    that the operator annihilates any argument from the plane.
    """
    if pack is None:
        pack = point_curvature(M, p)
    threshold = DEFAULT_THRESHOLD if threshold is None else float(threshold)
    R = pack.upper  # [l, k, i, j]
    mask = np.zeros(R.shape, dtype=bool)
    mask[2:, :, :, :] = True     # output leaves the plane
    mask[:, :2, :, :] = True     # plane vector as the transported argument
    mask[:, :, :2, :] = True     # plane vector in the first operator slot
    mask[:, :, :, :2] = True     # plane vector in the second operator slot
    vals = np.where(mask, np.abs(R), 0.0)
    scale = float(np.abs(R).max())
    residual = float(vals.max()) / (1.0 + scale)
    l, k, i, j = np.unravel_index(int(vals.argmax()), vals.shape)
    witness = {"point": _point_list(pack.point),
               "indices": [int(l) + 1, int(k) + 1, int(i) + 1, int(j) + 1]}
    return _report("range_kernel_plane", residual, threshold, witness)


# --- warping-function coefficient conditions ------------------------------------


_THM_KINDS = ("thm13_3c", "thm15_3", "thm13_2")


def check_thm_conditions(p_field: ScalarField, q_field: ScalarField,
                         s_field: ScalarField, point, which: str,
                         xi: ScalarField | None = None,
                         eta: ScalarField | None = None,
                         threshold=None) -> PropertyReport:
    """Closed-form conditions on the warping coefficients p, q, s.

    which selects the residual set:
      thm13_3c -- p^2 = 2 p_4, q^2 = 2 q_3, pq = p_3 + q_4
      thm15_3  -- p_3 = q_4
      thm13_2  -- p_3 = q_4 and g34*p_3 - x1*p_34 - x2*p_33 - s_34 = 0,
                  with g34 = x1 p + x2 q + s + xi(x1,x4) + eta(x2,x3)
    """
    if which not in _THM_KINDS:
        raise UsageError(f"unknown condition set {which!r}")
    threshold = DEFAULT_THRESHOLD if threshold is None else float(threshold)

    pt = np.asarray(point, dtype=np.float64)
    if pt.shape == (4,):
        base = pt[2:]
    elif pt.shape == (2,):
        base = pt
    else:
        raise UsageError("point must have 2 or 4 coordinates")

    jp = eval_jet2(p_field, base)
    jq = eval_jet2(q_field, base)
    pv, p3, p4 = jp.value, jp.grad[0], jp.grad[1]
    qv, q3, q4 = jq.value, jq.grad[0], jq.grad[1]

    def ratio(terms):
        total = terms[0]
        for t in terms[1:]:
            total = total - t
        return abs(total) / (1.0 + max(abs(t) for t in terms))

    if which == "thm13_3c":
        named = [
            ("p^2-2p_4", ratio([pv * pv, 2.0 * p4])),
            ("q^2-2q_3", ratio([qv * qv, 2.0 * q3])),
            ("pq-p_3-q_4", ratio([pv * qv, p3, q4])),
        ]
    elif which == "thm15_3":
        named = [("p_3-q_4", ratio([p3, q4]))]
    else:
        if pt.shape != (4,):
            raise UsageError("the anti-self-dual conditions need a 4-coordinate point")
        xi = ZERO if xi is None else xi
        eta = ZERO if eta is None else eta
        if not coords_used(xi) <= {0, 3}:
            raise UsageError("xi may only reference x1 and x4")
        if not coords_used(eta) <= {1, 2}:
            raise UsageError("eta may only reference x2 and x3")
        dp3 = derivative(p_field, 2)
        p3v = eval_value(dp3, pt)
        p33 = eval_value(derivative(dp3, 2), pt)
        p34 = eval_value(derivative(dp3, 3), pt)
        q4v = eval_value(derivative(q_field, 3), pt)
        s34 = eval_value(derivative(derivative(s_field, 2), 3), pt)
        sv = eval_value(s_field, pt)
        g34v = pt[0] * pv + pt[1] * qv + sv + eval_value(xi, pt) + eval_value(eta, pt)
        named = [
            ("p_3-q_4", ratio([p3v, q4v])),
            ("g34*p_3-x1*p_34-x2*p_33-s_34",
             ratio([g34v * p3v, pt[0] * p34, pt[1] * p33, s34])),
        ]

    label, residual = max(named, key=lambda item: item[1])
    witness = {"point": _point_list(pt), "condition": label}
    extra = {"residuals": {name: float(r) for name, r in named}}
    return _report(which, residual, threshold, witness, extra)


def pq_condition_residuals(p_field: ScalarField, q_field: ScalarField, point) -> dict:
    """All five coefficient identities behind the rigid p,q families.

    Returns normalized residuals keyed by formula; a family member satisfies
    every one of them wherever it is defined.
    """
    pt = np.asarray(point, dtype=np.float64)
    base = pt[2:] if pt.shape == (4,) else pt
    jp = eval_jet2(p_field, base)
    jq = eval_jet2(q_field, base)
    pv, p3, p4 = jp.value, jp.grad[0], jp.grad[1]
    qv, q3, q4 = jq.value, jq.grad[0], jq.grad[1]

    def ratio(terms):
        total = terms[0]
        for t in terms[1:]:
            total = total - t
        return float(abs(total) / (1.0 + max(abs(t) for t in terms)))

    return {
        "p^2-2p_4": ratio([pv * pv, 2.0 * p4]),
        "q^2-2q_3": ratio([qv * qv, 2.0 * q3]),
        "pq-p_3-q_4": ratio([pv * qv, p3, q4]),
        "p_3-pq/2": ratio([p3, 0.5 * pv * qv]),
        "q_4-pq/2": ratio([q4, 0.5 * pv * qv]),
    }


# --- aggregate evaluation --------------------------------------------------------


def evaluate_all_properties(M: WalkerMetric, point, samples: int = 50, seed: int = 0,
                            thresholds: dict | None = None) -> dict:
    """All property reports at one point, keyed by property name."""
    pack = point_curvature(M, point)
    reports = {}
    reports["einstein"] = check_einstein(
        M, point, _thr(thresholds, "einstein"), pack=pack)
    reports["ricci_flat"] = check_ricci_flat(
        M, point, _thr(thresholds, "ricci_flat"), pack=pack)
    for kind in COMMUTING_KINDS:
        reports[kind] = check_commuting(
            M, point, kind, _thr(thresholds, kind), pack=pack)
    reports["nilpotent_jacobi"] = check_nilpotent_jacobi(
        M, point, samples, seed, _thr(thresholds, "nilpotent_jacobi"), pack=pack)
    reports["osserman"] = check_osserman_sampled(
        M, point, samples, seed,
        _thr(thresholds, "osserman", OSSERMAN_THRESHOLD), pack=pack)
    sd, asd = check_sd_asd(M, point, _thr(thresholds, "self_dual"))
    if thresholds and "anti_self_dual" in thresholds:
        asd = _report(asd.name, asd.residual, float(thresholds["anti_self_dual"]),
                      asd.witness, asd.extra)
    reports["self_dual"] = sd
    reports["anti_self_dual"] = asd
    reports["conformally_osserman"] = conformally_osserman_report(sd, asd)
    reports["range_kernel_plane"] = check_range_kernel_P(
        M, point, _thr(thresholds, "range_kernel_plane"), pack=pack)
    return reports


# --- implication rules -----------------------------------------------------------

# Valid for every metric handled here.
GENERAL_IMPLICATIONS = (
    ("ricci_flat", "einstein"),
    ("osserman", "einstein"),
    ("nilpotent_jacobi", "ricci_flat"),
    ("nilpotent_jacobi", "osserman"),
)

# On restricted metrics (g33 = g44 = 0) each class is an equivalence class,
# and the first class implies the second.
RESTRICTED_EQUIVALENCE_CLASSES = (
    ("einstein", "ricci_flat", "osserman", "nilpotent_jacobi",
     "jacobi_jacobi", "curvature_jacobi", "range_kernel_plane"),
    ("jacobi_ricci", "curvature_ricci", "curvature_curvature"),
)


def implication_violations(reports: dict, restricted: bool) -> list:
    """Consistency check of one point's verdicts against the known implications."""
    holds = {name: rep.verdict == "holds" for name, rep in reports.items()}
    out = []
    for a, b in GENERAL_IMPLICATIONS:
        if holds.get(a) and not holds.get(b, True):
            out.append(f"{a} holds but {b} fails")
    if restricted:
        for cls in RESTRICTED_EQUIVALENCE_CLASSES:
            present = [n for n in cls if n in holds]
            values = {holds[n] for n in present}
            if len(values) > 1:
                state = ", ".join(f"{n}={'holds' if holds[n] else 'fails'}"
                                  for n in present)
                out.append(f"restricted equivalence broken: {state}")
        strong, weak = RESTRICTED_EQUIVALENCE_CLASSES
        if any(holds.get(n) for n in strong):
            for n in weak:
                if n in holds and not holds[n]:
                    src = next(m for m in strong if holds.get(m))
                    out.append(f"{src} holds but {n} fails on a restricted metric")
    return out
