"""Two-dimensional affine manifolds and their Walker-metric extensions.

A torsion-free connection on the (x3, x4) plane is described by six
coordinate Christoffel symbols, each a base-only scalar field.  The module
computes the coordinate curvature operator R_A(d3,d4), the affine Ricci
tensor with its exact symmetric/antisymmetric split, a sampled nilpotency
check for the affine Jacobi operators, and the deformed extension that turns
the connection plus a symmetric form xi into a Walker metric on 4-space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .expr import ZERO, Add, Const, Mul, ScalarField, base_only, is_zero, x1, x2
from .jets import eval_jet2
from .properties import DEFAULT_THRESHOLD, PropertyReport, _report
from .walker import WalkerMetric


def _zero_field() -> ScalarField:
    return ZERO


@dataclass
class AffineConnection2:
    """Torsion-free connection symbols on the base plane.

    gamma_ab_c is the coefficient of d_c in the derivative of d_b along d_a,
    with 3 and 4 naming the base coordinates; the 34 pair equals the 43 pair.
    """

    gamma_33_3: ScalarField = field(default_factory=_zero_field)
    gamma_33_4: ScalarField = field(default_factory=_zero_field)
    gamma_34_3: ScalarField = field(default_factory=_zero_field)
    gamma_34_4: ScalarField = field(default_factory=_zero_field)
    gamma_44_3: ScalarField = field(default_factory=_zero_field)
    gamma_44_4: ScalarField = field(default_factory=_zero_field)

    def __post_init__(self):
        for name in ("gamma_33_3", "gamma_33_4", "gamma_34_3",
                     "gamma_34_4", "gamma_44_3", "gamma_44_4"):
            if not base_only(getattr(self, name)):
                raise UsageError(f"{name} must depend on x3, x4 only")

    @property
    def symbols(self):
        return (self.gamma_33_3, self.gamma_33_4, self.gamma_34_3,
                self.gamma_34_4, self.gamma_44_3, self.gamma_44_4)


def pq_connection(p_field: ScalarField, q_field: ScalarField) -> AffineConnection2:
    """Connection whose only symbols are the mixed pair -p/2, -q/2.

    Its deformed extension with xi34 = s produces the warped metric
    g34 = x1*p + x2*q + s.
    """
    return AffineConnection2(gamma_34_3=Mul(Const(-0.5), p_field),
                             gamma_34_4=Mul(Const(-0.5), q_field))


@dataclass
class AffineRicci:
    """Affine Ricci tensor in the (d3, d4) basis with its exact split.

    tensor is assembled as sym + anti, so the decomposition identity holds
    bitwise; sym is exactly symmetric and anti exactly antisymmetric.
    """

    tensor: np.ndarray
    sym: np.ndarray
    anti: np.ndarray
    point: tuple


def _point2(p) -> np.ndarray:
    pt = np.asarray(p, dtype=np.float64)
    if pt.shape != (2,):
        raise UsageError("affine evaluation expects a 2-coordinate base point")
    return pt


def _curvature_upper2(A: AffineConnection2, p2) -> np.ndarray:
    """Rup2[l,k,i,j]: component l of R_A(d_i,d_j)d_k on the base plane."""
    pt = _point2(p2)
    G = np.zeros((2, 2, 2))
    dG = np.zeros((2, 2, 2, 2))
    table = (
        ((0, 0), A.gamma_33_3, A.gamma_33_4),
        ((0, 1), A.gamma_34_3, A.gamma_34_4),
        ((1, 1), A.gamma_44_3, A.gamma_44_4),
    )
    for (a, b), low3, low4 in table:
        for l, fieldexpr in ((0, low3), (1, low4)):
            if is_zero(fieldexpr):
                continue
            jet = eval_jet2(fieldexpr, pt)
            G[l, a, b] = jet.value
            G[l, b, a] = jet.value
            dG[l, a, b, :] = jet.grad
            dG[l, b, a, :] = jet.grad
    return (np.einsum("ljki->lkij", dG) - np.einsum("likj->lkij", dG)
            + np.einsum("lim,mjk->lkij", G, G) - np.einsum("ljm,mik->lkij", G, G))


def affine_curvature_at(A: AffineConnection2, p2) -> np.ndarray:
    """R_A(d3,d4) as a 2x2 operator; column k is its value on d_{3+k}."""
    return _curvature_upper2(A, p2)[:, :, 0, 1].copy()


def affine_ricci_at(A: AffineConnection2, p2) -> AffineRicci:
    """rho_A(x,y) = Tr{z -> R_A(z,x)y}, rows indexing x."""
    pt = _point2(p2)
    Rup2 = _curvature_upper2(A, pt)
    t = np.einsum("kbka->ab", Rup2)
    sym = 0.5 * (t + t.T)
    anti = 0.5 * (t - t.T)
    return AffineRicci(tensor=sym + anti, sym=sym, anti=anti,
                       point=tuple(float(c) for c in pt))


def check_affine_osserman(A: AffineConnection2, p2, samples: int = 50,
                          seed: int = 0, threshold=None) -> PropertyReport:
    """Nilpotency of the affine Jacobi operators over sampled directions.

    A 2x2 operator is nilpotent exactly when its trace and determinant both
    vanish, which conditions far better than powering the matrix.
    """
    pt = _point2(p2)
    threshold = DEFAULT_THRESHOLD if threshold is None else float(threshold)
    Rup2 = _curvature_upper2(A, pt)
    rng = np.random.Generator(np.random.Philox(int(seed)))
    xs = rng.uniform(-1.0, 1.0, size=(int(samples), 2))
    worst = 0.0
    worst_x = xs[0]
    for x in xs:
        J = np.einsum("lkmj,j,k->lm", Rup2, x, x)
        size = float(np.linalg.norm(J))
        trace = abs(J[0, 0] + J[1, 1])
        det = abs(J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0])
        res = max(trace / (1.0 + size), det / (1.0 + size * size))
        if res >= worst:
            worst = res
            worst_x = x
    witness = {"point": [float(c) for c in pt],
               "vector": [float(c) for c in worst_x]}
    return _report("affine_osserman", worst, threshold, witness)


def riemannian_extension(A: AffineConnection2,
                         xi33: ScalarField | None = None,
                         xi34: ScalarField | None = None,
                         xi44: ScalarField | None = None) -> WalkerMetric:
    """Walker metric on 4-space built from the connection and a form xi.

    Coefficients follow g_ab = -2*x1*gamma_ab_3 - 2*x2*gamma_ab_4 + xi_ab.
    Vanishing symbols are skipped during assembly, so a connection whose only
    symbols are the mixed pair (with xi33 = xi44 = 0) yields zero coefficient
    trees and hence a restricted metric.
    """
    xi33 = ZERO if xi33 is None else xi33
    xi34 = ZERO if xi34 is None else xi34
    xi44 = ZERO if xi44 is None else xi44
    for name, f in (("xi33", xi33), ("xi34", xi34), ("xi44", xi44)):
        if not base_only(f):
            raise UsageError(f"{name} must depend on x3, x4 only")

    def assemble(g3, g4, xi):
        terms = []
        if not is_zero(g3):
            terms.append(Mul(Mul(Const(-2.0), x1), g3))
        if not is_zero(g4):
            terms.append(Mul(Mul(Const(-2.0), x2), g4))
        if not is_zero(xi):
            terms.append(xi)
        if not terms:
            return ZERO
        out = terms[0]
        for t in terms[1:]:
            out = Add(out, t)
        return out

    return WalkerMetric(
        g34=assemble(A.gamma_34_3, A.gamma_34_4, xi34),
        g33=assemble(A.gamma_33_3, A.gamma_33_4, xi33),
        g44=assemble(A.gamma_44_3, A.gamma_44_4, xi44),
    )
