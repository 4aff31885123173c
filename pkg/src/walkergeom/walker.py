"""Walker metrics in the canonical frame and their curvature.

The metric matrix in coordinates (x1, x2, x3, x4) is [[0, I2], [I2, C]] with
C = [[g33, g34], [g34, g44]], so g(d1,d3) = g(d2,d4) = 1. Its determinant is 1
and the inverse is the exact block matrix [[-C, I2], [I2, 0]].

Curvature follows the convention R(x,y) = nabla_x nabla_y - nabla_y nabla_x
- nabla_[x,y], lowered as R_ijkl = g(R(di,dj)dk, dl). Christoffel derivatives
come from first-order jet arithmetic over the metric's 2-jets, so no third
derivatives of the coefficient fields are ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .expr import ScalarField, ZERO, is_zero
from .jets import eval_jet2

# The closed-form component table carries a single global sign relative to the
# general pipeline; fixed once by the oracle suite and reported.
TABLE_SIGN = 1.0


def _zero_field() -> ScalarField:
    return ZERO


@dataclass
class WalkerMetric:
    g34: ScalarField
    g33: ScalarField = field(default_factory=_zero_field)
    g44: ScalarField = field(default_factory=_zero_field)

    @property
    def restricted(self) -> bool:
        """True when g33 and g44 are the constant-zero tree."""
        return is_zero(self.g33) and is_zero(self.g44)


@dataclass
class CurvatureTensor:
    """Lowered curvature components R[i,j,k,l] (0-based axes) at one point."""

    components: np.ndarray
    point: tuple
    symmetry_residual: float
    bianchi_residual: float

    def component(self, i: int, j: int, k: int, l: int) -> float:
        """Access with 1-based indices, matching the R_{ijkl} labels."""
        return float(self.components[i - 1, j - 1, k - 1, l - 1])


def _point4(p) -> np.ndarray:
    pt = np.asarray(p, dtype=np.float64)
    if pt.shape != (4,):
        raise UsageError("Walker metrics require 4-coordinate points")
    return pt


def _coefficient_jets(M: WalkerMetric, p):
    """2-jets of g33, g44, g34 bundled as value/gradient/Hessian tables.

    Returns (Gv, Gg, Gh) with Gv[a,b] = g_ab, Gg[a,b,c] = d_c g_ab and
    Gh[a,b,c,m] = d_c d_m g_ab; symmetric storage is exact by construction.
    """
    pt = _point4(p)
    j33 = eval_jet2(M.g33, pt)
    j44 = eval_jet2(M.g44, pt)
    j34 = eval_jet2(M.g34, pt)

    Gv = np.zeros((4, 4))
    Gv[0, 2] = Gv[2, 0] = 1.0
    Gv[1, 3] = Gv[3, 1] = 1.0
    Gv[2, 2] = j33.value
    Gv[3, 3] = j44.value
    Gv[2, 3] = Gv[3, 2] = j34.value

    Gg = np.zeros((4, 4, 4))
    Gg[2, 2] = j33.grad
    Gg[3, 3] = j44.grad
    Gg[2, 3] = Gg[3, 2] = j34.grad

    Gh = np.zeros((4, 4, 4, 4))
    Gh[2, 2] = j33.hess
    Gh[3, 3] = j44.hess
    Gh[2, 3] = Gh[3, 2] = j34.hess
    return Gv, Gg, Gh


def metric_at(M: WalkerMetric, p) -> np.ndarray:
    pt = _point4(p)
    Gv = np.zeros((4, 4))
    Gv[0, 2] = Gv[2, 0] = 1.0
    Gv[1, 3] = Gv[3, 1] = 1.0
    Gv[2, 2] = eval_jet2(M.g33, pt).value
    Gv[3, 3] = eval_jet2(M.g44, pt).value
    Gv[2, 3] = Gv[3, 2] = eval_jet2(M.g34, pt).value
    return Gv


def inverse_metric_at(M: WalkerMetric, p) -> np.ndarray:
    """Exact block inverse [[-C, I2], [I2, 0]]; det(g) = 1 in this frame."""
    pt = _point4(p)
    inv = np.zeros((4, 4))
    inv[0, 2] = inv[2, 0] = 1.0
    inv[1, 3] = inv[3, 1] = 1.0
    inv[0, 0] = -eval_jet2(M.g33, pt).value
    inv[1, 1] = -eval_jet2(M.g44, pt).value
    inv[0, 1] = inv[1, 0] = -eval_jet2(M.g34, pt).value
    return inv


def _inverse_and_derivative(Gv, Gg):
    """Block inverse and its first derivatives from the coefficient jets."""
    inv = np.zeros((4, 4))
    inv[0, 2] = inv[2, 0] = 1.0
    inv[1, 3] = inv[3, 1] = 1.0
    inv[0, 0] = -Gv[2, 2]
    inv[1, 1] = -Gv[3, 3]
    inv[0, 1] = inv[1, 0] = -Gv[2, 3]

    dinv = np.zeros((4, 4, 4))
    dinv[0, 0] = -Gg[2, 2]
    dinv[1, 1] = -Gg[3, 3]
    dinv[0, 1] = dinv[1, 0] = -Gg[2, 3]
    return inv, dinv


def _christoffel_jets(M: WalkerMetric, p):
    """Gamma[k,i,j] and dGamma[k,i,j,m] = d_m Gamma^k_ij at p."""
    Gv, Gg, Gh = _coefficient_jets(M, p)
    inv, dinv = _inverse_and_derivative(Gv, Gg)

    # Lowered symbols L[l,i,j] = (d_i g_jl + d_j g_il - d_l g_ij)/2 and their
    # coordinate derivatives.
    L = 0.5 * (np.einsum("jli->lij", Gg) + np.einsum("ilj->lij", Gg)
               - np.einsum("ijl->lij", Gg))
    dL = 0.5 * (np.einsum("jlim->lijm", Gh) + np.einsum("iljm->lijm", Gh)
                - np.einsum("ijlm->lijm", Gh))

    Gamma = np.einsum("kl,lij->kij", inv, L)
    dGamma = (np.einsum("klm,lij->kijm", dinv, L)
              + np.einsum("kl,lijm->kijm", inv, dL))
    return Gamma, dGamma, Gv, inv


def christoffel_at(M: WalkerMetric, p) -> np.ndarray:
    """Gamma[k,i,j] with the derivative index pair (i,j) exactly symmetric."""
    Gamma, _, _, _ = _christoffel_jets(M, p)
    return Gamma


def curvature_upper_at(M: WalkerMetric, p):
    """Raised curvature Rup[l,k,i,j] = component l of R(di,dj)dk, plus the
    metric and inverse used to build it."""
    Gamma, dGamma, Gv, inv = _christoffel_jets(M, p)
    Rup = (np.einsum("ljki->lkij", dGamma) - np.einsum("likj->lkij", dGamma)
           + np.einsum("lim,mjk->lkij", Gamma, Gamma)
           - np.einsum("ljm,mik->lkij", Gamma, Gamma))
    return Rup, Gv, inv


def curvature_at(M: WalkerMetric, p) -> CurvatureTensor:
    """Lowered curvature tensor with enforced index symmetries.

    The raw coordinate formula is lowered with the metric, the deviation from
    the skew/pair symmetries is recorded as a diagnostic residual, and the
    returned components are the symmetrized projection.
    """
    pt = _point4(p)
    Rup, Gv, _ = curvature_upper_at(M, pt)
    R = np.einsum("lm,mkij->ijkl", Gv, Rup)

    scale = float(np.max(np.abs(R)))
    denom = 1.0 + scale
    skew_ij = np.max(np.abs(R + np.einsum("jikl->ijkl", R)))
    skew_kl = np.max(np.abs(R + np.einsum("ijlk->ijkl", R)))
    pair = np.max(np.abs(R - np.einsum("klij->ijkl", R)))
    symmetry_residual = float(max(skew_ij, skew_kl, pair) / denom)

    A = 0.25 * (R - np.einsum("jikl->ijkl", R) - np.einsum("ijlk->ijkl", R)
                + np.einsum("jilk->ijkl", R))
    S = 0.5 * (A + np.einsum("klij->ijkl", A))

    bianchi = S + np.einsum("iklj->ijkl", S) + np.einsum("iljk->ijkl", S)
    bianchi_residual = float(np.max(np.abs(bianchi)) / denom)

    return CurvatureTensor(
        components=S,
        point=tuple(float(c) for c in pt),
        symmetry_residual=symmetry_residual,
        bianchi_residual=bianchi_residual,
    )


# The nine independent component families of the restricted closed form, as
# (i, j, k, l, builder) with 1-based indices. v, g, h are the value, gradient,
# and Hessian of g34 at the point (0-based coordinate axes).
_TABLE = (
    (1, 3, 3, 4, lambda v, g, h: -0.25 * (g[0] * g[1] - 2.0 * h[0, 2])),
    (1, 3, 1, 4, lambda v, g, h: 0.5 * h[0, 0]),
    (1, 4, 3, 4, lambda v, g, h: -0.25 * (-(g[0] * g[0]) + 2.0 * h[0, 3])),
    (1, 3, 2, 4, lambda v, g, h: 0.5 * h[0, 1]),
    (2, 3, 3, 4, lambda v, g, h: -0.25 * (g[1] * g[1] - 2.0 * h[1, 2])),
    (1, 4, 2, 3, lambda v, g, h: 0.5 * h[0, 1]),
    (2, 4, 3, 4, lambda v, g, h: -0.25 * (-(g[0] * g[1]) + 2.0 * h[1, 3])),
    (2, 3, 2, 4, lambda v, g, h: 0.5 * h[1, 1]),
    (3, 4, 3, 4, lambda v, g, h: -0.5 * (-(v * g[0] * g[1]) + 2.0 * h[2, 3])),
)


def curvature_table_restricted(M: WalkerMetric, p) -> CurvatureTensor:
    """Closed-form curvature of a restricted metric, the pipeline's oracle.

    Fills the nine tabulated component families from the 2-jet of g34 alone,
    completes them by the index symmetries, and leaves everything else zero.
    """
    if not M.restricted:
        raise UsageError("closed-form curvature requires a restricted metric (g33 = g44 = 0)")
    pt = _point4(p)
    j = eval_jet2(M.g34, pt)
    S = np.zeros((4, 4, 4, 4))
    for i, jj, k, l, build in _TABLE:
        value = TABLE_SIGN * build(j.value, j.grad, j.hess)
        a, b, c, d = i - 1, jj - 1, k - 1, l - 1
        for (w, x, y, z, sign) in (
            (a, b, c, d, 1.0), (b, a, c, d, -1.0), (a, b, d, c, -1.0),
            (b, a, d, c, 1.0), (c, d, a, b, 1.0), (d, c, a, b, -1.0),
            (c, d, b, a, -1.0), (d, c, b, a, 1.0),
        ):
            S[w, x, y, z] = sign * value
    return CurvatureTensor(
        components=S,
        point=tuple(float(c) for c in pt),
        symmetry_residual=0.0,
        bianchi_residual=0.0,
    )
