"""Pointwise curvature operators: Ricci, Jacobi, skew curvature, Weyl split.

Conventions. The Ricci tensor is rho(x,y) = Tr{z -> R(z,x)y}; the Ricci
operator is the inverse metric applied to it, with rows indexing output
components. The Jacobi operator of x is J(x): y -> R(y,x)x. The scalar
curvature is the trace of the Ricci operator.

The Hodge split works on the ordered 2-form basis e1^e2, e1^e3, e1^e4, e2^e3,
e2^e4, e3^e4 with the dx1^dx2^dx3^dx4 orientation; det(g) = 1 in the Walker
frame, so the volume form has unit coefficient. Which star eigenspace counts
as "self-dual" is calibrated once against a family known to be self-dual and
exposed via calibration_info().
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import UsageError
from .walker import (
    CurvatureTensor, WalkerMetric, curvature_at, inverse_metric_at, metric_at,
)

# Ordered basis of 2-forms; index pairs are 0-based coordinates.
LAMBDA2_BASIS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@dataclass
class PointCurvature:
    """Everything curvature-related at one point, computed once and shared."""

    metric: np.ndarray
    inverse: np.ndarray
    curvature: CurvatureTensor
    upper: np.ndarray          # Rup[l,k,i,j] = component l of R(di,dj)dk
    ricci_tensor: np.ndarray
    ricci_operator: np.ndarray
    scalar_curvature: float
    point: tuple


def point_curvature(M: WalkerMetric, p) -> PointCurvature:
    curv = curvature_at(M, p)
    g = metric_at(M, p)
    ginv = inverse_metric_at(M, p)
    S = curv.components
    upper = np.einsum("lm,ijkm->lkij", ginv, S)
    # rho_ij = Tr{z -> R(z, di) dj} = sum_k (component k of R(dk, di) dj).
    ricci_tensor = np.einsum("kjki->ij", upper)
    ricci_operator = ginv @ ricci_tensor
    scalar = float(np.trace(ricci_operator))
    return PointCurvature(
        metric=g,
        inverse=ginv,
        curvature=curv,
        upper=upper,
        ricci_tensor=ricci_tensor,
        ricci_operator=ricci_operator,
        scalar_curvature=scalar,
        point=curv.point,
    )


def ricci_at(M: WalkerMetric, p) -> tuple[np.ndarray, np.ndarray]:
    """(Ricci tensor, Ricci operator) at p."""
    pack = point_curvature(M, p)
    return pack.ricci_tensor, pack.ricci_operator


def scalar_curvature_at(M: WalkerMetric, p) -> float:
    return point_curvature(M, p).scalar_curvature


def _vec4(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.shape != (4,):
        raise UsageError("tangent vectors must have 4 components")
    return v


def pack_jacobi(pack: PointCurvature, x) -> np.ndarray:
    """J(x): y -> R(y, x) x as a 4x4 matrix acting on components."""
    v = _vec4(x)
    return np.einsum("lkmj,j,k->lm", pack.upper, v, v)


def pack_jacobi_polarized(pack: PointCurvature, x, y) -> np.ndarray:
    """Symmetric bilinear polarization; diagonal restriction is pack_jacobi."""
    u = _vec4(x)
    v = _vec4(y)
    a = np.einsum("lkmj,j,k->lm", pack.upper, u, v)
    b = np.einsum("lkmj,j,k->lm", pack.upper, v, u)
    return 0.5 * (a + b)


def pack_skew(pack: PointCurvature, x, y) -> np.ndarray:
    """R(x, y): z -> R(x, y) z as a 4x4 matrix; g-skew-adjoint."""
    u = _vec4(x)
    v = _vec4(y)
    return np.einsum("lkij,i,j->lk", pack.upper, u, v)


def jacobi_at(M: WalkerMetric, p, x) -> np.ndarray:
    return pack_jacobi(point_curvature(M, p), x)


def jacobi_polarized_at(M: WalkerMetric, p, x, y) -> np.ndarray:
    return pack_jacobi_polarized(point_curvature(M, p), x, y)


def skew_curv_op_at(M: WalkerMetric, p, x, y) -> np.ndarray:
    return pack_skew(point_curvature(M, p), x, y)


# --- Weyl tensor and the Hodge split ----------------------------------------

def _levi_civita4() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in permutations(range(4)):
        # Parity by counting inversions.
        inv = sum(1 for a in range(4) for b in range(a + 1, 4) if perm[a] > perm[b])
        eps[perm] = -1.0 if inv % 2 else 1.0
    return eps


_EPS4 = _levi_civita4()


@dataclass
class WeylSplit:
    """Weyl operator on 2-forms with its star-eigenspace projections."""

    wplus_norm: float
    wminus_norm: float
    scalar_curvature: float
    weyl_operator: np.ndarray   # 6x6 in the LAMBDA2_BASIS ordering
    star: np.ndarray            # 6x6 Hodge star, squares to identity
    wplus_block: np.ndarray
    wminus_block: np.ndarray
    point: tuple


def weyl_split_at(M: WalkerMetric, p) -> WeylSplit:
    """Weyl tensor as a 2-form operator, split by the Hodge star projections.

    The subtraction uses the Ricci contraction taken from the curvature
    components themselves, which keeps the Weyl part exactly trace-free under
    that same contraction whatever the global sign convention.
    """
    pack = point_curvature(M, p)
    g = pack.metric
    ginv = pack.inverse
    S = pack.curvature.components

    det = float(np.linalg.det(g))
    if abs(det - 1.0) > 1e-12:
        raise UsageError("metric determinant deviates from the Walker frame value 1")

    # Contraction-consistent Ricci and scalar for the decomposition.
    ric = np.einsum("ik,ijkl->jl", ginv, S)
    tau = float(np.einsum("jl,jl->", ginv, ric))

    kn_ric = (np.einsum("ik,jl->ijkl", g, ric) - np.einsum("il,jk->ijkl", g, ric)
              + np.einsum("jl,ik->ijkl", g, ric) - np.einsum("jk,il->ijkl", g, ric))
    kn_g = np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g)
    W = S - 0.5 * kn_ric + (tau / 6.0) * kn_g

    # Raise the last index pair: Wup[a,b,c,d] = W_{abmn} g^{mc} g^{nd}.
    Wup = np.einsum("abmn,mc,nd->abcd", W, ginv, ginv)
    epsup = np.einsum("abmn,mc,nd->abcd", _EPS4, ginv, ginv)

    k = len(LAMBDA2_BASIS)
    W6 = np.zeros((k, k))
    star = np.zeros((k, k))
    for A, (a, b) in enumerate(LAMBDA2_BASIS):
        for B, (c, d) in enumerate(LAMBDA2_BASIS):
            W6[A, B] = Wup[a, b, c, d]
            star[A, B] = epsup[a, b, c, d]

    p_plus = 0.5 * (np.eye(k) + star)
    p_minus = np.eye(k) - p_plus
    wplus_block = p_plus @ W6 @ p_plus
    wminus_block = p_minus @ W6 @ p_minus

    return WeylSplit(
        wplus_norm=float(np.linalg.norm(wplus_block)),
        wminus_norm=float(np.linalg.norm(wminus_block)),
        scalar_curvature=pack.scalar_curvature,
        weyl_operator=W6,
        star=star,
        wplus_block=wplus_block,
        wminus_block=wminus_block,
        point=pack.point,
    )


# --- self-dual labeling calibration -----------------------------------------

_SD_VANISHING_SIDE: str | None = None


def _calibrate_sd_side() -> str:
    """Decide which star eigenspace projection vanishes on self-dual metrics.

    Evaluated once on a warped product known to be self-dual (warping function
    affine in x1, x2 over base-only profiles) at a generic probe point.
    """
    from .expr import parse_field

    metric = WalkerMetric(g34=parse_field("x1*x3^2 + x2*x4 + x3*x4"))
    split = weyl_split_at(metric, (0.3, -0.7, 1.1, 0.9))
    scale = 1.0 + float(np.linalg.norm(split.weyl_operator))
    plus_res = split.wplus_norm / scale
    minus_res = split.wminus_norm / scale
    if minus_res <= 1e-9 and plus_res >= 1e-3:
        return "minus"
    if plus_res <= 1e-9 and minus_res >= 1e-3:
        return "plus"
    raise UsageError(
        f"self-dual calibration is ambiguous: plus={plus_res:.3e} minus={minus_res:.3e}")


def sd_vanishing_side() -> str:
    """'minus' or 'plus': the projection that vanishes for self-dual metrics."""
    global _SD_VANISHING_SIDE
    if _SD_VANISHING_SIDE is None:
        _SD_VANISHING_SIDE = _calibrate_sd_side()
    return _SD_VANISHING_SIDE


def calibration_info() -> dict:
    """Constants fixed by calibration, included in report payloads."""
    from .walker import TABLE_SIGN

    return {
        "curvature_table_sign": TABLE_SIGN,
        "self_dual_vanishing_side": sd_vanishing_side(),
        "ricci_operator_orientation": "rows index output components",
        "osserman_spectrum_normalization": "unit spacelike, sign flip accepted",
    }
