"""Ricci, Jacobi, skew curvature operators and the Weyl half decomposition."""

import numpy as np
import pytest

from walkergeom.expr import parse_field, ricci_flat_pq
from walkergeom.operators import (
    calibration_info,
    jacobi_at,
    jacobi_polarized_at,
    point_curvature,
    ricci_at,
    scalar_curvature_at,
    sd_vanishing_side,
    skew_curv_op_at,
    weyl_split_at,
)
from walkergeom.walker import WalkerMetric, metric_at

POINTS = ((0.3, -0.7, 1.1, 0.9), (-0.4, 0.8, 0.6, -1.2), (0.9, 0.2, -0.5, 1.3))


def generic_metric():
    return WalkerMetric(g34=parse_field("x1*x3^2 - x2*sin(x4) + x1*x2"),
                        g33=parse_field("x1*x4 + x3^2"),
                        g44=parse_field("x2^2 - cos(x3)"))


def lemma_metric():
    p, q = ricci_flat_pq(1.0, 1.0, 1.0)
    from walkergeom.expr import Add, Mul, x1, x2
    return WalkerMetric(g34=Add(Mul(x1, p), Mul(x2, q)))


def test_ricci_tensor_symmetric_and_consistent():
    M = generic_metric()
    for pt in POINTS:
        ric, rho = ricci_at(M, pt)
        G = metric_at(M, pt)
        scale = 1.0 + np.abs(ric).max()
        assert np.abs(ric - ric.T).max() / scale < 1e-12
        assert np.abs(G @ rho - ric).max() / scale < 1e-12
        assert scalar_curvature_at(M, pt) == pytest.approx(np.trace(rho))


def test_pack_matches_standalone_ops():
    M = generic_metric()
    pt = POINTS[0]
    pack = point_curvature(M, pt)
    ric, rho = ricci_at(M, pt)
    assert (pack.ricci_tensor == ric).all()
    assert (pack.ricci_operator == rho).all()
    assert pack.scalar_curvature == scalar_curvature_at(M, pt)


def test_jacobi_annihilates_its_own_direction():
    M = generic_metric()
    rng = np.random.Generator(np.random.Philox(2))
    for pt in POINTS:
        for x in rng.uniform(-1.0, 1.0, (5, 4)):
            J = jacobi_at(M, pt, x)
            assert np.abs(J @ x).max() / (1.0 + np.abs(J).max()) < 1e-12


def test_jacobi_self_adjoint_for_the_metric():
    M = generic_metric()
    rng = np.random.Generator(np.random.Philox(3))
    for pt in POINTS:
        G = metric_at(M, pt)
        x = rng.uniform(-1.0, 1.0, 4)
        J = jacobi_at(M, pt, x)
        A = G @ J
        assert np.abs(A - A.T).max() / (1.0 + np.abs(A).max()) < 1e-12


def test_polarized_jacobi_diagonal_and_symmetry():
    M = generic_metric()
    rng = np.random.Generator(np.random.Philox(4))
    pt = POINTS[1]
    for _ in range(5):
        x, y = rng.uniform(-1.0, 1.0, (2, 4))
        assert jacobi_polarized_at(M, pt, x, x) == pytest.approx(
            jacobi_at(M, pt, x))
        assert jacobi_polarized_at(M, pt, x, y) == pytest.approx(
            jacobi_polarized_at(M, pt, y, x))
        # polarization identity: J(x+y) = J(x) + J(y) + 2*J(x,y)
        total = jacobi_at(M, pt, x + y)
        parts = (jacobi_at(M, pt, x) + jacobi_at(M, pt, y)
                 + 2.0 * jacobi_polarized_at(M, pt, x, y))
        assert total == pytest.approx(parts)


def test_skew_operator_antisymmetric_and_skew_adjoint():
    M = generic_metric()
    rng = np.random.Generator(np.random.Philox(6))
    for pt in POINTS:
        G = metric_at(M, pt)
        x, y = rng.uniform(-1.0, 1.0, (2, 4))
        K = skew_curv_op_at(M, pt, x, y)
        K2 = skew_curv_op_at(M, pt, y, x)
        assert K == pytest.approx(-K2)
        A = G @ K
        assert np.abs(A + A.T).max() / (1.0 + np.abs(A).max()) < 1e-12


def test_weyl_split_on_flat_metric():
    split = weyl_split_at(WalkerMetric(g34=parse_field("0")), POINTS[0])
    assert split.wplus_norm == 0.0
    assert split.wminus_norm == 0.0


def test_weyl_star_is_an_involution():
    M = generic_metric()
    split = weyl_split_at(M, POINTS[0])
    star2 = split.star @ split.star
    assert star2 == pytest.approx(np.eye(6), abs=1e-12)


def test_weyl_commutes_with_star_and_blocks_reconstruct():
    M = generic_metric()
    for pt in POINTS:
        split = weyl_split_at(M, pt)
        W = split.weyl_operator
        scale = 1.0 + np.abs(W).max()
        assert np.abs(W @ split.star - split.star @ W).max() / scale < 1e-12
        assert np.abs(W - (split.wplus_block + split.wminus_block)).max() / scale < 1e-12


def test_star_projectors_are_complementary():
    split = weyl_split_at(generic_metric(), POINTS[0])
    p_plus = 0.5 * (np.eye(6) + split.star)
    p_minus = np.eye(6) - p_plus
    assert p_plus @ p_plus == pytest.approx(p_plus, abs=1e-12)
    assert p_minus @ p_minus == pytest.approx(p_minus, abs=1e-12)
    assert p_plus @ p_minus == pytest.approx(np.zeros((6, 6)), abs=1e-12)


def test_self_dual_family_kills_the_calibrated_half():
    M = lemma_metric()
    side = sd_vanishing_side()
    for pt in POINTS:
        split = weyl_split_at(M, pt)
        dead = split.wminus_norm if side == "minus" else split.wplus_norm
        live = split.wplus_norm if side == "minus" else split.wminus_norm
        assert dead / (1.0 + np.linalg.norm(split.weyl_operator)) < 1e-9
        assert live >= 0.0


def test_calibration_constants_frozen():
    info = calibration_info()
    assert info["self_dual_vanishing_side"] in ("plus", "minus")
    assert info["curvature_table_sign"] in (1.0, -1.0)
    assert set(info) >= {"self_dual_vanishing_side", "curvature_table_sign",
                         "osserman_spectrum_normalization",
                         "ricci_operator_orientation"}
