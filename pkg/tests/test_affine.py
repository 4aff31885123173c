"""Two-dimensional affine connections, their Ricci split, and extensions."""

import numpy as np
import pytest

from walkergeom.affine import (
    AffineConnection2,
    affine_curvature_at,
    affine_ricci_at,
    check_affine_osserman,
    pq_connection,
    riemannian_extension,
)
from walkergeom.errors import UsageError
from walkergeom.expr import ZERO, eval_value, parse_field, ricci_flat_pq, x3, x4
from walkergeom.jets import eval_jet2

BASE_POINTS = ((1.1, 0.9), (0.6, -1.2), (-0.5, 1.3))


def test_symbols_must_be_base_only():
    with pytest.raises(UsageError):
        AffineConnection2(gamma_34_3=parse_field("x1*x3"))


def test_flat_connection_has_zero_curvature():
    conn = AffineConnection2()
    for b in BASE_POINTS:
        assert np.abs(affine_curvature_at(conn, b)).max() == 0.0
        ric = affine_ricci_at(conn, b)
        assert np.abs(ric.tensor).max() == 0.0


def test_ricci_splits_exactly():
    conn = AffineConnection2(gamma_34_3=x3, gamma_44_4=x3, gamma_33_4=x4)
    for b in BASE_POINTS:
        ric = affine_ricci_at(conn, b)
        assert (ric.tensor == ric.sym + ric.anti).all()
        assert (ric.sym == ric.sym.T).all()
        assert (ric.anti == -ric.anti.T).all()


def test_antisymmetric_ricci_connection():
    conn = AffineConnection2(gamma_34_3=x3, gamma_44_4=x3)
    for b in BASE_POINTS:
        ric = affine_ricci_at(conn, b)
        assert ric.sym == pytest.approx(np.zeros((2, 2)))
        assert ric.anti == pytest.approx(np.array([[0.0, -1.0], [1.0, 0.0]]))
        K = affine_curvature_at(conn, b)
        assert K == pytest.approx(np.eye(2))
    assert check_affine_osserman(conn, BASE_POINTS[0]).holds


def test_symmetric_ricci_connection():
    conn = AffineConnection2(gamma_33_4=x4)
    for b in BASE_POINTS:
        ric = affine_ricci_at(conn, b)
        assert ric.anti == pytest.approx(np.zeros((2, 2)))
        assert ric.sym == pytest.approx(np.array([[1.0, 0.0], [0.0, 0.0]]))
    rep = check_affine_osserman(conn, BASE_POINTS[0])
    assert not rep.holds and rep.residual > 1e-3


def test_profile_pair_connection_closed_form_ricci():
    p_field, q_field = x3, x4
    conn = pq_connection(p_field, q_field)
    assert eval_value(conn.gamma_34_3, (0.0, 0.0, 1.1, 0.9)) == pytest.approx(-0.55)
    for b in BASE_POINTS:
        jp, jq = eval_jet2(p_field, b), eval_jet2(q_field, b)
        pv, p3, p4 = jp.value, jp.grad[0], jp.grad[1]
        qv, q3, q4 = jq.value, jq.grad[0], jq.grad[1]
        closed = np.array([
            [0.5 * q3 - 0.25 * qv * qv, 0.25 * pv * qv - 0.5 * q4],
            [0.25 * pv * qv - 0.5 * p3, 0.5 * p4 - 0.25 * pv * pv],
        ])
        ric = affine_ricci_at(conn, b)
        assert ric.tensor == pytest.approx(closed, abs=1e-12)


def test_ricci_flat_profile_pair_gives_flat_ricci():
    conn = pq_connection(*ricci_flat_pq(1.0, 1.0, 1.0))
    for b in BASE_POINTS:
        assert np.abs(affine_ricci_at(conn, b).tensor).max() <= 1e-12
    assert check_affine_osserman(conn, BASE_POINTS[0]).holds


def test_closed_form_vs_general_contraction_on_random_cubics():
    rng = np.random.Generator(np.random.Philox(17))
    for _ in range(5):
        c = rng.uniform(-1.5, 1.5, 8)
        p_field = parse_field(f"{c[0]} + {c[1]}*x3 + {c[2]}*x4^2 + {c[3]}*x3^2*x4")
        q_field = parse_field(f"{c[4]} + {c[5]}*x4 + {c[6]}*x3^2 + {c[7]}*x3*x4^2")
        conn = pq_connection(p_field, q_field)
        for b in BASE_POINTS:
            jp, jq = eval_jet2(p_field, b), eval_jet2(q_field, b)
            pv, p3, p4 = jp.value, jp.grad[0], jp.grad[1]
            qv, q3, q4 = jq.value, jq.grad[0], jq.grad[1]
            closed = np.array([
                [0.5 * q3 - 0.25 * qv * qv, 0.25 * pv * qv - 0.5 * q4],
                [0.25 * pv * qv - 0.5 * p3, 0.5 * p4 - 0.25 * pv * pv],
            ])
            got = affine_ricci_at(conn, b).tensor
            scale = 1.0 + np.abs(closed).max()
            assert np.abs(got - closed).max() / scale < 1e-10


def test_affine_jacobi_vanishes_for_flat_connection():
    rep = check_affine_osserman(AffineConnection2(), BASE_POINTS[0])
    assert rep.holds and rep.residual == 0.0


def test_extension_metric_assembly():
    p_field, q_field = ricci_flat_pq(1.0, 1.0, 1.0)
    conn = pq_connection(p_field, q_field)
    M = riemannian_extension(conn)
    assert M.restricted
    pt = (0.3, -0.7, 1.1, 0.9)
    want = (0.3 * eval_value(p_field, pt) + -0.7 * eval_value(q_field, pt))
    assert eval_value(M.g34, pt) == pytest.approx(want)

    M2 = riemannian_extension(conn, xi34=parse_field("x3*x4"))
    assert M2.restricted
    assert eval_value(M2.g34, pt) == pytest.approx(want + 1.1 * 0.9)


def test_extension_restrictedness_tracks_fiber_symbols():
    conn = AffineConnection2(gamma_34_3=x3, gamma_44_4=x3)
    assert not riemannian_extension(conn).restricted  # g44 picks up -2*x2*x3
    only_g34 = AffineConnection2(gamma_34_3=x3)
    assert riemannian_extension(only_g34).restricted
    assert not riemannian_extension(only_g34, xi33=parse_field("x3")).restricted


def test_extension_validates_deformation_terms():
    with pytest.raises(UsageError):
        riemannian_extension(AffineConnection2(), xi34=parse_field("x1"))


def test_flat_extension_is_flat():
    M = riemannian_extension(AffineConnection2())
    from walkergeom.walker import curvature_at
    assert np.abs(curvature_at(M, (0.3, -0.7, 1.1, 0.9)).components).max() == 0.0


def test_base_point_validation():
    with pytest.raises(UsageError):
        affine_ricci_at(AffineConnection2(), (1.0, 2.0, 3.0, 4.0))
