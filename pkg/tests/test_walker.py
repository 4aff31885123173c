"""Metric assembly, Christoffel symbols, and the curvature pipeline."""

import numpy as np
import pytest

from walkergeom.errors import UsageError
from walkergeom.expr import parse_field
from walkergeom.walker import (
    WalkerMetric,
    christoffel_at,
    curvature_at,
    curvature_table_restricted,
    inverse_metric_at,
    metric_at,
)

POINTS = ((0.3, -0.7, 1.1, 0.9), (-0.4, 0.8, 0.6, -1.2), (0.9, 0.2, -0.5, 1.3))


def generic_metric():
    return WalkerMetric(g34=parse_field("x1*x3^2 - x2*sin(x4) + x1*x2"),
                        g33=parse_field("x1*x4 + x3^2"),
                        g44=parse_field("x2^2 - cos(x3)"))


def test_metric_block_structure():
    M = generic_metric()
    for pt in POINTS:
        G = metric_at(M, pt)
        assert (G == G.T).all()
        assert (G[:2, :2] == 0.0).all()
        assert (G[:2, 2:] == np.eye(2)).all()
        assert np.linalg.det(G) == pytest.approx(1.0, abs=1e-12)


def test_inverse_is_exact():
    M = generic_metric()
    for pt in POINTS:
        G = metric_at(M, pt)
        Ginv = inverse_metric_at(M, pt)
        assert (G @ Ginv == np.eye(4)).all()
        assert (Ginv @ G == np.eye(4)).all()


def test_restricted_flag():
    assert WalkerMetric(g34=parse_field("x1*x3")).restricted
    assert not WalkerMetric(g34=parse_field("x1"),
                            g33=parse_field("x3")).restricted
    assert not generic_metric().restricted


def test_christoffel_symmetric_in_lower_indices():
    M = generic_metric()
    for pt in POINTS:
        Gamma = christoffel_at(M, pt)
        assert np.abs(Gamma - Gamma.transpose(0, 2, 1)).max() == 0.0


def test_flat_metric_has_no_curvature():
    M = WalkerMetric(g34=parse_field("0"))
    tensor = curvature_at(M, POINTS[0])
    assert np.abs(tensor.components).max() == 0.0


def test_curvature_symmetries():
    M = generic_metric()
    for pt in POINTS:
        tensor = curvature_at(M, pt)
        R = tensor.components
        scale = 1.0 + np.abs(R).max()
        assert np.abs(R + R.transpose(1, 0, 2, 3)).max() / scale < 1e-12
        assert np.abs(R + R.transpose(0, 1, 3, 2)).max() / scale < 1e-12
        assert np.abs(R - R.transpose(2, 3, 0, 1)).max() / scale < 1e-12
        bianchi = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
        assert np.abs(bianchi).max() / scale < 1e-12
        assert tensor.symmetry_residual < 1e-12
        assert tensor.bianchi_residual < 1e-12


def test_component_accessor_uses_one_based_labels():
    M = WalkerMetric(g34=parse_field("x1^2"))
    tensor = curvature_at(M, (0.0, 0.0, 0.0, 0.0))
    assert tensor.component(1, 3, 1, 4) == pytest.approx(1.0)
    assert tensor.component(3, 1, 1, 4) == pytest.approx(-1.0)


@pytest.mark.parametrize("g34,point,entries", [
    # half-weight second fiber derivatives
    ("x1^2", (0.0, 0.0, 0.0, 0.0), {(1, 3, 1, 4): 1.0}),
    ("x2^2", (0.0, 0.0, 0.0, 0.0), {(2, 3, 2, 4): 1.0}),
    ("x1*x2", (0.0, 0.0, 0.0, 0.0), {(1, 3, 2, 4): 0.5, (1, 4, 2, 3): 0.5}),
    # quarter-weight square of the first fiber derivative
    ("x1^2", (0.5, 0.0, 0.0, 0.0), {(1, 4, 3, 4): 0.25}),
])
def test_pinned_curvature_entries(g34, point, entries):
    tensor = curvature_at(WalkerMetric(g34=parse_field(g34)), point)
    for (i, j, k, l), want in entries.items():
        assert tensor.component(i, j, k, l) == pytest.approx(want)


def test_closed_form_table_matches_pipeline():
    rng = np.random.Generator(np.random.Philox(5))
    for _ in range(5):
        coeffs = rng.uniform(-2.0, 2.0, 4)
        src = (f"{coeffs[0]}*x1^2 + {coeffs[1]}*x1*x2 + {coeffs[2]}*x2*x3*x4 "
               f"+ {coeffs[3]}*x3^3")
        M = WalkerMetric(g34=parse_field(src))
        for pt in rng.uniform(-1.0, 1.0, (4, 4)):
            a = curvature_at(M, pt).components
            b = curvature_table_restricted(M, pt).components
            scale = 1.0 + np.abs(b).max()
            assert np.abs(a - b).max() / scale < 1e-9


def test_closed_form_table_rejects_nonrestricted_metrics():
    with pytest.raises(UsageError):
        curvature_table_restricted(generic_metric(), POINTS[0])


def test_point_validation():
    M = generic_metric()
    with pytest.raises(UsageError):
        metric_at(M, (1.0, 2.0))
    with pytest.raises(UsageError):
        curvature_at(M, (1.0, 2.0, 3.0))
