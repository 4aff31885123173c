"""Exact 2-jet evaluation against finite differences and across backends."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from walkergeom import _jetcore_py
from walkergeom.errors import DomainError, UsageError
from walkergeom.expr import EPS_DEN, parse_field
from walkergeom.jets import Jet2, _compile, active_backend, eval_jet2, fd_jet2_oracle

POINTS = ((0.3, -0.7, 1.1, 0.9), (-0.4, 0.8, 0.6, -1.2), (0.9, 0.2, -0.5, 1.3))

FEATURE_SOURCES = (
    "0.5*x1^3 - 2*x2*x3 + x4^2 - 1.25",
    "(x1 + 2*x2)/(x3^2 + 4)",
    "sin(x3)*cos(x4) + x1*exp(0.3*x2)",
    "log(4 + x3^2 + x4^2)",
    "(1 + x1^2)^-2 + x2^4",
    "exp(sin(x3) - 0.5*cos(x1*x2))",
    "-x1*lin_inv(1.0, 1.0, 1.0)",
    "x1 - (x2 - (x3 - x4))",
)


@pytest.mark.parametrize("src", FEATURE_SOURCES)
@pytest.mark.parametrize("point", POINTS)
def test_jets_match_finite_differences(src, point):
    f = parse_field(src)
    jet = eval_jet2(f, point)
    ref = fd_jet2_oracle(f, point)
    assert abs(jet.value - ref.value) <= 1e-5
    assert np.abs(jet.grad - ref.grad).max() <= 1e-5
    assert np.abs(jet.hess - ref.hess).max() <= 1e-5


def test_hessian_exactly_symmetric():
    f = parse_field("exp(x1*x3)*sin(x2 - x4^2)")
    for pt in POINTS:
        hess = eval_jet2(f, pt).hess
        assert (hess == hess.T).all()


def test_polynomial_jet_closed_form():
    f = parse_field("x1^2*x3")
    a, b, c, d = 0.5, 0.0, -1.3, 0.2
    jet = eval_jet2(f, (a, b, c, d))
    assert jet.value == pytest.approx(a * a * c)
    assert jet.grad == pytest.approx([2 * a * c, 0.0, a * a, 0.0])
    assert jet.hess[0, 0] == pytest.approx(2 * c)
    assert jet.hess[0, 2] == pytest.approx(2 * a)
    assert jet.hess[2, 2] == 0.0


def test_base_only_two_coordinate_points():
    f = parse_field("sin(x3*x4) + x3^3/3")
    short = eval_jet2(f, (1.1, 0.9))
    full = eval_jet2(f, (0.0, 0.0, 1.1, 0.9))
    assert short.value == full.value
    assert short.grad == pytest.approx(full.grad[2:])
    assert short.hess == pytest.approx(full.hess[2:, 2:])


def test_two_coordinate_point_requires_base_only_field():
    with pytest.raises(UsageError):
        eval_jet2(parse_field("x1*x3"), (1.0, 2.0))
    with pytest.raises(UsageError):
        eval_jet2(parse_field("x3"), (1.0, 2.0, 3.0))


@pytest.mark.parametrize("src,point", [
    ("1/(x3 - 1.1)", (0.0, 0.0, 1.1, 0.0)),
    ("log(x3)", (0.0, 0.0, -2.0, 0.0)),
    ("lin_inv(1.0, 1.0, 1.0)", (0.0, 0.0, -0.5, -0.5)),
    ("x3^-1", (0.0, 0.0, 0.0, 0.0)),
])
def test_domain_guards(src, point):
    with pytest.raises(DomainError):
        eval_jet2(parse_field(src), point)


def test_oracle_accepts_plain_callables():
    ref = fd_jet2_oracle(lambda p: p[0] ** 2 * p[2], (0.5, 0.0, -1.3, 0.2))
    assert isinstance(ref, Jet2)
    assert ref.grad[0] == pytest.approx(2 * 0.5 * -1.3, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.floats(-1.2, 1.2), st.floats(-1.2, 1.2),
       st.floats(-1.2, 1.2), st.floats(-1.2, 1.2))
def test_product_rule_against_factors(a, b, c, d):
    f = parse_field("x1*x2 + 1")
    g = parse_field("x3 - x4^2")
    fg = parse_field("(x1*x2 + 1)*(x3 - x4^2)")
    pt = (a, b, c, d)
    jf, jg, jfg = eval_jet2(f, pt), eval_jet2(g, pt), eval_jet2(fg, pt)
    assert jfg.value == pytest.approx(jf.value * jg.value, rel=1e-12, abs=1e-12)
    want_grad = jf.value * jg.grad + jg.value * jf.grad
    assert jfg.grad == pytest.approx(want_grad, rel=1e-12, abs=1e-12)
    want_hess = (jf.value * jg.hess + jg.value * jf.hess
                 + np.outer(jf.grad, jg.grad) + np.outer(jg.grad, jf.grad))
    assert jfg.hess == pytest.approx(want_hess, rel=1e-12, abs=1e-12)


@pytest.mark.skipif(active_backend() != "cython",
                    reason="compiled kernel not available")
@pytest.mark.parametrize("src", FEATURE_SOURCES)
def test_backends_agree_bitwise(src):
    from walkergeom import _jetcore
    f = parse_field(src)
    prog = _compile(f, 4)
    for pt in POINTS:
        arr = np.ascontiguousarray(np.asarray(pt, dtype=np.float64))
        sc, ec, vc, gc, hc = _jetcore.eval_program(prog.code, prog.consts, arr, EPS_DEN)
        sp, ep, vp, gp, hp = _jetcore_py.eval_program(prog.code, prog.consts, arr, EPS_DEN)
        assert sc == sp
        assert ec == ep
        assert vc == vp
        assert (np.asarray(gc) == np.asarray(gp)).all()
        assert (np.asarray(hc) == np.asarray(hp)).all()


@pytest.mark.skipif(active_backend() != "cython",
                    reason="compiled kernel not available")
def test_backends_agree_on_guard_status():
    from walkergeom import _jetcore
    f = parse_field("1/(x3 - 1.1)")
    prog = _compile(f, 4)
    arr = np.array([0.0, 0.0, 1.1, 0.0])
    sc = _jetcore.eval_program(prog.code, prog.consts, arr, EPS_DEN)[0]
    sp = _jetcore_py.eval_program(prog.code, prog.consts, arr, EPS_DEN)[0]
    assert sc == sp != 0
