"""Second-order jets of scalar fields.

A ScalarField is compiled once into a flat instruction program, then evaluated
by one of two interchangeable kernels: a Cython extension (preferred) or a
pure-Python twin. Both run the same instructions in the same operation order,
so the backends agree bitwise. Set WALKERGEOM_BACKEND=python to force the
fallback.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
import os

import numpy as np

from . import _jetcore_py
from .errors import DomainError, OracleError, UsageError
from .expr import (
    EPS_DEN, Add, Call, Const, Coord, Div, LinInv, Mul, Neg, Pow, ScalarField,
    Sub, base_only, eval_value, to_source,
)

if os.environ.get("WALKERGEOM_BACKEND", "").lower() == "python":
    _kernel = _jetcore_py
    BACKEND = "python"
else:
    try:
        from . import _jetcore as _kernel  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _kernel = _jetcore_py
        BACKEND = "python"

_OPS = _jetcore_py


def active_backend() -> str:
    """Name of the jet kernel in use: 'cython' or 'python'."""
    return BACKEND


@dataclass
class Jet2:
    """Value, gradient, and exactly-symmetric Hessian of a field at a point."""

    value: float
    grad: np.ndarray
    hess: np.ndarray


@dataclass
class Program:
    """Flat instruction stream for the jet kernels."""

    code: np.ndarray   # (n_instr, 3) int32: opcode, operand a, operand b
    consts: np.ndarray
    nodes: list        # per-slot source node, for error messages
    npoint: int


def _point_slot(index: int, npoint: int) -> int:
    if npoint == 4:
        return index
    if index < 2:
        raise UsageError(f"field references x{index + 1} but the point has 2 coordinates")
    return index - 2


def _build_program(f: ScalarField, npoint: int) -> Program:
    code: list[tuple[int, int, int]] = []
    consts: list[float] = []
    nodes: list[ScalarField] = []
    memo: dict[int, int] = {}

    def emit(node) -> int:
        slot = memo.get(id(node))
        if slot is not None:
            return slot
        if isinstance(node, Const):
            consts.append(node.value)
            instr = (_OPS.OP_CONST, len(consts) - 1, 0)
        elif isinstance(node, Coord):
            instr = (_OPS.OP_COORD, _point_slot(node.index, npoint), 0)
        elif isinstance(node, Add):
            instr = (_OPS.OP_ADD, emit(node.a), emit(node.b))
        elif isinstance(node, Sub):
            instr = (_OPS.OP_SUB, emit(node.a), emit(node.b))
        elif isinstance(node, Mul):
            instr = (_OPS.OP_MUL, emit(node.a), emit(node.b))
        elif isinstance(node, Div):
            instr = (_OPS.OP_DIV, emit(node.a), emit(node.b))
        elif isinstance(node, Neg):
            instr = (_OPS.OP_NEG, emit(node.a), 0)
        elif isinstance(node, Pow):
            instr = (_OPS.OP_POW, emit(node.base), node.exponent)
        elif isinstance(node, Call):
            op = {
                "sin": _OPS.OP_SIN, "cos": _OPS.OP_COS,
                "exp": _OPS.OP_EXP, "log": _OPS.OP_LOG,
            }[node.fn]
            instr = (op, emit(node.arg), 0)
        elif isinstance(node, LinInv):
            consts.extend((node.a0, node.a3, node.a4))
            instr = (_OPS.OP_LININV, len(consts) - 3, 0)
        else:
            raise UsageError(f"cannot compile {type(node).__name__}")
        code.append(instr)
        nodes.append(node)
        slot = len(code) - 1
        memo[id(node)] = slot
        return slot

    emit(f)
    return Program(
        code=np.ascontiguousarray(np.array(code, dtype=np.int32).reshape(-1, 3)),
        consts=np.ascontiguousarray(np.array(consts, dtype=np.float64)),
        nodes=nodes,
        npoint=npoint,
    )


def _compile(f: ScalarField, npoint: int) -> Program:
    cache = f.__dict__.setdefault("_programs", {})
    prog = cache.get(npoint)
    if prog is None:
        prog = _build_program(f, npoint)
        cache[npoint] = prog
    return prog


_GUARD_MESSAGES = {
    1: "denominator within {eps} of zero",
    2: "log argument below {eps}",
    3: "lin_inv denominator within {eps} of zero",
    4: "negative power of near-zero base",
    5: "non-finite value",
}


def _node_label(node: ScalarField) -> str:
    src = to_source(node)
    return src if len(src) <= 60 else src[:57] + "..."


def eval_jet2(f: ScalarField, p) -> Jet2:
    """Exact 2-jet of f at p (2 coordinates for base-only fields, else 4)."""
    pt = np.asarray(p, dtype=np.float64)
    if pt.shape not in ((2,), (4,)):
        raise UsageError("point must have 2 or 4 coordinates")
    n = pt.shape[0]
    if n == 2 and not base_only(f):
        raise UsageError("2-coordinate evaluation requires a base-only field")
    prog = _compile(f, n)
    status, err, value, grad, hess = _kernel.eval_program(
        prog.code, prog.consts, np.ascontiguousarray(pt), EPS_DEN)
    if status != 0:
        reason = _GUARD_MESSAGES.get(status, "evaluation failure").format(eps=EPS_DEN)
        raise DomainError(f"{reason} in {_node_label(prog.nodes[err])!r}")
    if not (np.all(np.isfinite(grad)) and np.all(np.isfinite(hess))):
        raise DomainError(f"non-finite derivatives in {_node_label(f)!r}")
    return Jet2(value, grad, hess)


def fd_jet2_oracle(f, p, h: float = 1e-4) -> Jet2:
    """Central finite-difference jet, the independent reference for eval_jet2.

    `f` may be a ScalarField (evaluated through the kernel-free eval_value
    path) or any callable taking a point tuple.
    """
    if isinstance(f, ScalarField):
        fn = lambda pt: eval_value(f, pt)
    elif callable(f):
        fn = f
    else:
        raise UsageError("oracle target must be a field or a callable")
    pt = np.asarray(p, dtype=np.float64)
    if pt.ndim != 1 or pt.shape[0] not in (2, 4):
        raise UsageError("point must have 2 or 4 coordinates")
    n = pt.shape[0]

    def call(q):
        try:
            v = float(fn(tuple(q)))
        except DomainError as e:
            raise OracleError(f"stencil point {tuple(q)} outside domain: {e}") from e
        if not math.isfinite(v):
            raise OracleError(f"non-finite value at stencil point {tuple(q)}")
        return v

    f0 = call(pt)
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    fplus = np.zeros(n)
    fminus = np.zeros(n)
    for i in range(n):
        step = np.zeros(n)
        step[i] = h
        fplus[i] = call(pt + step)
        fminus[i] = call(pt - step)
        grad[i] = (fplus[i] - fminus[i]) / (2.0 * h)
        hess[i, i] = (fplus[i] - 2.0 * f0 + fminus[i]) / (h * h)
    for i in range(n):
        for j in range(i + 1, n):
            si = np.zeros(n)
            sj = np.zeros(n)
            si[i] = h
            sj[j] = h
            hess[i, j] = (call(pt + si + sj) - call(pt + si - sj)
                          - call(pt - si + sj) + call(pt - si - sj)) / (4.0 * h * h)
            hess[j, i] = hess[i, j]
    return Jet2(f0, grad, hess)
