"""Scalar-field expression trees: parsing, printing, differentiation, evaluation.

Grammar (ASCII, whitespace insignificant):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' signed-integer)*
    atom   := number | coordinate | name '(' expr ')' | lin_inv '(' num ',' num ',' num ')'
            | '(' expr ')' | identifier

Coordinates are x1..x4 (x3, x4 only when dim=2).  Unary functions are sin, cos,
exp, log.  lin_inv(a0,a3,a4) denotes 1/(a0 + a3*x3 + a4*x4) with numeric-literal
parameters.  Precedence: ^ binds tighter than unary minus, which binds tighter
than * and /, which bind tighter than + and -.  Identifiers other than the
reserved names resolve against a caller-supplied binding table.

Trees are treated as immutable after construction and are safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
import operator
import re

from .errors import DomainError, ParameterError, ParseError, UsageError

# Reject divisions, reciprocals and logs this close to the singular locus.
EPS_DEN = 1e-8

FUNCTIONS = ("sin", "cos", "exp", "log")


@dataclass(eq=True)
class ScalarField:
    """Base expression node. Subclasses define the node kinds."""

    def __add__(self, other):
        return Add(self, as_field(other))

    def __radd__(self, other):
        return Add(as_field(other), self)

    def __sub__(self, other):
        return Sub(self, as_field(other))

    def __rsub__(self, other):
        return Sub(as_field(other), self)

    def __mul__(self, other):
        return Mul(self, as_field(other))

    def __rmul__(self, other):
        return Mul(as_field(other), self)

    def __truediv__(self, other):
        return Div(self, as_field(other))

    def __rtruediv__(self, other):
        return Div(as_field(other), self)

    def __pow__(self, n):
        return Pow(self, n)

    def __neg__(self):
        return Neg(self)


@dataclass(eq=True)
class Const(ScalarField):
    value: float

    def __post_init__(self):
        self.value = float(self.value)
        if not math.isfinite(self.value):
            raise UsageError("constant nodes must be finite")


@dataclass(eq=True)
class Coord(ScalarField):
    index: int  # 0..3 for x1..x4

    def __post_init__(self):
        if self.index not in (0, 1, 2, 3):
            raise UsageError(f"coordinate index {self.index} out of range")


@dataclass(eq=True)
class Add(ScalarField):
    a: ScalarField
    b: ScalarField


@dataclass(eq=True)
class Sub(ScalarField):
    a: ScalarField
    b: ScalarField


@dataclass(eq=True)
class Mul(ScalarField):
    a: ScalarField
    b: ScalarField


@dataclass(eq=True)
class Div(ScalarField):
    a: ScalarField
    b: ScalarField


@dataclass(eq=True)
class Neg(ScalarField):
    a: ScalarField


@dataclass(eq=True)
class Pow(ScalarField):
    base: ScalarField
    exponent: int

    def __post_init__(self):
        try:
            self.exponent = operator.index(self.exponent)
        except TypeError:
            raise UsageError("power exponent must be an integer") from None
        if abs(self.exponent) > 64:
            raise UsageError("power exponent out of supported range [-64, 64]")


@dataclass(eq=True)
class Call(ScalarField):
    fn: str
    arg: ScalarField

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise UsageError(f"unknown function {self.fn!r}")


@dataclass(eq=True)
class LinInv(ScalarField):
    """Reciprocal of the base-affine function a0 + a3*x3 + a4*x4."""

    a0: float
    a3: float
    a4: float

    def __post_init__(self):
        self.a0 = float(self.a0)
        self.a3 = float(self.a3)
        self.a4 = float(self.a4)
        if self.a0 == 0.0 and self.a3 == 0.0 and self.a4 == 0.0:
            raise ParameterError("lin_inv requires a nonzero parameter triple")


# Shared coordinate atoms, convenient for building fields in code.
x1 = Coord(0)
x2 = Coord(1)
x3 = Coord(2)
x4 = Coord(3)

ZERO = Const(0.0)
ONE = Const(1.0)


def as_field(v) -> ScalarField:
    if isinstance(v, ScalarField):
        return v
    if isinstance(v, (int, float)):
        return Const(float(v))
    raise UsageError(f"cannot interpret {v!r} as a scalar field")


def const(c) -> Const:
    return Const(float(c))


def lin_inv(a0, a3, a4) -> LinInv:
    return LinInv(float(a0), float(a3), float(a4))


def sin(f) -> Call:
    return Call("sin", as_field(f))


def cos(f) -> Call:
    return Call("cos", as_field(f))


def exp(f) -> Call:
    return Call("exp", as_field(f))


def log(f) -> Call:
    return Call("log", as_field(f))


def is_zero(f: ScalarField) -> bool:
    """Structurally the zero constant (no value analysis)."""
    return isinstance(f, Const) and f.value == 0.0


def coords_used(f: ScalarField) -> set[int]:
    out: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Coord):
            out.add(node.index)
        elif isinstance(node, LinInv):
            if node.a3 != 0.0:
                out.add(2)
            if node.a4 != 0.0:
                out.add(3)
        elif isinstance(node, (Add, Sub, Mul, Div)):
            stack.append(node.a)
            stack.append(node.b)
        elif isinstance(node, Neg):
            stack.append(node.a)
        elif isinstance(node, Pow):
            stack.append(node.base)
        elif isinstance(node, Call):
            stack.append(node.arg)
    return out


def base_only(f: ScalarField) -> bool:
    """True when f references x3, x4 only."""
    return coords_used(f) <= {2, 3}


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(src: str):
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), pos))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, dim, defs):
        self.tokens = tokens
        self.i = 0
        self.dim = dim
        self.defs = defs

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", pos)
        return self.advance()

    def at_op(self, *ops):
        kind, text, _ = self.peek()
        return kind == "op" and text in ops

    def parse_expr(self):
        node = self.parse_term()
        while self.at_op("+", "-"):
            _, op, _ = self.advance()
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.at_op("*", "/"):
            _, op, _ = self.advance()
            rhs = self.parse_factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_factor(self):
        if self.at_op("-"):
            self.advance()
            inner = self.parse_factor()
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Neg(inner)
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        while self.at_op("^"):
            self.advance()
            node = Pow(node, self.parse_int_exponent())
        return node

    def parse_int_exponent(self):
        sign = 1
        if self.at_op("-"):
            self.advance()
            sign = -1
        kind, text, pos = self.peek()
        if kind != "num":
            raise ParseError("expected integer exponent", pos)
        self.advance()
        value = float(text)
        if not value.is_integer():
            raise ParseError("integer exponent required", pos)
        return sign * int(value)

    def parse_number(self):
        sign = 1.0
        if self.at_op("-"):
            self.advance()
            sign = -1.0
        kind, text, pos = self.peek()
        if kind != "num":
            raise ParseError("expected a numeric literal", pos)
        self.advance()
        return sign * float(text)

    def parse_atom(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.advance()
            return Const(float(text))
        if kind == "op" and text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if kind == "ident":
            self.advance()
            return self.resolve_ident(text, pos)
        raise ParseError("expected a value", pos)

    def resolve_ident(self, name, pos):
        if re.fullmatch(r"x[1-4]", name):
            index = int(name[1]) - 1
            if self.dim == 2 and index < 2:
                raise ParseError(f"coordinate {name} not allowed when dim=2", pos)
            return Coord(index)
        if name in FUNCTIONS:
            self.expect_op("(")
            arg = self.parse_expr()
            self.expect_op(")")
            return Call(name, arg)
        if name == "lin_inv":
            self.expect_op("(")
            a0 = self.parse_number()
            self.expect_op(",")
            a3 = self.parse_number()
            self.expect_op(",")
            a4 = self.parse_number()
            self.expect_op(")")
            try:
                return LinInv(a0, a3, a4)
            except ParameterError as e:
                raise ParseError(str(e), pos) from e
        if name in self.defs:
            return self.defs[name]
        raise ParseError(f"unknown identifier {name!r}", pos)


def parse_field(src: str, dim: int = 4, defs: dict[str, ScalarField] | None = None) -> ScalarField:
    """Parse expression text to a tree; dim=2 restricts coordinates to x3, x4."""
    if dim not in (2, 4):
        raise UsageError("dim must be 2 or 4")
    parser = _Parser(_tokenize(src), dim, defs or {})
    node = parser.parse_expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", pos)
    return node


# --- printing --------------------------------------------------------------

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _prec(node: ScalarField) -> int:
    if isinstance(node, (Add, Sub)):
        return _PREC_ADD
    if isinstance(node, (Mul, Div)):
        return _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Const) and node.value < 0.0:
        # Prints with a leading minus, so parenthesize like a negation.
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _render(node: ScalarField, minprec: int) -> str:
    if isinstance(node, Const):
        s = repr(node.value)
    elif isinstance(node, Coord):
        s = f"x{node.index + 1}"
    elif isinstance(node, Add):
        s = f"{_render(node.a, _PREC_ADD)} + {_render(node.b, _PREC_ADD + 1)}"
    elif isinstance(node, Sub):
        s = f"{_render(node.a, _PREC_ADD)} - {_render(node.b, _PREC_ADD + 1)}"
    elif isinstance(node, Mul):
        s = f"{_render(node.a, _PREC_MUL)}*{_render(node.b, _PREC_MUL + 1)}"
    elif isinstance(node, Div):
        s = f"{_render(node.a, _PREC_MUL)}/{_render(node.b, _PREC_MUL + 1)}"
    elif isinstance(node, Neg):
        s = f"-{_render(node.a, _PREC_NEG)}"
    elif isinstance(node, Pow):
        s = f"{_render(node.base, _PREC_ATOM)}^{node.exponent}"
    elif isinstance(node, Call):
        s = f"{node.fn}({_render(node.arg, 0)})"
    elif isinstance(node, LinInv):
        s = f"lin_inv({repr(node.a0)}, {repr(node.a3)}, {repr(node.a4)})"
    else:
        raise UsageError(f"cannot print {type(node).__name__}")
    if _prec(node) < minprec:
        return f"({s})"
    return s


def to_source(f: ScalarField) -> str:
    """Print a tree so that parse_field(to_source(f)) is structurally equal to f."""
    return _render(f, 0)


# --- differentiation -------------------------------------------------------

def _d_add(a, b):
    if is_zero(a):
        return b
    if is_zero(b):
        return a
    return Add(a, b)


def _d_sub(a, b):
    if is_zero(b):
        return a
    if is_zero(a):
        return Neg(b)
    return Sub(a, b)


def _d_mul(a, b):
    if is_zero(a) or is_zero(b):
        return ZERO
    if isinstance(a, Const) and a.value == 1.0:
        return b
    if isinstance(b, Const) and b.value == 1.0:
        return a
    return Mul(a, b)


def _d_neg(a):
    if is_zero(a):
        return ZERO
    if isinstance(a, Const):
        return Const(-a.value)
    return Neg(a)


def derivative(f: ScalarField, index: int) -> ScalarField:
    """Exact symbolic partial derivative with respect to coordinate `index` (0-based).

    Performs only local zero/one elimination, no general simplification.
    """
    if index not in (0, 1, 2, 3):
        raise UsageError(f"coordinate index {index} out of range")
    if isinstance(f, Const):
        return ZERO
    if isinstance(f, Coord):
        return ONE if f.index == index else ZERO
    if isinstance(f, Add):
        return _d_add(derivative(f.a, index), derivative(f.b, index))
    if isinstance(f, Sub):
        return _d_sub(derivative(f.a, index), derivative(f.b, index))
    if isinstance(f, Neg):
        return _d_neg(derivative(f.a, index))
    if isinstance(f, Mul):
        da, db = derivative(f.a, index), derivative(f.b, index)
        return _d_add(_d_mul(da, f.b), _d_mul(f.a, db))
    if isinstance(f, Div):
        da, db = derivative(f.a, index), derivative(f.b, index)
        num = _d_sub(_d_mul(da, f.b), _d_mul(f.a, db))
        if is_zero(num):
            return ZERO
        return Div(num, Pow(f.b, 2))
    if isinstance(f, Pow):
        du = derivative(f.base, index)
        if f.exponent == 0 or is_zero(du):
            return ZERO
        if f.exponent == 1:
            return du
        if f.exponent == 2:
            inner = f.base
        else:
            inner = Pow(f.base, f.exponent - 1)
        return _d_mul(_d_mul(Const(float(f.exponent)), inner), du)
    if isinstance(f, Call):
        du = derivative(f.arg, index)
        if is_zero(du):
            return ZERO
        if f.fn == "sin":
            return _d_mul(Call("cos", f.arg), du)
        if f.fn == "cos":
            return _d_neg(_d_mul(Call("sin", f.arg), du))
        if f.fn == "exp":
            return _d_mul(Call("exp", f.arg), du)
        return Div(du, f.arg)  # log
    if isinstance(f, LinInv):
        coeff = {2: f.a3, 3: f.a4}.get(index, 0.0)
        if coeff == 0.0:
            return ZERO
        return _d_mul(Const(-coeff), Pow(LinInv(f.a0, f.a3, f.a4), 2))
    raise UsageError(f"cannot differentiate {type(f).__name__}")


# --- value evaluation ------------------------------------------------------

def eval_value(f: ScalarField, point) -> float:
    """Plain float evaluation, independent of the jet kernels.

    `point` has 2 entries (x3, x4) or 4 entries (x1..x4). Domain guards match
    the jet kernels: denominators and log arguments within EPS_DEN are errors.
    """
    pt = tuple(float(c) for c in point)
    if len(pt) == 2:
        coords = (None, None, pt[0], pt[1])
    elif len(pt) == 4:
        coords = pt
    else:
        raise UsageError("point must have 2 or 4 coordinates")

    def rec(node):
        if isinstance(node, Const):
            return node.value
        if isinstance(node, Coord):
            c = coords[node.index]
            if c is None:
                raise UsageError(
                    f"field references x{node.index + 1} but the point has 2 coordinates")
            return c
        if isinstance(node, Add):
            return rec(node.a) + rec(node.b)
        if isinstance(node, Sub):
            return rec(node.a) - rec(node.b)
        if isinstance(node, Mul):
            return rec(node.a) * rec(node.b)
        if isinstance(node, Div):
            den = rec(node.b)
            if abs(den) < EPS_DEN:
                raise DomainError(f"denominator within {EPS_DEN} of zero in {to_source(node)!r}")
            return rec(node.a) / den
        if isinstance(node, Neg):
            return -rec(node.a)
        if isinstance(node, Pow):
            base = rec(node.base)
            if node.exponent < 0 and abs(base) < EPS_DEN:
                raise DomainError(f"negative power of near-zero base in {to_source(node)!r}")
            return _ipow(base, node.exponent)
        if isinstance(node, Call):
            v = rec(node.arg)
            if node.fn == "sin":
                return math.sin(v)
            if node.fn == "cos":
                return math.cos(v)
            if node.fn == "exp":
                return math.exp(v)
            if v < EPS_DEN:
                raise DomainError(f"log argument below {EPS_DEN} in {to_source(node)!r}")
            return math.log(v)
        if isinstance(node, LinInv):
            den = node.a0 + node.a3 * coords[2] + node.a4 * coords[3]
            if abs(den) < EPS_DEN:
                raise DomainError(f"lin_inv denominator within {EPS_DEN} of zero in {to_source(node)!r}")
            return 1.0 / den
        raise UsageError(f"cannot evaluate {type(node).__name__}")

    return rec(f)


def _ipow(base: float, n: int) -> float:
    """Integer power by repeated multiplication, matching the jet kernels."""
    if n == 0:
        return 1.0
    if n < 0:
        return 1.0 / _ipow(base, -n)
    acc = base
    for _ in range(n - 1):
        acc *= base
    return acc


def ricci_flat_pq(a0: float, a3: float, a4: float) -> tuple[ScalarField, ScalarField]:
    """Base-only pair p = -2*a4*lin_inv(a0,a3,a4), q = -2*a3*lin_inv(a0,a3,a4).

    These satisfy p^2 = 2*p_/4, q^2 = 2*q_/3, p*q = p_/3 + q_/4 identically,
    which makes x1*p + x2*q (plus any base term with the matching condition)
    the warping profile of a Ricci-flat restricted metric.
    """
    a0, a3, a4 = float(a0), float(a3), float(a4)
    if a0 == 0.0 and a3 == 0.0 and a4 == 0.0:
        raise ParameterError("parameter triple must be nonzero")
    inv = LinInv(a0, a3, a4)
    p = ZERO if a4 == 0.0 else Mul(Const(-2.0 * a4), inv)
    q = ZERO if a3 == 0.0 else Mul(Const(-2.0 * a3), inv)
    return p, q
