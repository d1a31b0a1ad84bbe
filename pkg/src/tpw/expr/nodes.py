"""Immutable expression trees over indexed coordinates x1..xn and time t.

Nodes are frozen dataclasses.  Arithmetic operators on nodes go through the
smart constructors below, which fold constants and drop neutral elements, so
that derivative trees stay small enough to evaluate repeatedly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

FUNCTIONS = ("sin", "cos", "exp")

# index reserved for the time variable t
T_INDEX = 0


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise TypeError("only integer powers are supported")
        return power(self, exponent)

    def diff(self, k):
        from tpw.expr.calculus import differentiate

        return differentiate(self, k)

    def __str__(self):
        from tpw.expr.printer import to_text

        return to_text(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: Fraction

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, slots=True)
class Var(Expr):
    """Coordinate x<index> for index >= 1; index 0 is the time variable t."""

    index: int

    def __repr__(self):
        return "Var(t)" if self.index == T_INDEX else f"Var(x{self.index})"


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Func(Expr):
    name: str
    arg: Expr


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
T = Var(T_INDEX)


def x(k: int) -> Var:
    if k < 1:
        raise ValueError(f"coordinate index must be >= 1, got {k}")
    return Var(k)


def const(value) -> Const:
    if isinstance(value, Const):
        return value
    if isinstance(value, float):
        # exact binary value of the float, never a decimal guess
        return Const(Fraction(value))
    if isinstance(value, (int, Rational)):
        return Const(Fraction(value))
    raise TypeError(f"cannot make a constant from {value!r}")


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return const(value)


def _is_const(e: Expr, v=None) -> bool:
    return isinstance(e, Const) and (v is None or e.value == v)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if isinstance(b, Neg):
        return sub(a, b.arg)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return neg(b)
    if a == b:
        return ZERO
    if isinstance(b, Neg):
        return add(a, b.arg)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if _is_const(a, -1):
        return neg(b)
    if _is_const(b, -1):
        return neg(a)
    if isinstance(a, Neg) and isinstance(b, Neg):
        return mul(a.arg, b.arg)
    if isinstance(a, Neg):
        return neg(mul(a.arg, b))
    if isinstance(b, Neg):
        return neg(mul(a, b.arg))
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    if _is_const(b, 1):
        return a
    if _is_const(a, 0) and not _is_const(b, 0):
        return ZERO
    if isinstance(a, Neg):
        return neg(div(a.arg, b))
    return Div(a, b)


def power(base: Expr, exponent: int) -> Expr:
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const) and (base.value != 0 or exponent > 0):
        return Const(base.value**exponent)
    if isinstance(base, Pow):
        return power(base.base, base.exponent * exponent)
    return Pow(base, exponent)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def func(name: str, arg: Expr) -> Expr:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    if _is_const(arg, 0):
        return ZERO if name == "sin" else ONE
    return Func(name, arg)


def sin(a) -> Expr:
    return func("sin", as_expr(a))


def cos(a) -> Expr:
    return func("cos", as_expr(a))


def exp(a) -> Expr:
    return func("exp", as_expr(a))


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Add, Sub, Mul, Div)):
        return (e.left, e.right)
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, (Neg, Func)):
        return (e.arg,)
    return ()


def variables(e: Expr) -> set[int]:
    """Indices of all variables occurring in ``e`` (0 stands for t)."""
    out: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.index)
        stack.extend(children(node))
    return out


def max_index(e: Expr) -> int:
    return max((k for k in variables(e) if k != T_INDEX), default=0)


def is_exact(e: Expr) -> bool:
    """True when ``e`` lies in the polynomial/rational fragment."""
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Func):
            return False
        stack.extend(children(node))
    return True
