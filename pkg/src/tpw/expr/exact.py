"""Exact rational-function arithmetic for the polynomial/rational fragment.

Expressions are mapped into the field Q(x1, ..., xn, t) provided by sympy's
sparse polynomial machinery.  A field element is a reduced numerator /
denominator pair; dividing both by the leading coefficient of the
denominator gives a canonical normal form, so equality of normal forms is
equality of functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import QQ
from sympy.polys.fields import field

from tpw.expr import nodes
from tpw.expr.calculus import differentiate
from tpw.expr.nodes import T_INDEX, Add, Const, Div, Expr, Func, Mul, Neg, Pow, Sub, Var
from tpw.expr.numeric import DomainError, compile_value


class NotExactError(ValueError):
    """Raised when sin/cos/exp appear where exact arithmetic is required."""

    def __init__(self, what: str = "expression"):
        super().__init__(f"{what} is not in exact fragment (contains sin/cos/exp)")


@lru_cache(maxsize=None)
def rational_field(n: int):
    """The field Q(x1..xn, t) and its generators; t is the last generator."""
    names = [f"x{k}" for k in range(1, n + 1)] + ["t"]
    K, *gens = field(names, QQ)
    return K, tuple(gens)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def to_field(e: Expr, n: int | None = None):
    """Map ``e`` into Q(x1..xn, t).  ``n`` defaults to the largest index used."""
    n = nodes.max_index(e) if n is None else n
    K, gens = rational_field(n)
    cache: dict[int, object] = {}

    def rec(node: Expr):
        key = id(node)
        if key in cache:
            return cache[key]
        if isinstance(node, Const):
            out = K(node.value)
        elif isinstance(node, Var):
            if node.index == T_INDEX:
                out = gens[n]
            elif node.index > n:
                raise ValueError(f"variable x{node.index} outside dimension {n}")
            else:
                out = gens[node.index - 1]
        elif isinstance(node, Add):
            out = rec(node.left) + rec(node.right)
        elif isinstance(node, Sub):
            out = rec(node.left) - rec(node.right)
        elif isinstance(node, Mul):
            out = rec(node.left) * rec(node.right)
        elif isinstance(node, Div):
            den = rec(node.right)
            if den == 0:
                raise DomainError("division by an expression that is identically zero")
            out = rec(node.left) / den
        elif isinstance(node, Pow):
            base = rec(node.base)
            if node.exponent < 0 and base == 0:
                raise DomainError("negative power of an expression that is identically zero")
            # x^0 is 1 everywhere, matching the numeric backend
            out = base**node.exponent if node.exponent else K.one
        elif isinstance(node, Neg):
            out = -rec(node.arg)
        elif isinstance(node, Func):
            raise NotExactError()
        else:
            raise TypeError(f"not an expression node: {node!r}")
        cache[key] = out
        return out

    return rec(e)


def _poly_terms(poly, scale) -> tuple:
    return tuple((tuple(m), _to_fraction(c / scale)) for m, c in poly.terms())


@dataclass(frozen=True)
class NormalForm:
    """Expanded numerator and monic denominator, monomials in lex order.

    Each monomial is an exponent tuple over (x1, ..., xn, t).
    """

    numerator: tuple
    denominator: tuple

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def is_polynomial(self) -> bool:
        return len(self.denominator) == 1 and not any(self.denominator[0][0])


def field_normal_form(a) -> NormalForm:
    lc = a.denom.LC
    return NormalForm(_poly_terms(a.numer, lc), _poly_terms(a.denom, lc))


def normal_form(e: Expr, n: int | None = None) -> NormalForm:
    return field_normal_form(to_field(e, n))


def normal_form_equal(a: Expr, b: Expr) -> bool:
    """Exact equality of two rational expressions (no floating point involved)."""
    for side in (a, b):
        if not nodes.is_exact(side):
            raise NotExactError()
    n = max(nodes.max_index(a), nodes.max_index(b))
    return to_field(a, n) - to_field(b, n) == 0


def _poly_to_expr(poly, n: int) -> Expr:
    out: Expr = nodes.ZERO
    for monomial, c in poly.terms():
        term: Expr = nodes.const(_to_fraction(c))
        for k, p in enumerate(monomial):
            if p:
                var = nodes.T if k == n else nodes.Var(k + 1)
                term = nodes.mul(term, nodes.power(var, p))
        out = nodes.add(out, term)
    return out


def from_field(a, n: int) -> Expr:
    """Expression tree for a field element, numerator over monic denominator."""
    lc = a.denom.LC
    num = _poly_to_expr(a.numer * (1 / lc) if lc != 1 else a.numer, n)
    den = _poly_to_expr(a.denom * (1 / lc) if lc != 1 else a.denom, n)
    return nodes.div(num, den)


class ExactAlgebra:
    """Scalar arithmetic in Q(x1..xn, t) for the tensor calculus.

    Coordinate indices passed to ``var`` and ``diff`` are 0-based.
    """

    exact = True

    def __init__(self, n: int):
        self.n = n
        self.field, self.gens = rational_field(n)
        self.zero = self.field.zero
        self.one = self.field.one

    def const(self, q):
        return self.field(Fraction(q))

    def var(self, k: int):
        return self.gens[k]

    def diff(self, a, k: int):
        return a.diff(self.gens[k])

    def is_zero(self, a) -> bool:
        return a == 0

    def from_expr(self, e: Expr):
        if not nodes.is_exact(e):
            raise NotExactError()
        return to_field(e, self.n)

    def to_expr(self, a) -> Expr:
        return from_field(a, self.n)

    def compile(self, a):
        return compile_value(self.to_expr(a))


class SymbolicAlgebra:
    """Scalar arithmetic on expression trees, for models using sin/cos/exp.

    Zero tests are structural only, so identities must be confirmed by
    numerical sampling of the compiled result.
    """

    exact = False

    def __init__(self, n: int):
        self.n = n
        self.zero = nodes.ZERO
        self.one = nodes.ONE

    def const(self, q):
        return nodes.const(Fraction(q))

    def var(self, k: int):
        return nodes.Var(k + 1)

    def diff(self, a, k: int):
        return differentiate(a, k + 1)

    def is_zero(self, a) -> bool:
        return a == nodes.ZERO

    def from_expr(self, e: Expr):
        return e

    def to_expr(self, a) -> Expr:
        return a

    def compile(self, a):
        return compile_value(a)


def algebra_for(exprs, n: int):
    """Exact algebra when every expression is rational, symbolic otherwise."""
    if all(nodes.is_exact(e) for e in exprs):
        return ExactAlgebra(n)
    return SymbolicAlgebra(n)
