"""Floating-point evaluation: plain values and forward-mode dual numbers.

Expressions are compiled once into nested closures that accept either
scalars or equally-shaped numpy arrays for the coordinates, so a whole grid
of points is evaluated in one call.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from tpw.expr.nodes import (
    T_INDEX,
    Add,
    Const,
    Div,
    Expr,
    Func,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
)


class DomainError(ArithmeticError):
    """Evaluation hit a pole (division by zero or a negative power of zero)."""


_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}


def _check_nonzero(value, what: str):
    if np.any(value == 0):
        raise DomainError(f"{what}: division by zero")


def compile_value(e: Expr) -> Callable[[Sequence, object], object]:
    """Return ``f(coords, t)`` evaluating ``e``; coords[k-1] holds x<k>."""
    if isinstance(e, Const):
        v = float(e.value)
        return lambda c, t: v
    if isinstance(e, Var):
        if e.index == T_INDEX:
            return lambda c, t: t
        i = e.index - 1
        return lambda c, t: c[i]
    if isinstance(e, Neg):
        f = compile_value(e.arg)
        return lambda c, t: -f(c, t)
    if isinstance(e, (Add, Sub, Mul, Div)):
        fa, fb = compile_value(e.left), compile_value(e.right)
        if isinstance(e, Add):
            return lambda c, t: fa(c, t) + fb(c, t)
        if isinstance(e, Sub):
            return lambda c, t: fa(c, t) - fb(c, t)
        if isinstance(e, Mul):
            return lambda c, t: fa(c, t) * fb(c, t)

        def quotient(c, t):
            den = fb(c, t)
            _check_nonzero(den, "pole")
            return fa(c, t) / den

        return quotient
    if isinstance(e, Pow):
        f, p = compile_value(e.base), e.exponent
        if p >= 0:
            return lambda c, t: f(c, t) ** p

        def inverse_power(c, t):
            b = f(c, t)
            _check_nonzero(b, "pole")
            return 1.0 / b ** (-p)

        return inverse_power
    if isinstance(e, Func):
        f, g = compile_value(e.arg), _FUNCS[e.name]
        return lambda c, t: g(f(c, t))
    raise TypeError(f"not an expression node: {e!r}")


def compile_dual(e: Expr) -> Callable[[Sequence, Sequence, object, object], tuple]:
    """Return ``f(coords, dcoords, t, dt) -> (value, derivative)`` in forward mode."""
    if isinstance(e, Const):
        v = float(e.value)
        return lambda c, dc, t, dt: (v, 0.0)
    if isinstance(e, Var):
        if e.index == T_INDEX:
            return lambda c, dc, t, dt: (t, dt)
        i = e.index - 1
        return lambda c, dc, t, dt: (c[i], dc[i])
    if isinstance(e, Neg):
        f = compile_dual(e.arg)

        def negate(c, dc, t, dt):
            v, d = f(c, dc, t, dt)
            return -v, -d

        return negate
    if isinstance(e, (Add, Sub, Mul, Div)):
        fa, fb = compile_dual(e.left), compile_dual(e.right)
        kind = type(e)

        def binary(c, dc, t, dt):
            a, da = fa(c, dc, t, dt)
            b, db = fb(c, dc, t, dt)
            if kind is Add:
                return a + b, da + db
            if kind is Sub:
                return a - b, da - db
            if kind is Mul:
                return a * b, da * b + a * db
            _check_nonzero(b, "pole")
            q = a / b
            return q, (da - q * db) / b

        return binary
    if isinstance(e, Pow):
        f, p = compile_dual(e.base), e.exponent

        def powered(c, dc, t, dt):
            b, db = f(c, dc, t, dt)
            if p < 0:
                _check_nonzero(b, "pole")
            return b**p * 1.0, p * b ** (p - 1) * db

        return powered
    if isinstance(e, Func):
        f, name = compile_dual(e.arg), e.name

        def transcendental(c, dc, t, dt):
            a, da = f(c, dc, t, dt)
            if name == "sin":
                return np.sin(a), np.cos(a) * da
            if name == "cos":
                return np.cos(a), -np.sin(a) * da
            ea = np.exp(a)
            return ea, ea * da

        return transcendental
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expr, point: Sequence[float], t: float = 0.0) -> float:
    """IEEE-double value of ``e`` at ``point`` (x1..xn) and time ``t``."""
    return float(compile_value(e)(tuple(float(v) for v in point), float(t)))


def evaluate_dual(
    e: Expr,
    point: Sequence[float],
    direction: Sequence[float],
    t: float = 0.0,
    t_direction: float = 0.0,
) -> tuple[float, float]:
    """Value and directional derivative of ``e`` at ``point`` along ``direction``."""
    c = tuple(float(v) for v in point)
    dc = tuple(float(v) for v in direction)
    if len(dc) != len(c):
        raise ValueError("point and direction must have the same length")
    v, d = compile_dual(e)(c, dc, float(t), float(t_direction))
    return float(v), float(d)
