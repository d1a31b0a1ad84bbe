"""Symbolic differentiation on expression trees."""

from __future__ import annotations

from tpw.expr import nodes
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


def _index(k) -> int:
    if k == "t":
        return T_INDEX
    if isinstance(k, int) and k >= 0:
        return k
    raise ValueError(f"variable index must be a non-negative int or 't', got {k!r}")


def differentiate(e: Expr, k) -> Expr:
    """Exact partial derivative of ``e`` with respect to x<k> (or t).

    Polynomial input gives polynomial output; the result is simplified only by
    constant folding, so compare results with ``normal_form_equal``.
    """
    k = _index(k)
    cache: dict[int, Expr] = {}

    def rec(node: Expr) -> Expr:
        key = id(node)
        if key in cache:
            return cache[key]
        if isinstance(node, Const):
            out = nodes.ZERO
        elif isinstance(node, Var):
            out = nodes.ONE if node.index == k else nodes.ZERO
        elif isinstance(node, Add):
            out = nodes.add(rec(node.left), rec(node.right))
        elif isinstance(node, Sub):
            out = nodes.sub(rec(node.left), rec(node.right))
        elif isinstance(node, Mul):
            out = nodes.add(
                nodes.mul(rec(node.left), node.right),
                nodes.mul(node.left, rec(node.right)),
            )
        elif isinstance(node, Div):
            # (a/b)' = a'/b - a b'/b^2
            da, db = rec(node.left), rec(node.right)
            out = nodes.sub(
                nodes.div(da, node.right),
                nodes.div(nodes.mul(node.left, db), nodes.power(node.right, 2)),
            )
        elif isinstance(node, Pow):
            p = node.exponent
            out = nodes.mul(
                nodes.mul(nodes.const(p), nodes.power(node.base, p - 1)),
                rec(node.base),
            )
        elif isinstance(node, Neg):
            out = nodes.neg(rec(node.arg))
        elif isinstance(node, Func):
            da = rec(node.arg)
            if node.name == "sin":
                outer = nodes.func("cos", node.arg)
            elif node.name == "cos":
                outer = nodes.neg(nodes.func("sin", node.arg))
            else:
                outer = node
            out = nodes.mul(outer, da)
        else:
            raise TypeError(f"not an expression node: {node!r}")
        cache[key] = out
        return out

    return rec(e)


def substitute(e: Expr, values: dict[int, Expr]) -> Expr:
    """Replace variables by expressions (keys are indices, 0 for t)."""

    def rec(node: Expr) -> Expr:
        if isinstance(node, Var):
            return values.get(node.index, node)
        if isinstance(node, Const):
            return node
        if isinstance(node, Add):
            return nodes.add(rec(node.left), rec(node.right))
        if isinstance(node, Sub):
            return nodes.sub(rec(node.left), rec(node.right))
        if isinstance(node, Mul):
            return nodes.mul(rec(node.left), rec(node.right))
        if isinstance(node, Div):
            return nodes.div(rec(node.left), rec(node.right))
        if isinstance(node, Pow):
            return nodes.power(rec(node.base), node.exponent)
        if isinstance(node, Neg):
            return nodes.neg(rec(node.arg))
        if isinstance(node, Func):
            return nodes.func(node.name, rec(node.arg))
        raise TypeError(f"not an expression node: {node!r}")

    return rec(e)
