"""Render expression trees back into the input grammar."""

from __future__ import annotations

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

# binding strength; a child is parenthesised when weaker than its slot requires
_SUM, _PRODUCT, _UNARY, _POWER, _ATOM = 1, 2, 3, 4, 5


def _const_text(node: Const) -> tuple[str, int]:
    v = node.value
    if v.denominator == 1:
        text = str(v.numerator)
        return text, (_UNARY if v < 0 else _ATOM)
    text = f"{abs(v.numerator)}/{v.denominator}"
    if v < 0:
        return "-" + f"({text})", _UNARY
    return text, _PRODUCT


def _render(node: Expr) -> tuple[str, int]:
    if isinstance(node, Const):
        return _const_text(node)
    if isinstance(node, Var):
        return ("t" if node.index == T_INDEX else f"x{node.index}"), _ATOM
    if isinstance(node, Add):
        return f"{_wrap(node.left, _SUM)} + {_wrap(node.right, _SUM)}", _SUM
    if isinstance(node, Sub):
        return f"{_wrap(node.left, _SUM)} - {_wrap(node.right, _PRODUCT)}", _SUM
    if isinstance(node, Mul):
        return f"{_wrap(node.left, _PRODUCT)}*{_wrap(node.right, _UNARY)}", _PRODUCT
    if isinstance(node, Div):
        return f"{_wrap(node.left, _PRODUCT)}/{_wrap(node.right, _UNARY)}", _PRODUCT
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _UNARY), _UNARY
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _ATOM)}^{node.exponent}", _POWER
    if isinstance(node, Func):
        return f"{node.name}({to_text(node.arg)})", _ATOM
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node: Expr, required: int) -> str:
    text, strength = _render(node)
    # a rational literal p/q sits inside a product only when it is the leftmost factor
    if strength < required or (isinstance(node, Const) and strength == _PRODUCT and required > _PRODUCT):
        return f"({text})"
    return text


def to_text(e: Expr) -> str:
    return _render(e)[0]
