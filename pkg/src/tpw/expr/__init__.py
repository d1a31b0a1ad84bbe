"""Scalar expressions over coordinates x1..xn and time t."""

from tpw.expr.calculus import differentiate, substitute
from tpw.expr.exact import (
    ExactAlgebra,
    NormalForm,
    NotExactError,
    SymbolicAlgebra,
    algebra_for,
    normal_form,
    normal_form_equal,
)
from tpw.expr.nodes import (
    ONE,
    T,
    ZERO,
    Const,
    Expr,
    Var,
    const,
    cos,
    exp,
    is_exact,
    sin,
    x,
)
from tpw.expr.numeric import DomainError, compile_dual, compile_value, evaluate, evaluate_dual
from tpw.expr.parser import ExprSyntaxError, UnknownVariableError, parse
from tpw.expr.printer import to_text

eval_dual = evaluate_dual

__all__ = [
    "ONE",
    "T",
    "ZERO",
    "Const",
    "DomainError",
    "ExactAlgebra",
    "Expr",
    "ExprSyntaxError",
    "NormalForm",
    "NotExactError",
    "SymbolicAlgebra",
    "UnknownVariableError",
    "Var",
    "algebra_for",
    "compile_dual",
    "compile_value",
    "const",
    "cos",
    "differentiate",
    "eval_dual",
    "evaluate",
    "evaluate_dual",
    "exp",
    "is_exact",
    "normal_form",
    "normal_form_equal",
    "parse",
    "sin",
    "substitute",
    "to_text",
    "x",
]
