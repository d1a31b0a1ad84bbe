"""Recursive-descent parser for the scalar expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' ['-'] int)?
    base   := number | 'x' int | 't' | func '(' expr ')' | '(' expr ')'
    func   := 'sin' | 'cos' | 'exp'

Numbers are read exactly: integers, decimals ("0.25" is 1/4) and
exponent notation all become :class:`fractions.Fraction`.  A rational
literal ``p/q`` is simply a division of two integer literals and folds to a
constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from tpw.expr import nodes
from tpw.expr.nodes import Expr


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnknownVariableError(ExprSyntaxError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for offset, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line += 1
                    line_start = offset + 1
        else:
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, dimension: int | None, allow_t: bool):
        self.tokens = tokenize(text)
        self.pos = 0
        self.dimension = dimension
        self.allow_t = allow_t

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ExprSyntaxError:
        tok = tok or self.current
        return ExprSyntaxError(message, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if self.current.text != text:
            found = self.current.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Expr:
        if self.current.kind == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.current.kind != "end":
            raise self.error(f"unexpected {self.current.text!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            e = nodes.Add(e, rhs) if op == "+" else nodes.Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.current.text in ("*", "/"):
            op = self.advance().text
            rhs = self.factor()
            if op == "*":
                e = nodes.Mul(e, rhs)
            elif isinstance(e, nodes.Const) and isinstance(rhs, nodes.Const) and rhs.value != 0:
                # p/q literal
                e = nodes.Const(e.value / rhs.value)
            else:
                e = nodes.Div(e, rhs)
        return e

    def factor(self) -> Expr:
        if self.current.text == "-":
            self.advance()
            inner = self.factor()
            if isinstance(inner, nodes.Const):
                return nodes.Const(-inner.value)
            return nodes.Neg(inner)
        base = self.base()
        if self.current.text == "^":
            self.advance()
            sign = 1
            if self.current.text == "-":
                self.advance()
                sign = -1
            tok = self.current
            if tok.kind != "num" or not tok.text.isdigit():
                raise self.error("exponent must be an integer")
            self.advance()
            return nodes.Pow(base, sign * int(tok.text))
        return base

    def base(self) -> Expr:
        tok = self.current
        if tok.kind == "num":
            self.advance()
            return nodes.Const(Fraction(tok.text))
        if tok.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            self.advance()
            name = tok.text
            if name in nodes.FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return nodes.Func(name, arg)
            if name == "t":
                if not self.allow_t:
                    raise UnknownVariableError("time variable t is not allowed here", tok.line, tok.column)
                return nodes.T
            m = re.fullmatch(r"x(\d+)", name)
            if m is None and name == "x" and self.current.kind == "num" and self.current.text.isdigit():
                # whitespace between 'x' and its index
                m = re.fullmatch(r"(\d+)", self.advance().text)
            if m is not None:
                k = int(m.group(1))
                if k < 1 or (self.dimension is not None and k > self.dimension):
                    raise UnknownVariableError(f"unknown variable x{k}", tok.line, tok.column)
                return nodes.Var(k)
            raise self.error(f"unknown identifier {name!r}", tok)
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse(text: str, n: int | None = None, *, allow_t: bool = True) -> Expr:
    """Parse ``text`` into an expression over x1..xn (and t).

    ``n=None`` accepts any coordinate index.  Raises :class:`ExprSyntaxError`
    with the offending line and column, or :class:`UnknownVariableError` for
    an index outside 1..n.
    """
    return _Parser(text, n, allow_t).parse()
