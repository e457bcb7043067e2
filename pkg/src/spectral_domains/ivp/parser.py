"""Recursive-descent parser for polynomial vector fields.

Grammar (``;`` separates the n component expressions)::

    field   := expr (";" expr)*
    expr    := term (("+" | "-") term)*
    term    := unary ("*" unary)*
    unary   := "-" unary | primary
    primary := NUMBER | VAR | "(" expr ")"

NUMBER is an integer, a decimal such as ``0.25`` or a fraction such as
``3/4``; VAR is ``y1`` .. ``yn``. A minus sign directly in front of a
NUMBER folds into a negative constant. Parentheses and unary minus nest at
most ``MAX_NESTING`` levels and each expression tree is at most ``MAX_DEPTH``
high, so evaluation never runs out of stack.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from spectral_domains.exceptions import DimensionMismatch, ParseError
from spectral_domains.ivp.expr import Add, Const, FieldExpr, Mul, Neg, Sub, Var, expr_depth

__all__ = ["MAX_DEPTH", "MAX_NESTING", "parse_field"]

MAX_NESTING = 64
MAX_DEPTH = 256

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+|/\d+)?)|(?P<var>y\d+)|(?P<op>[-+*;()]))"
)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # "number" | "var" | "op" | "end"
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.lastgroup is None:
            start = len(text) - len(text[pos:].lstrip())
            msg = f"Unexpected character {text[start]!r}"
            raise ParseError(msg, start)
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int) -> None:
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n
        self.nesting = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.i]

    def _advance(self) -> _Token:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def _at(self, op: str) -> bool:
        return self.current.kind == "op" and self.current.text == op

    def _enter(self) -> None:
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            msg = f"Nesting deeper than {MAX_NESTING} levels"
            raise ParseError(msg, self.current.position)

    def _fail(self, expected: str) -> ParseError:
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        return ParseError(f"Expected {expected}, found {found}", token.position)

    def _number(self) -> Fraction:
        token = self._advance()
        try:
            return Fraction(token.text)
        except ZeroDivisionError as exc:
            msg = f"Zero denominator in {token.text!r}"
            raise ParseError(msg, token.position) from exc

    def field(self) -> list[FieldExpr]:
        exprs = [self._component()]
        while self._at(";"):
            self._advance()
            exprs.append(self._component())
        if self.current.kind != "end":
            raise self._fail("an operator or ';'")
        return exprs

    def _component(self) -> FieldExpr:
        start = self.current.position
        node = self.expr()
        if expr_depth(node) > MAX_DEPTH:
            msg = f"Expression deeper than {MAX_DEPTH} operations"
            raise ParseError(msg, start)
        return node

    def expr(self) -> FieldExpr:
        node = self.term()
        while self._at("+") or self._at("-"):
            op = self._advance().text
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self) -> FieldExpr:
        node = self.unary()
        while self._at("*"):
            self._advance()
            node = Mul(node, self.unary())
        return node

    def unary(self) -> FieldExpr:
        if self._at("-"):
            self._advance()
            if self.current.kind == "number":
                return Const(-self._number())
            self._enter()
            node = Neg(self.unary())
            self.nesting -= 1
            return node
        return self.primary()

    def primary(self) -> FieldExpr:
        token = self.current
        if token.kind == "number":
            return Const(self._number())
        if token.kind == "var":
            self._advance()
            index = int(token.text[1:]) - 1
            if not 0 <= index < self.n:
                msg = f"Unknown variable {token.text!r} for dimension {self.n}"
                raise ParseError(msg, token.position)
            return Var(index)
        if self._at("("):
            self._enter()
            self._advance()
            node = self.expr()
            if not self._at(")"):
                raise self._fail("')'")
            self._advance()
            self.nesting -= 1
            return node
        raise self._fail("a number, a variable or '('")


def parse_field(text: str, n: int) -> list[FieldExpr]:
    """Parse ``n`` semicolon-separated component expressions over ``y1`` .. ``yn``.

    Raises:
        ParseError: on malformed text, with the offending position.
        DimensionMismatch: if the text holds a different number of expressions.
    """
    exprs = _Parser(text, n).field()
    if len(exprs) != n:
        msg = f"Expected {n} field expressions, got {len(exprs)}"
        raise DimensionMismatch(msg)
    return exprs
