"""Infix polynomial expressions: `+ - * ^`, rational literals `p/q`, parentheses.

Division appears only inside rational literals; dividing by a variable or a
parenthesized expression is a syntax error.  ``parse_poly`` is the single
entry point used by the definition-file reader, and the canonical string
produced by ``Poly.__str__`` always reparses to an equal polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra import Poly


class ParseError(ValueError):
    """Syntax or name error with a 0-based column offset into the text."""

    def __init__(self, message: str, column: int):
        super().__init__(message)
        self.column = column

    def __str__(self) -> str:
        return f"{self.args[0]} (column {self.column + 1})"


_SYMBOLS = "+-*^()/"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append(("sym", ch, i))
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(("int", text[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("name", text[start:i], start))
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], variables: Sequence[str], length: int):
        self.tokens = tokens
        self.pos = 0
        self.variables = tuple(variables)
        self.length = length

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str, int] | None:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def expect_sym(self, sym: str) -> None:
        tok = self.next()
        if tok is None:
            raise ParseError(f"expected {sym!r} before end of expression", self.length)
        if tok[0] != "sym" or tok[1] != sym:
            raise ParseError(f"expected {sym!r}, found {tok[1]!r}", tok[2])

    def parse_expr(self) -> Poly:
        value = self.parse_term()
        while True:
            tok = self.peek()
            if tok and tok[0] == "sym" and tok[1] in "+-":
                self.next()
                rhs = self.parse_term()
                value = value + rhs if tok[1] == "+" else value - rhs
            else:
                return value

    def parse_term(self) -> Poly:
        value = self.parse_factor()
        while True:
            tok = self.peek()
            if tok and tok[0] == "sym" and tok[1] == "*":
                self.next()
                value = value * self.parse_factor()
            elif tok and tok[0] == "sym" and tok[1] == "/":
                raise ParseError("division is allowed only in rational literals", tok[2])
            else:
                return value

    def parse_factor(self) -> Poly:
        tok = self.peek()
        if tok and tok[0] == "sym" and tok[1] == "-":
            self.next()
            return -self.parse_factor()
        if tok and tok[0] == "sym" and tok[1] == "+":
            self.next()
            return self.parse_factor()
        base = self.parse_primary()
        tok = self.peek()
        if tok and tok[0] == "sym" and tok[1] == "^":
            self.next()
            exp_tok = self.next()
            if exp_tok is None or exp_tok[0] != "int":
                col = exp_tok[2] if exp_tok else self.length
                raise ParseError("exponent must be a nonnegative integer", col)
            return base ** int(exp_tok[1])
        return base

    def parse_primary(self) -> Poly:
        tok = self.next()
        if tok is None:
            raise ParseError("unexpected end of expression", self.length)
        kind, text, col = tok
        if kind == "int":
            value = Fraction(int(text))
            nxt = self.peek()
            if nxt and nxt[0] == "sym" and nxt[1] == "/":
                self.next()
                den_tok = self.next()
                if den_tok is None or den_tok[0] != "int":
                    dcol = den_tok[2] if den_tok else self.length
                    raise ParseError("denominator must be an integer literal", dcol)
                if int(den_tok[1]) == 0:
                    raise ParseError("zero denominator", den_tok[2])
                value = Fraction(int(text), int(den_tok[1]))
            return Poly.const(value, self.variables)
        if kind == "name":
            if text not in self.variables:
                raise ParseError(f"unknown coordinate {text!r}", col)
            return Poly.variable(text, self.variables)
        if kind == "sym" and text == "(":
            inner = self.parse_expr()
            self.expect_sym(")")
            return inner
        raise ParseError(f"unexpected {text!r}", col)


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse an infix polynomial expression over the given coordinate names."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression", 0)
    parser = _Parser(tokens, variables, len(text))
    value = parser.parse_expr()
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(f"unexpected {trailing[1]!r} after expression", trailing[2])
    return value
