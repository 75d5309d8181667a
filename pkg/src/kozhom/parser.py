"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace is ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

Names must be declared variables of the target ring; integer literals are
reduced modulo the ring characteristic.
"""
from __future__ import annotations

import re

from .poly import Poly, PolyRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        result = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return result

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self) -> Poly:
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise self.error("exponent must be a nonnegative integer literal", tok)
            return base ** int(tok[1])
        return base

    def atom(self) -> Poly:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return self.ring.constant(int(val))
        if kind == "name":
            if val not in self.ring.names:
                raise ParseError(f"unknown variable {val!r}", pos, self.text)
            return self.ring.var(val)
        if tok[:2] == ("op", "("):
            inner = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                raise self.error("expected ')'", close)
            return inner
        if kind == "end":
            raise self.error("unexpected end of expression", tok)
        raise self.error(f"unexpected token {val!r}", tok)


def parse_polynomial(text: str, ring: PolyRing) -> Poly:
    """Parse ``text`` into a polynomial of ``ring``.

    >>> R = PolyRing(["x", "y", "z"], 5)
    >>> str(parse_polynomial("2*x^2 - 7", R))
    '2*x^2 + 3'
    """
    if not isinstance(text, str):
        raise TypeError("expected an expression string")
    return _Parser(text, ring).parse()
