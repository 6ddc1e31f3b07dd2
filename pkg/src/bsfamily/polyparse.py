"""Recursive-descent parser for polynomial expressions.

Grammar (no implicit multiplication):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*      '/' only by nonzero constants
    factor := ('+' | '-') factor | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .arith import ParamPoly
from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at position {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, names):
        self.toks = tokens
        self.i = 0
        self.names = {nm: k for k, nm in enumerate(names)}
        self.nv = len(names)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise ParseError(f"expected {op!r}, got {t[1]!r}")

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            w = self.factor()
            if op == "*":
                v = v * w
            else:
                if not w.is_constant() or w.is_zero():
                    raise ParseError("division only by nonzero constants")
                v = v * (1 / w.constant_term())
        return v

    def factor(self):
        t = self.peek()
        if t in (("op", "-"), ("op", "+")):
            self.take()
            v = self.factor()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            t = self.take()
            if t[0] != "num":
                raise ParseError("exponent must be a non-negative integer")
            v = v ** t[1]
        return v

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ParamPoly.constant(val, self.nv)
        if kind == "name":
            if val not in self.names:
                raise ParseError(f"unknown variable {val!r}")
            return ParamPoly.var(self.names[val], self.nv)
        if (kind, val) == ("op", "("):
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected token {val!r}" if val is not None else "unexpected end of input")


def parse_poly(text: str, names: Sequence[str]) -> ParamPoly:
    """Parse `text` as a polynomial in the variables `names` (in that order)."""
    if len(set(names)) != len(names):
        raise ParseError("variable names must be distinct")
    toks = tokenize(text)
    if not toks:
        raise ParseError("empty expression")
    p = _Parser(toks, names)
    v = p.expr()
    if p.i != len(toks):
        raise ParseError(f"trailing input at token {p.peek()[1]!r}")
    return v


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
