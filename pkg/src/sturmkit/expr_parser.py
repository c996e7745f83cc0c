# Number Expression Parser
# Recursive descent over + - * /, unary signs, parentheses, integers and sqrt(n).
#
#   expr    := term (('+' | '-') term)*
#   term    := unary (('*' | '/') unary)*
#   unary   := ('+' | '-') unary | primary
#   primary := INT | 'sqrt' '(' INT ')' | '(' expr ')'
#
# Values stay inside ℚ(√D) for a single squarefree D per expression.

import re
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from .errors import ExpressionSyntaxError
from .realnum import RealValue, promote, quadratic_basis, rational_basis, squarefree_core

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|(\S))")


class _Token(NamedTuple):
    kind: str
    text: str
    pos: int


class _Surd(NamedTuple):
    x: Fraction
    y: Fraction
    d: int  # 1 while no square root has appeared


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(_Token("int", m.group(1), start))
        elif m.group(2):
            tokens.append(_Token("sqrt", "sqrt", start))
        else:
            ch = m.group(3)
            if ch not in "+-*/()":
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", start)
            tokens.append(_Token(ch, ch, start))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def current(self):
        return self.tokens[self.i]

    def take(self, kind):
        tok = self.current
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise ExpressionSyntaxError(f"expected {kind!r}, found {found!r}", tok.pos)
        self.i += 1
        return tok

    def parse(self):
        if self.current.kind == "end":
            raise ExpressionSyntaxError("empty expression", 0)
        value = self.expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.current.text!r}", self.current.pos)
        return value

    def expr(self):
        value = self.term()
        while self.current.kind in ("+", "-"):
            op = self.take(self.current.kind)
            rhs = self.term()
            value = _combine(value, rhs, op)
        return value

    def term(self):
        value = self.unary()
        while self.current.kind in ("*", "/"):
            op = self.take(self.current.kind)
            rhs = self.unary()
            value = _combine(value, rhs, op)
        return value

    def unary(self):
        if self.current.kind in ("+", "-"):
            op = self.take(self.current.kind)
            value = self.unary()
            return value if op.kind == "+" else _Surd(-value.x, -value.y, value.d)
        return self.primary()

    def primary(self):
        tok = self.current
        if tok.kind == "int":
            self.i += 1
            return _Surd(Fraction(int(tok.text)), Fraction(0), 1)
        if tok.kind == "sqrt":
            self.i += 1
            self.take("(")
            arg = self.take("int")
            self.take(")")
            return _sqrt(int(arg.text))
        if tok.kind == "(":
            self.i += 1
            value = self.expr()
            self.take(")")
            return value
        found = tok.text or "end of input"
        raise ExpressionSyntaxError(f"unexpected {found!r}", tok.pos)


def _sqrt(n):
    if n == 0:
        return _Surd(Fraction(0), Fraction(0), 1)
    d = squarefree_core(n)
    f = isqrt(n // d)
    if d == 1:
        return _Surd(Fraction(f), Fraction(0), 1)
    return _Surd(Fraction(0), Fraction(f), d)


def _combine(a, b, op):
    if a.y and b.y and a.d != b.d:
        raise ExpressionSyntaxError(f"mixed square roots sqrt({a.d}) and sqrt({b.d})", op.pos)
    d = a.d if a.y else b.d
    if op.kind == "+":
        return _Surd(a.x + b.x, a.y + b.y, d)
    if op.kind == "-":
        return _Surd(a.x - b.x, a.y - b.y, d)
    if op.kind == "*":
        return _Surd(a.x * b.x + a.y * b.y * d, a.x * b.y + a.y * b.x, d)
    norm = b.x * b.x - b.y * b.y * d
    if norm == 0:
        raise ExpressionSyntaxError("division by zero", op.pos)
    # multiply by the conjugate of the divisor
    return _Surd((a.x * b.x - a.y * b.y * d) / norm, (a.y * b.x - a.x * b.y) / norm, d)


def parse_number(text, basis=None):
    """Parse an expression into a RealValue (quadratic when a surd remains)."""
    surd = _Parser(str(text)).parse()
    if surd.y:
        value = RealValue(quadratic_basis(surd.d), (surd.x, surd.y))
    else:
        value = RealValue.rational(rational_basis(), surd.x)
    return promote(value, basis) if basis is not None else value
