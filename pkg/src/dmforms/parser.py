"""Tiny expression language for ring elements on the command line.

Grammar (whitespace-insensitive):

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-')* power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | 'g1' | 'g2' | 'g3' | '(' expr ')'

Numbers are exact rationals.  Errors carry the 0-based position in the input.
"""

from __future__ import annotations

from fractions import Fraction

from .dmf import G1, G2, G3, DmfElement
from .errors import ParseError

_GENERATORS = {"g1": G1, "g2": G2, "g3": G3}


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, object, int]] = []
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", int(text[i:j]), i))
                i = j
            elif ch.isalpha():
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word not in _GENERATORS:
                    raise ParseError(f"unknown name {word!r}", i)
                self.tokens.append(("gen", word, i))
                i = j
            elif ch in "+-*^()/":
                self.tokens.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", i)
        self.pos = 0

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok


def parse_expression(text: str) -> DmfElement:
    """Parse a polynomial in g1, g2, g3 with exact rational coefficients."""
    toks = _Tokens(text)
    value = _expr(toks)
    kind, _, pos = toks.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", pos)
    return value


def _expr(toks) -> DmfElement:
    value = _term(toks)
    while toks.peek()[0] in ("+", "-"):
        op, _, _ = toks.take()
        rhs = _term(toks)
        value = value + rhs if op == "+" else value - rhs
    return value


def _term(toks) -> DmfElement:
    value = _unary(toks)
    while toks.peek()[0] == "*":
        toks.take()
        value = value * _unary(toks)
    return value


def _unary(toks) -> DmfElement:
    sign = 1
    while toks.peek()[0] in ("+", "-"):
        if toks.take()[0] == "-":
            sign = -sign
    value = _power(toks)
    return value if sign == 1 else -value


def _power(toks) -> DmfElement:
    base = _atom(toks)
    if toks.peek()[0] == "^":
        toks.take()
        kind, val, pos = toks.take()
        if kind != "int":
            raise ParseError("exponent must be a nonnegative integer", pos)
        base = base ** val
    return base


def _atom(toks) -> DmfElement:
    kind, val, pos = toks.take()
    if kind == "int":
        number = Fraction(val)
        if toks.peek()[0] == "/":
            toks.take()
            dkind, dval, dpos = toks.take()
            if dkind != "int":
                raise ParseError("denominator must be an integer", dpos)
            if dval == 0:
                raise ParseError("division by zero", dpos)
            number /= dval
        return DmfElement.constant(number)
    if kind == "gen":
        return _GENERATORS[val]
    if kind == "(":
        value = _expr(toks)
        ckind, _, cpos = toks.take()
        if ckind != ")":
            raise ParseError("expected ')'", cpos)
        return value
    raise ParseError("expected a number, generator, or '('", pos)
