"""Parser for series literals.

Grammar (whitespace ignored)::

    series  := ['-'] term (('+' | '-') term)*
    term    := coeff ['*' mono] | mono | 'O(' mono ')'
    mono    := 't' ['^' expo]
    expo    := INT | '(' ['-'] INT ['/' INT ['^' INT]] ')' | '-' INT
    coeff   := INT | 'g' ['^' INT] | '(' field element ')'

Examples: ``t + t^3``, ``2*t^(1/3) - t^2 + O(t^5)``, ``(g+1)*t^(3/2^2)``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .exponent import INF
from .gf import GaloisField, GaloisFieldElement
from .series import SeriesRing, TruncatedSeries


class SeriesSyntaxError(ValueError):
    def __init__(self, message: str, text: str, start: int, end: int):
        self.span = (start, end)
        caret = " " * start + "^" * max(1, end - start)
        super().__init__(f"{message} at [{start}:{end}]\n  {text}\n  {caret}")


_TOKEN = re.compile(r"\s*(?:(\d+)|(O\()|([tg])|([-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos
            while j < len(text) and text[j].isspace():
                j += 1
            raise SeriesSyntaxError(f"unexpected character {text[j]!r}", text, j, j + 1)
        kind = "int" if m.group(1) else "O" if m.group(2) else "name" if m.group(3) else "op"
        val = m.group(m.lastindex)
        out.append((kind, val, m.start(m.lastindex), m.end()))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, field: GaloisField):
        self.text = text
        self.field = field
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def fail(self, msg: str, tok=None):
        if tok is None:
            tok = self.peek()
        if tok is None:
            n = len(self.text)
            raise SeriesSyntaxError(msg + " (unexpected end)", self.text, n, n + 1)
        raise SeriesSyntaxError(msg, self.text, tok[2], tok[3])

    def take(self, val: str | None = None, kind: str | None = None):
        tok = self.peek()
        if tok is None or (val is not None and tok[1] != val) or (kind is not None and tok[0] != kind):
            self.fail(f"expected {val or kind}")
        self.i += 1
        return tok

    def at(self, val: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[1] == val

    def integer(self) -> int:
        return int(self.take(kind="int")[1])

    def exponent(self) -> Fraction:
        if self.at("-"):
            self.take("-")
            return -Fraction(self.integer())
        if not self.at("("):
            return Fraction(self.integer())
        self.take("(")
        sign = -1 if self.at("-") else 1
        if sign < 0:
            self.take("-")
        num = self.integer()
        den = 1
        if self.at("/"):
            self.take("/")
            base = self.integer()
            if self.at("^"):
                self.take("^")
                base = base ** self.integer()
            den = base
        self.take(")")
        return sign * Fraction(num, den)

    def mono(self) -> Fraction:
        tok = self.peek()
        if tok is None or tok[1] != "t":
            self.fail("expected t")
        self.i += 1
        if self.at("^"):
            self.take("^")
            return self.exponent()
        return Fraction(1)

    def coeff(self) -> GaloisFieldElement:
        tok = self.peek()
        F = self.field
        if tok is None:
            self.fail("expected a term")
        if tok[0] == "int":
            return F(self.integer())
        if tok[1] == "g":
            self.take()
            e = 1
            if self.at("^"):
                self.take("^")
                e = self.integer()
            return F.gen() ** e
        if tok[1] == "(":
            start = self.take("(")[2]
            depth, j = 1, self.i
            while j < len(self.toks) and depth:
                depth += {"(": 1, ")": -1}.get(self.toks[j][1], 0)
                j += 1
            if depth:
                self.fail("unbalanced parenthesis", tok)
            end = self.toks[j - 1][2]
            inner = self.text[self.toks[self.i][2]:end] if self.i < j - 1 else ""
            try:
                value = F.parse(inner)
            except ValueError as exc:
                raise SeriesSyntaxError(f"bad field element: {exc}", self.text, start, self.toks[j - 1][3]) from None
            self.i = j
            return value
        self.fail("expected a coefficient")

    def parse(self) -> tuple[list, object]:
        terms = []
        precision = INF
        sign = 1
        if self.at("-"):
            self.take("-")
            sign = -1
        while True:
            tok = self.peek()
            if tok is None:
                self.fail("expected a term")
            if tok[0] == "O":
                self.take()
                precision = self.mono()
                self.take(")")
            elif tok[1] == "t":
                one = self.field.one()
                terms.append((self.mono(), -one if sign < 0 else one))
            else:
                c = self.coeff()
                if sign < 0:
                    c = -c
                if self.at("*"):
                    self.take("*")
                    terms.append((self.mono(), c))
                else:
                    terms.append((Fraction(0), c))
            nxt = self.peek()
            if nxt is None:
                break
            if nxt[1] not in "+-":
                self.fail("expected + or -")
            self.take()
            sign = -1 if nxt[1] == "-" else 1
        return terms, precision


def parse_series(text: str, ring: SeriesRing, precision=None) -> TruncatedSeries:
    """Parse a literal into ``ring``; an explicit ``precision`` overrides any O(...) term."""
    terms, prec = _Parser(text, ring.field).parse()
    if precision is not None:
        prec = precision if prec is INF else min(prec, Fraction(precision))
    return ring.series(terms, prec)


def required_cap(text: str, field: GaloisField) -> int:
    """Smallest N such that every exponent in the literal has denominator dividing p^N."""
    p = field.p
    terms, prec = _Parser(text, field).parse()
    exps = [e for e, _ in terms] + ([] if prec is INF else [prec])
    cap = 0
    for e in exps:
        d = Fraction(e).denominator
        n = 0
        while d % p == 0:
            d //= p
            n += 1
        if d != 1:
            raise ValueError(f"exponent {e} has a denominator that is not a power of {p}")
        cap = max(cap, n)
    return cap
