"""Truncated series over F_{p^k} with exponents in Z[1/p].

A series is a finite sum of terms c * t^e plus an error term O(t^P). Exponents
have denominators dividing p^N, where N is the ring's *perfection cap*: the ring
models the perfect hull of F_{p^k}((t)) only to depth N, and inverse Frobenius
past that depth raises :class:`PerfectionCapError`.

Internally exponents are integers scaled by p^N. The precision P is either an
integer (same scaling) or ``None`` for an exact, finite-support element.
Precision is tracked pessimistically and nothing below P is ever guessed:
asking for the valuation of a series with no certified term raises
:class:`PrecisionError`.
"""
from __future__ import annotations

import heapq
import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .exponent import INF, PExponent
from .gf import GaloisField, GaloisFieldElement, gf_make


class PrecisionError(ArithmeticError):
    """A result would depend on coefficients below the certified precision."""


class PerfectionCapError(ArithmeticError):
    """An exponent would need a denominator beyond p^N."""


class SeriesRing:
    """Parent of truncated series over ``field`` with perfection cap ``cap``."""

    def __init__(self, field: GaloisField, cap: int = 0):
        if cap < 0:
            raise ValueError("cap must be >= 0")
        self.field = field
        self.cap = cap
        self.p = field.p
        self.scale = field.p**cap

    def __repr__(self) -> str:
        return f"SeriesRing({self.field!r}, cap={self.cap})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SeriesRing) and self.field == other.field and self.cap == other.cap

    def __hash__(self) -> int:
        return hash((self.field, self.cap))

    # --- exponent scaling ---------------------------------------------------

    def to_scaled(self, e) -> int:
        e = Fraction(e) * self.scale
        if e.denominator != 1:
            raise PerfectionCapError(f"exponent {Fraction(e) / self.scale} needs denominator beyond {self.p}^{self.cap}")
        return e.numerator

    def from_scaled(self, s: int) -> PExponent:
        return PExponent(Fraction(s, self.scale), self.p)

    def _prec_in(self, precision) -> int | None:
        if precision is None or precision is INF:
            return None
        # every grid exponent below an off-grid bound is also below its ceiling
        return math.ceil(Fraction(precision) * self.scale)

    # --- constructors -------------------------------------------------------

    def __call__(self, value) -> TruncatedSeries:
        if isinstance(value, TruncatedSeries):
            if value.ring != self:
                raise ValueError("series from a different ring")
            return value
        c = self.field(value).value
        return TruncatedSeries(self, ((0, c),) if c else (), None)

    def zero(self) -> TruncatedSeries:
        return TruncatedSeries(self, (), None)

    def one(self) -> TruncatedSeries:
        return TruncatedSeries(self, ((0, 1),), None)

    def monomial(self, exponent=1, coeff=1, precision=INF) -> TruncatedSeries:
        return self.series([(exponent, coeff)], precision)

    def t(self, exponent=1, precision=INF) -> TruncatedSeries:
        return self.monomial(exponent, 1, precision)

    def series(self, terms: Iterable, precision=INF) -> TruncatedSeries:
        """Build from (exponent, coefficient) pairs; repeated exponents are summed."""
        F = self.field
        acc: dict[int, int] = {}
        for e, c in terms:
            s = self.to_scaled(e)
            acc[s] = F.add(acc.get(s, 0), F(c).value)
        return _build(self, acc, self._prec_in(precision))


def _build(ring: SeriesRing, acc: dict[int, int], prec: int | None) -> TruncatedSeries:
    items = sorted((e, c) for e, c in acc.items() if c and (prec is None or e < prec))
    return TruncatedSeries(ring, tuple(items), prec)


def _conv(a: np.ndarray, b: np.ndarray, p: int, n: int) -> np.ndarray:
    """First n coefficients of a*b mod p. Large inputs go through a float FFT,
    which is exact while the coefficient sums stay far below 2^53."""
    a, b = a[:n], b[:n]
    if min(len(a), len(b)) < 64 or len(a) * len(b) < 1 << 20 or (p - 1) ** 2 * min(len(a), len(b)) > 1 << 40:
        return np.convolve(a, b)[:n] % p
    size = 1 << (len(a) + len(b) - 1).bit_length()
    fa = np.fft.rfft(a.astype(np.float64), size)
    fb = np.fft.rfft(b.astype(np.float64), size)
    out = np.rint(np.fft.irfft(fa * fb, size)[:n]).astype(np.int64)
    return out % p


def _grid_step(*exps: Iterable[int]) -> int:
    g = 0
    for seq in exps:
        for e in seq:
            g = math.gcd(g, e)
    return g or 1


def _dense_mul(ring: SeriesRing, at, bt, prec: int | None) -> TruncatedSeries:
    """Prime-field product by integer convolution on the exponent grid."""
    p = ring.p
    a0, b0 = at[0][0], bt[0][0]
    try:
        ea = np.fromiter((e - a0 for e, _ in at), np.int64, len(at))
        eb = np.fromiter((e - b0 for e, _ in bt), np.int64, len(bt))
    except OverflowError:
        return _sparse_mul(ring, at, bt, prec)
    ca = np.fromiter((c for _, c in at), np.int64, len(at))
    cb = np.fromiter((c for _, c in bt), np.int64, len(bt))
    g = int(np.gcd.reduce(np.concatenate([ea, eb]))) or 1
    span = (int(ea[-1]) + int(eb[-1])) // g + 1
    if prec is not None:
        span = min(span, -(-(prec - a0 - b0) // g))
    ia, ib = ea // g, eb // g
    da = np.zeros(min(int(ia[-1]) + 1, span), dtype=np.int64)
    db = np.zeros(min(int(ib[-1]) + 1, span), dtype=np.int64)
    keep_a, keep_b = ia < len(da), ib < len(db)
    da[ia[keep_a]] = ca[keep_a]
    db[ib[keep_b]] = cb[keep_b]
    conv = _conv(da, db, p, span)
    nz = np.nonzero(conv)[0]
    base = a0 + b0
    terms = tuple(zip((i * g + base for i in nz.tolist()), conv[nz].tolist()))
    if prec is not None:
        terms = tuple(t for t in terms if t[0] < prec)
    return TruncatedSeries(ring, terms, prec)


def _sparse_mul(ring: SeriesRing, at, bt, prec: int | None) -> TruncatedSeries:
    F = ring.field
    acc: dict[int, int] = {}
    for ea, ca in at:
        for eb, cb in bt:
            e = ea + eb
            if prec is not None and e >= prec:
                break
            acc[e] = F.add(acc.get(e, 0), F.mul(ca, cb))
    return _build(ring, acc, prec)


def _dense_unit_inverse(r: list[tuple[int, int]], rel: int, p: int) -> list[tuple[int, int]]:
    """Inverse of 1 + sum c t^e (all e > 0) below t^rel, by Newton iteration over F_p."""
    g = _grid_step(e for e, _ in r)
    L = -(-rel // g)
    u = np.zeros(L, dtype=np.int64)
    u[0] = 1
    for e, c in r:
        if e // g < L:
            u[e // g] = c
    s = np.ones(1, dtype=np.int64)
    n = 1
    while n < L:
        n = min(2 * n, L)
        us = _conv(u[:n], s, p, n)
        corr = (-us) % p
        corr[0] = (corr[0] + 2) % p
        s = _conv(s, corr, p, n)
    nz = np.nonzero(s)[0]
    return [(int(i) * g, int(s[i])) for i in nz if int(i) * g < rel]


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncatedSeries:
    __slots__ = ("ring", "_terms", "_prec")

    def __init__(self, ring: SeriesRing, terms: tuple, prec: int | None):
        self.ring = ring
        self._terms = terms
        self._prec = prec

    # --- inspection ---------------------------------------------------------

    @property
    def field(self) -> GaloisField:
        return self.ring.field

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def precision(self):
        return INF if self._prec is None else self.ring.from_scaled(self._prec)

    @property
    def is_exact(self) -> bool:
        return self._prec is None

    @property
    def terms(self) -> list[tuple[PExponent, GaloisFieldElement]]:
        F = self.field
        return [(self.ring.from_scaled(e), GaloisFieldElement(F, c)) for e, c in self._terms]

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        """True when no term is certified nonzero (exact zero, or zero up to precision)."""
        return not self._terms

    def valuation(self):
        if self._terms:
            return self.ring.from_scaled(self._terms[0][0])
        if self._prec is None:
            return INF
        raise PrecisionError(f"valuation not certified: series is O(t^{self.precision})")

    def leading_coefficient(self) -> GaloisFieldElement:
        if not self._terms:
            raise PrecisionError("no certified leading term")
        return GaloisFieldElement(self.field, self._terms[0][1])

    def leading_term(self) -> TruncatedSeries:
        """The leading monomial, as an exact series."""
        if not self._terms:
            raise PrecisionError("no certified leading term")
        return TruncatedSeries(self.ring, self._terms[:1], None)

    def coefficient(self, exponent) -> GaloisFieldElement:
        s = self.ring.to_scaled(exponent)
        if self._prec is not None and s >= self._prec:
            raise PrecisionError(f"coefficient of t^{exponent} is below precision")
        for e, c in self._terms:
            if e == s:
                return GaloisFieldElement(self.field, c)
        return self.field.zero()

    def _low(self) -> int | None:
        """Lower bound for the (scaled) valuation; None means exact zero."""
        if self._terms:
            return self._terms[0][0]
        return self._prec

    def zero(self) -> TruncatedSeries:
        return self.ring.zero()

    def one(self) -> TruncatedSeries:
        return self.ring.one()

    def truncate(self, precision) -> TruncatedSeries:
        """Lower the precision to ``precision`` (never raises it)."""
        P = self.ring._prec_in(precision)
        P = _min_prec(self._prec, P)
        return TruncatedSeries(self.ring, tuple(t for t in self._terms if P is None or t[0] < P), P)

    def with_relative_precision(self, rel) -> TruncatedSeries:
        """Truncate to valuation + rel (exact series become inexact)."""
        v = self._low()
        if v is None:
            return self
        return self.truncate(self.ring.from_scaled(v) + Fraction(rel))

    # --- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> TruncatedSeries | None:
        if isinstance(other, TruncatedSeries):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("series from different rings")
            return other
        if isinstance(other, (int, GaloisFieldElement)):
            return self.ring(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.field
        acc = dict(self._terms)
        if F.k == 1:
            p = F.p
            for e, c in o._terms:
                acc[e] = (acc.get(e, 0) + c) % p
        else:
            for e, c in o._terms:
                acc[e] = F.add(acc.get(e, 0), c)
        return _build(self.ring, acc, _min_prec(self._prec, o._prec))

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        if F.k == 1:
            p = F.p
            return TruncatedSeries(self.ring, tuple((e, p - c) for e, c in self._terms), self._prec)
        return TruncatedSeries(self.ring, tuple((e, F.neg(c)) for e, c in self._terms), self._prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ring, F = self.ring, self.field
        la, lb = self._low(), o._low()
        if (la is None and self._prec is None) or (lb is None and o._prec is None):
            return ring.zero()
        prec = None
        if self._prec is not None:
            prec = self._prec + lb
        if o._prec is not None:
            prec = _min_prec(prec, o._prec + la)
        at, bt = self._terms, o._terms
        if prec is not None:
            at = [t for t in at if t[0] + lb < prec]
            bt = [t for t in bt if t[0] + la < prec]
        if not at or not bt:
            return TruncatedSeries(ring, (), prec)
        if F.k == 1 and len(at) * len(bt) > 256:
            return _dense_mul(ring, at, bt, prec)
        return _sparse_mul(ring, at, bt, prec)

    __rmul__ = __mul__

    def scale(self, c) -> TruncatedSeries:
        F = self.field
        cv = F(c).value
        if cv == 0:
            return self.ring.zero()
        return TruncatedSeries(self.ring, tuple((e, F.mul(x, cv)) for e, x in self._terms), self._prec)

    def shift(self, exponent) -> TruncatedSeries:
        """Multiply by t^exponent."""
        s = self.ring.to_scaled(exponent)
        P = None if self._prec is None else self._prec + s
        return TruncatedSeries(self.ring, tuple((e + s, c) for e, c in self._terms), P)

    def inverse(self, precision=None) -> TruncatedSeries:
        """Multiplicative inverse.

        Exact non-monomial inputs have infinite expansions; they need an explicit
        absolute ``precision`` for the result. For inexact inputs ``precision``
        can only lower the natural result precision.
        """
        if not self._terms:
            if self._prec is None:
                raise ZeroDivisionError("inverse of zero series")
            raise PrecisionError("cannot invert a series that is zero up to precision")
        ring, F = self.ring, self.field
        v, c = self._terms[0]
        cinv = F.inv(c)
        target = ring._prec_in(precision)
        if self._prec is None and len(self._terms) == 1:
            res = TruncatedSeries(ring, ((-v, cinv),), None)
            return res if target is None else res.truncate(precision)
        rel = None if self._prec is None else self._prec - v
        if target is not None:
            rel = target + v if rel is None else min(rel, target + v)
        if rel is None:
            raise PrecisionError("inverse of an exact non-monomial series needs a precision")
        r = [(e - v, F.mul(x, cinv)) for e, x in self._terms[1:] if e - v < rel]
        if F.k == 1 and r:
            s = dict(_dense_unit_inverse(r, rel, F.p))
            acc_out = {e - v: F.mul(x, cinv) for e, x in s.items()}
            return _build(ring, acc_out, rel - v)
        s = {0: 1}
        heap = [f for f, _ in r]
        heapq.heapify(heap)
        seen = set()
        while heap:
            e = heapq.heappop(heap)
            if e in seen:
                continue
            seen.add(e)
            if e >= rel:
                break
            acc = 0
            for f, rf in r:
                if f > e:
                    break
                se = s.get(e - f)
                if se:
                    acc = F.add(acc, F.mul(rf, se))
            if acc:
                s[e] = F.neg(acc)
                for f, _ in r:
                    if e + f < rel:
                        heapq.heappush(heap, e + f)
        acc_out = {e - v: F.mul(x, cinv) for e, x in s.items() if e < rel}
        return _build(ring, acc_out, rel - v)

    def __truediv__(self, other):
        if isinstance(other, (int, GaloisFieldElement)):
            return self.scale(self.field(other).inverse())
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> TruncatedSeries:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self.ring.one()
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, i: int = 1) -> TruncatedSeries:
        """phi^i: raise to the p^i-th power; negative i takes p^|i|-th roots."""
        ring, F = self.ring, self.field
        if i >= 0:
            m = ring.p**i
            terms = tuple((e * m, F.frob(c, i)) for e, c in self._terms)
            P = None if self._prec is None else self._prec * m
            return TruncatedSeries(ring, terms, P)
        d = ring.p**(-i)
        out = []
        for e, c in self._terms:
            if e % d:
                raise PerfectionCapError(
                    f"phi^{i} of t^{ring.from_scaled(e)} exceeds perfection cap N={ring.cap}")
            out.append((e // d, F.frob(c, i)))
        P = None if self._prec is None else self._prec // d
        return TruncatedSeries(ring, tuple(t for t in out if P is None or t[0] < P), P)

    # --- comparison / display ----------------------------------------------

    def agrees_with(self, other) -> bool:
        """Equal up to the smaller of the two precisions."""
        return (self - other).is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, GaloisFieldElement)):
            other = self.ring(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms and self._prec == other._prec

    def __hash__(self) -> int:
        return hash((self.ring, self._terms, self._prec))

    def __repr__(self) -> str:
        F = self.field
        parts = []
        for e, c in self._terms:
            ex = Fraction(e, self.ring.scale)
            if ex == 0:
                mono = ""
            elif ex == 1:
                mono = "t"
            elif ex.denominator == 1:
                mono = f"t^{ex.numerator}"
            else:
                mono = f"t^({ex})"
            cs = F.format(c)
            if F.k > 1 and "+" in cs:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        if self._prec is not None:
            parts.append(f"O(t^{Fraction(self._prec, self.ring.scale)})")
        return " + ".join(parts) if parts else "0"

    # --- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        F = self.field
        terms = []
        for e, c in self._terms:
            x = self.ring.from_scaled(e)
            terms.append([x.numerator, x.denominator_log, F.to_coeffs(c)])
        prec = None if self._prec is None else self.ring.from_scaled(self._prec).to_pair()
        return {"p": F.p, "k": F.k, "cap": self.ring.cap, "terms": terms, "precision": prec}

    @classmethod
    def from_json(cls, obj: dict, ring: SeriesRing | None = None) -> TruncatedSeries:
        p, k = obj["p"], obj["k"]
        if ring is None:
            cap = obj.get("cap")
            if cap is None:
                cap = max([t[1] for t in obj["terms"]] + [0 if obj["precision"] is None else obj["precision"][1]])
            ring = SeriesRing(gf_make(p, k), cap)
        F = ring.field
        terms = [(Fraction(n, p**e), GaloisFieldElement(F, F.from_coeffs(c))) for n, e, c in obj["terms"]]
        prec = obj["precision"]
        precision = INF if prec is None else Fraction(prec[0], p**prec[1])
        return ring.series(terms, precision)
