"""Polynomials and rational functions over F_q, with places of F_q(t)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exponent import INF
from .gf import GaloisField, GaloisFieldElement


class Poly:
    """Dense polynomial over a Galois field, coefficients stored low -> high as encodings."""

    __slots__ = ("field", "c")

    def __init__(self, field: GaloisField, coeffs: Sequence[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.c = tuple(c)

    @classmethod
    def from_elements(cls, field: GaloisField, elems) -> Poly:
        return cls(field, [field(e).value for e in elems])

    @classmethod
    def t(cls, field: GaloisField) -> Poly:
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field: GaloisField, value) -> Poly:
        return cls(field, (field(value).value,))

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> int:
        return self.c[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field == other.field and self.c == other.c

    def __hash__(self) -> int:
        return hash((self.field, self.c))

    def __add__(self, other: Poly) -> Poly:
        F = self.field
        n = max(len(self.c), len(other.c))
        a = self.c + (0,) * (n - len(self.c))
        b = other.c + (0,) * (n - len(other.c))
        return Poly(F, [F.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> Poly:
        return Poly(self.field, [self.field.neg(x) for x in self.c])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        F = self.field
        if not self.c or not other.c:
            return Poly(F)
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scale(self, s: int) -> Poly:
        return Poly(self.field, [self.field.mul(x, s) for x in self.c])

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = list(self.c)
        dq = other.degree
        inv_lead = F.inv(other.lead())
        q = [0] * max(0, len(r) - dq)
        while len(r) - 1 >= dq and r:
            shift = len(r) - 1 - dq
            coef = F.mul(r[-1], inv_lead)
            q[shift] = coef
            for i, c in enumerate(other.c):
                r[shift + i] = F.sub(r[shift + i], F.mul(coef, c))
            while r and r[-1] == 0:
                r.pop()
        return Poly(F, q), Poly(F, r)

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def __floordiv__(self, other: Poly) -> Poly:
        return self.divmod(other)[0]

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead()))

    def gcd(self, other: Poly) -> Poly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: Poly) -> tuple[Poly, Poly, Poly]:
        """(g, s, u) with s*self + u*other = g monic."""
        F = self.field
        r0, r1 = self, other
        s0, s1 = Poly(F, (1,)), Poly(F)
        u0, u1 = Poly(F), Poly(F, (1,))
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            u0, u1 = u1, u0 - q * u1
        inv = F.inv(r0.lead())
        return r0.scale(inv), s0.scale(inv), u0.scale(inv)

    def frobenius(self, i: int = 1) -> Poly:
        """f(t)^(p^i) for i >= 0."""
        if i < 0:
            raise ValueError("F_q(t) is not perfect: negative Frobenius undefined")
        F = self.field
        step = F.p**i
        out = [0] * (step * self.degree + 1) if self.c else []
        for d, x in enumerate(self.c):
            out[d * step] = F.frob(x, i)
        return Poly(F, out)

    def __call__(self, x):
        F = self.field
        acc = F.zero()
        for c in reversed(self.c):
            acc = acc * x + GaloisFieldElement(F, c)
        return acc

    def is_irreducible(self) -> bool:
        """Exhaustive trial division by monic polynomials of degree <= deg/2."""
        if self.degree < 1:
            return False
        F = self.field
        q = F.q
        for d in range(1, self.degree // 2 + 1):
            for r in range(q**d):
                coeffs = [(r // q**i) % q for i in range(d)] + [1]
                if (self % Poly(F, coeffs)).is_zero():
                    return False
        return True

    def __repr__(self) -> str:
        F = self.field
        if not self.c:
            return "0"
        parts = []
        for d in reversed(range(len(self.c))):
            x = self.c[d]
            if not x:
                continue
            cs = F.format(x)
            if F.k > 1 and "+" in cs:
                cs = f"({cs})"
            mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            if not mono:
                parts.append(cs)
            elif x == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> list[list[int]]:
        return [self.field.to_coeffs(x) for x in self.c]

    @classmethod
    def from_json(cls, field: GaloisField, obj) -> Poly:
        return cls(field, [field.from_coeffs(c) for c in obj])


class RationalFunction:
    """An element of F_q(t) in canonical form: monic denominator, coprime numerator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _canonical: bool = False):
        F = num.field
        if den is None:
            den = Poly(F, (1,))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _canonical:
            if num.is_zero():
                den = Poly(F, (1,))
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
                inv = F.inv(den.lead())
                num, den = num.scale(inv), den.scale(inv)
        self.field = F
        self.num = num
        self.den = den

    @classmethod
    def t(cls, field: GaloisField) -> RationalFunction:
        return cls(Poly.t(field))

    @classmethod
    def const(cls, field: GaloisField, value) -> RationalFunction:
        return cls(Poly.const(field, value))

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        if isinstance(other, (int, GaloisFieldElement)):
            return RationalFunction.const(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int) -> RationalFunction:
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = self.one()
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, i: int = 1) -> RationalFunction:
        return RationalFunction(self.num.frobenius(i), self.den.frobenius(i), _canonical=True)

    @property
    def p(self) -> int:
        return self.field.p

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def zero(self) -> RationalFunction:
        return RationalFunction(Poly(self.field))

    def one(self) -> RationalFunction:
        return RationalFunction(Poly(self.field, (1,)))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, GaloisFieldElement, Poly)):
            other = self._coerce(other)
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        if self.den.degree == 0:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"

    def to_json(self) -> dict:
        F = self.field
        return {"p": F.p, "k": F.k, "num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj, field: GaloisField | None = None) -> RationalFunction:
        from .gf import gf_make
        F = field or gf_make(obj["p"], obj["k"])
        return cls(Poly.from_json(F, obj["num"]), Poly.from_json(F, obj["den"]))


@dataclass(frozen=True)
class Place:
    """A place of F_q(t): a monic irreducible polynomial, or the degree place at infinity."""

    poly: Poly | None = None

    def __post_init__(self):
        if self.poly is not None:
            if self.poly.degree < 1 or self.poly.lead() != 1:
                raise ValueError("finite place needs a monic polynomial of positive degree")
            if not self.poly.is_irreducible():
                raise ValueError(f"{self.poly!r} is not irreducible")

    @classmethod
    def infinite(cls) -> Place:
        return cls(None)

    @classmethod
    def at(cls, field: GaloisField, c) -> Place:
        """The place t = c, i.e. the polynomial t - c."""
        return cls(Poly(field, (field.neg(field(c).value), 1)))

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    def __repr__(self) -> str:
        return "Place(inf)" if self.poly is None else f"Place({self.poly!r})"


def _poly_order(f: Poly, pi: Poly) -> int:
    n = 0
    while True:
        q, r = f.divmod(pi)
        if not r.is_zero():
            return n
        f = q
        n += 1


def rf_valuation(f: RationalFunction, v: Place):
    """Order of vanishing of f at the place v (INF for f = 0)."""
    if f.is_zero():
        return INF
    if v.is_infinite:
        return f.den.degree - f.num.degree
    return _poly_order(f.num, v.poly) - _poly_order(f.den, v.poly)


def residue(f: RationalFunction, v: Place) -> Poly:
    """Image of f in the residue field at v; requires val_v(f) >= 0.

    Finite places give a polynomial of degree < deg(pi); the infinite place a constant.
    """
    val = rf_valuation(f, v)
    if val is not INF and val < 0:
        raise ValueError("residue needs a non-negative valuation")
    F = f.field
    if f.is_zero():
        return Poly(F)
    if v.is_infinite:
        if val > 0:
            return Poly(F)
        return Poly(F, (F.mul(f.num.lead(), F.inv(f.den.lead())),))
    _, s, _ = f.den.xgcd(v.poly)  # s * den = 1 mod pi
    return (f.num * s) % v.poly


def coset_intersect(a: RationalFunction, v1: Place, b: RationalFunction, v2: Place) -> RationalFunction:
    """Some w with val_{v1}(w - a) > 0 and val_{v2}(w - b) > 0."""
    if v1 == v2:
        raise ValueError("coset_intersect needs two distinct places")
    if v1.is_infinite:
        return coset_intersect(b, v2, a, v1)
    r1 = residue(a, v1)
    if v2.is_infinite:
        b0 = residue(b, v2)
        s = (r1 - b0) % v1.poly
        one = Poly(a.field, (1,))
        w = RationalFunction(b0) + RationalFunction(s, v1.poly + one)
    else:
        r2 = residue(b, v2)
        g, s, u = v1.poly.xgcd(v2.poly)  # s*pi1 + u*pi2 = 1
        modulus = v1.poly * v2.poly
        w = RationalFunction((r1 * u * v2.poly + r2 * s * v1.poly) % modulus)
    assert rf_valuation(w - a, v1) > 0 and rf_valuation(w - b, v2) > 0
    return w
