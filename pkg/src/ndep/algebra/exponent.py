"""Valuation values: rationals with p-power denominators, and a distinct infinity."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational


@total_ordering
class Infinity:
    """The valuation of zero. Compares above every number; never equal to one."""

    _instance: Infinity | None = None

    def __new__(cls) -> Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "+inf"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("ndep.INF")

    def __lt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Rational)):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Rational)):
            return True
        return NotImplemented

    def __add__(self, other: object) -> Infinity:
        if other is self or isinstance(other, (int, Rational)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()


def _log_p(d: int, p: int) -> int:
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    if d != 1:
        raise ValueError(f"denominator is not a power of {p}")
    return e


class PExponent(Fraction):
    """A rational number numerator / p**e, the value group of the desk series fields.

    Arithmetic falls back to plain ``Fraction`` (values stay comparable and
    hashable alongside ordinary rationals); use ``PExponent(x, p)`` to re-tag.
    """

    __slots__ = ("p",)

    def __new__(cls, value, p: int, denominator_log: int | None = None):
        if denominator_log is not None:
            value = Fraction(value, p**denominator_log)
        self = super().__new__(cls, value)
        _log_p(self.denominator, p)
        self.p = p
        return self

    @property
    def denominator_log(self) -> int:
        return _log_p(self.denominator, self.p)

    def to_pair(self) -> list[int]:
        return [self.numerator, self.denominator_log]

    @classmethod
    def from_pair(cls, pair, p: int) -> PExponent:
        numer, elog = pair
        return cls(Fraction(numer, p**elog), p)

    def __repr__(self) -> str:
        return f"PExponent({self.numerator}/{self.p}^{self.denominator_log})"

    def __str__(self) -> str:
        return str(Fraction(self))

    def __reduce__(self):
        return (PExponent, (Fraction(self), self.p))


def exponent_to_json(v, p: int):
    if v is INF:
        return None
    return PExponent(v, p).to_pair()


def exponent_from_json(obj, p: int):
    if obj is None:
        return INF
    return PExponent.from_pair(obj, p)
