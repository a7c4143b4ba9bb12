"""Frobenius-derived maps shared by all substrates."""
from __future__ import annotations

from fractions import Fraction

from .exponent import INF
from .series import PerfectionCapError, PrecisionError, SeriesRing, TruncatedSeries


def wp_apply(x):
    """The Artin-Schreier map x -> x^p - x (additive in characteristic p)."""
    return x.frobenius(1) - x


def ts_as_root(z: TruncatedSeries, precision=None) -> TruncatedSeries:
    """Root of x^p - x = z for val(z) > 0, namely x = -(z + z^p + z^{p^2} + ...).

    The result carries z's precision; an exact z needs an explicit ``precision``.
    """
    if z.is_zero():
        return z
    v = z.valuation()
    if v <= 0:
        raise ValueError(f"root series needs val(z) > 0, got {v}")
    P = z.precision
    if precision is not None:
        P = Fraction(precision) if P is INF else min(P, Fraction(precision))
    if P is INF:
        raise PrecisionError("exact input has an infinite root expansion; pass a precision")
    z = z.truncate(P)
    acc = z.ring.zero().truncate(P)
    term = z
    while not term.is_zero():
        acc = acc - term
        term = term.frobenius(1).truncate(P)
    return acc


def as_root_descent(y: TruncatedSeries, steps: int, depth: int = 1) -> list[TruncatedSeries]:
    """Sequence e_0 = y, e_{i+1} = 1/e where e^p - e = 1/e_i and val(e) < 0.

    The root e of x^p - x = u with val(u) < 0 is x = sum_{r >= 1} u^{1/p^r}; its
    exponents have unbounded p-power denominators, so only the first ``depth``
    summands are formed and the remainder is folded into the precision. That is
    enough to certify val(e_i) = val(y)/p^i exactly.

    The cap N of y's ring bounds ``steps``; results live in a ring with cap
    N + depth because the truncation point needs one more p-power of headroom.
    """
    if steps < 0 or depth < 1:
        raise ValueError("steps must be >= 0 and depth >= 1")
    v = y.valuation()
    if v is INF or v <= 0:
        raise ValueError(f"descent needs val(y) > 0, got {v}")
    ring = y.ring
    need = Fraction(v / ring.p**steps).denominator
    if need > ring.scale:
        raise PerfectionCapError(
            f"{steps} steps need exponent {v / ring.p**steps}, beyond cap N={ring.cap}")
    work = SeriesRing(ring.field, ring.cap + depth)
    e = TruncatedSeries.from_json(y.to_json(), work)
    out = [e]
    for _ in range(steps):
        u = e.inverse(precision=_default_prec(e))
        x = work.zero()
        for r in range(1, depth + 1):
            x = x + u.frobenius(-r)
        # tail of the sum starts at valuation val(u)/p^{depth+1}
        x = x.truncate(u.valuation() / work.p**(depth + 1))
        e = x.inverse()
        out.append(e)
    return out


def _default_prec(e: TruncatedSeries):
    if e.is_exact:
        return 2 * e.valuation()
    return None
