"""Moore matrices, F_p-linear independence, the group G_a and its explicit isomorphism onto (K, +).

For a = (a_0, ..., a_m) with nonzero entries, G_a is the solution set of
a_0 (x_0^p - x_0) = a_i (x_i^p - x_i). When the inverses 1/a_i are F_p-linearly
independent, the linear form f(x) = sum alpha_j x_j is an isomorphism
G_a -> (K, +), with inverse t -> (sum_j beta_ij t^{p^j})_i, where

    A     = Moore matrix of (a_0^{-1/p^m}, ..., a_m^{-1/p^m}),
    alpha = last column of A^{-1},
    beta  = inverse of the Moore matrix of alpha.

Everything here is substrate-generic: entries may be Galois field elements or
truncated series. For series, equalities are checked up to precision.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import linalg
from .algebra.gf import GaloisField, GaloisFieldElement, gf_make
from .algebra.linalg import SingularMatrixError
from .algebra.maps import wp_apply
from .algebra.series import PerfectionCapError, PrecisionError, SeriesRing, TruncatedSeries


class DependentTupleError(ValueError):
    """The inverses 1/a_i are F_p-linearly dependent (zero Moore determinant)."""


class NotInGroupError(ValueError):
    """A tuple fails the defining equations of G_a."""


def same(x, y) -> bool:
    """Exact equality; for series, equality up to the smaller precision."""
    if isinstance(x, TruncatedSeries) or isinstance(y, TruncatedSeries):
        return (x - y).is_zero()
    return x == y


def moore_matrix(cs: Sequence) -> list[list]:
    """Rows phi^i(c_0), ..., phi^i(c_{n-1}) for i < n."""
    if len(cs) == 0:
        raise ValueError("Moore matrix of an empty tuple")
    return [[c.frobenius(i) for c in cs] for i in range(len(cs))]


def moore_det(cs: Sequence):
    return linalg.det(moore_matrix(cs))


def is_fp_independent(cs: Sequence) -> bool:
    """True iff the Moore determinant is nonzero."""
    d = moore_det(cs)
    if d.is_zero() and not getattr(d, "is_exact", True):
        raise PrecisionError("Moore determinant is zero only up to precision")
    return not d.is_zero()


def fp_independent_bruteforce(cs: Sequence) -> bool:
    """Oracle: try every nontrivial F_p-combination."""
    p = cs[0].p
    for coeffs in itertools.product(range(p), repeat=len(cs)):
        if not any(coeffs):
            continue
        acc = cs[0].zero()
        for c, x in zip(coeffs, cs):
            if c:
                acc = acc + x * c
        if acc.is_zero():
            return False
    return True


# --- G_a ----------------------------------------------------------------------

def ga_contains(a: Sequence, x: Sequence) -> bool:
    if len(a) != len(x):
        raise ValueError(f"tuple lengths differ: {len(a)} vs {len(x)}")
    if len(a) <= 1:
        return True
    v0 = a[0] * wp_apply(x[0])
    return all(same(v0, ai * wp_apply(xi)) for ai, xi in zip(a[1:], x[1:]))


@dataclass(frozen=True)
class IsoData:
    a: tuple
    alpha: tuple
    beta: tuple          # rows of M(alpha)^{-1}
    A: tuple             # Moore matrix of a_i^{-1/p^m}
    delta: object        # det A

    @property
    def m(self) -> int:
        return len(self.a) - 1

    def to_json(self) -> dict:
        return {
            "schema": "ndep.iso/1",
            "substrate": substrate_json(self.a[0]),
            "a": [element_to_json(x) for x in self.a],
            "alpha": [element_to_json(x) for x in self.alpha],
            "beta": [[element_to_json(x) for x in row] for row in self.beta],
            "A": [[element_to_json(x) for x in row] for row in self.A],
            "delta": element_to_json(self.delta),
        }

    @classmethod
    def from_json(cls, obj: dict) -> IsoData:
        dec = element_decoder(obj["substrate"])
        return cls(
            a=tuple(dec(x) for x in obj["a"]),
            alpha=tuple(dec(x) for x in obj["alpha"]),
            beta=tuple(tuple(dec(x) for x in row) for row in obj["beta"]),
            A=tuple(tuple(dec(x) for x in row) for row in obj["A"]),
            delta=dec(obj["delta"]),
        )


def required_cap(a: Sequence[TruncatedSeries]) -> int:
    """Perfection depth needed by a_i^{-1/p^m}."""
    m = len(a) - 1
    depth = 0
    for x in a:
        for e, _ in x.terms:
            depth = max(depth, e.denominator_log)
        if not x.is_exact:
            depth = max(depth, x.precision.denominator_log)
    return depth + m


def _inverse_root(x, m: int, precision):
    """x^{-1/p^m}; exact series are rooted before truncation so no relative precision is lost."""
    r = x.frobenius(-m)
    if isinstance(r, TruncatedSeries) and r.is_exact and precision is not None:
        return r.inverse(precision=-r.valuation() + Fraction(precision))
    return r.inverse()


def build_iso(a: Sequence, precision=None) -> IsoData:
    """Isomorphism data for a; ``precision`` is the relative precision given to
    a_i^{-1/p^m} when the a_i are exact series."""
    a = tuple(a)
    if not a:
        raise ValueError("empty tuple")
    m = len(a) - 1
    for i, x in enumerate(a):
        if x.is_zero():
            raise ValueError(f"a_{i} is zero")
    if isinstance(a[0], TruncatedSeries):
        need = required_cap(a)
        if need > a[0].ring.cap:
            raise PerfectionCapError(f"a_i^(-1/p^{m}) needs perfection cap {need} > {a[0].ring.cap}")
    roots = tuple(_inverse_root(x, m, precision) for x in a)
    A = moore_matrix(roots)
    try:
        Ainv = linalg.inverse(A)
    except SingularMatrixError as exc:
        if exc.uncertified:
            raise PrecisionError("Moore determinant not certified nonzero at this precision") from None
        raise DependentTupleError("inverses of a are F_p-dependent (Moore determinant vanishes)") from None
    delta = linalg.det(A)
    alpha = tuple(Ainv[i][m] for i in range(m + 1))
    try:
        beta = linalg.inverse(moore_matrix(alpha))
    except SingularMatrixError as exc:
        if exc.uncertified:
            raise PrecisionError("Moore matrix of alpha not certified invertible at this precision") from None
        raise AssertionError("alpha is F_p-dependent; the isomorphism construction is broken") from None
    return IsoData(a, alpha, tuple(map(tuple, beta)), tuple(map(tuple, A)), delta)


def f_apply(iso: IsoData, x: Sequence):
    if not ga_contains(iso.a, x):
        raise NotInGroupError("tuple is not in G_a")
    acc = iso.alpha[0] * x[0]
    for al, xi in zip(iso.alpha[1:], x[1:]):
        acc = acc + al * xi
    return acc


def f_inv_apply(iso: IsoData, t) -> tuple:
    powers = [t.frobenius(j) for j in range(iso.m + 1)]
    out = []
    for row in iso.beta:
        acc = row[0] * powers[0]
        for b, tp in zip(row[1:], powers[1:]):
            acc = acc + b * tp
        out.append(acc)
    return tuple(out)


def tfrob_check(iso: IsoData, x: Sequence, i: int) -> bool:
    """phi^i(f(x)) = sum_j phi^i(alpha_j) x_j for x in G_a and 0 <= i <= m."""
    if not 0 <= i <= iso.m:
        raise ValueError(f"i must lie in [0, {iso.m}]")
    t = f_apply(iso, x)
    rhs = iso.alpha[0].frobenius(i) * x[0]
    for al, xj in zip(iso.alpha[1:], x[1:]):
        rhs = rhs + al.frobenius(i) * xj
    return same(t.frobenius(i), rhs)


# --- finite-field helpers -------------------------------------------------------

def artin_schreier_roots_gf(a: GaloisFieldElement) -> list[GaloisFieldElement]:
    """All x in F_{p^k} with x^p - x = a (empty or exactly p of them), sorted by encoding."""
    F = a.field
    p, k = F.p, F.k
    cols = [F.to_coeffs(wp_apply(F.element(p**i)).value) for i in range(k)]
    W = np.array(cols, dtype=np.int64).T
    sol = linalg.fp_solve(W, F.to_coeffs(a.value), p)
    if sol is None:
        return []
    x0 = F.element(F.from_coeffs([int(v) for v in sol]))
    return sorted(x0 + c for c in range(p))


def ga_points(a: Sequence[GaloisFieldElement]) -> list[tuple]:
    """Enumerate G_a(F_q) directly from the defining equations (independent of alpha, beta)."""
    F = a[0].field
    pts = []
    for x0 in F:
        v = a[0] * wp_apply(x0)
        choices = [[x0]]
        for ai in a[1:]:
            roots = artin_schreier_roots_gf(v / ai)
            if not roots:
                break
            choices.append(roots)
        else:
            pts.extend(itertools.product(*choices))
    return pts


# --- serialization --------------------------------------------------------------

def substrate_json(x) -> dict:
    if isinstance(x, GaloisFieldElement):
        F = x.field
        return {"kind": "gf", "p": F.p, "k": F.k, "modulus": list(F.modulus)}
    if isinstance(x, TruncatedSeries):
        F = x.field
        return {"kind": "series", "p": F.p, "k": F.k, "modulus": list(F.modulus), "cap": x.ring.cap}
    raise TypeError(f"unsupported element type {type(x).__name__}")


def element_to_json(x):
    if isinstance(x, GaloisFieldElement):
        return x.field.to_coeffs(x.value)
    if isinstance(x, TruncatedSeries):
        return x.to_json()
    raise TypeError(f"unsupported element type {type(x).__name__}")


def element_decoder(sub: dict):
    F = GaloisField(sub["p"], sub["k"], sub["modulus"]) if sub["k"] > 1 else gf_make(sub["p"], 1)
    if sub["kind"] == "gf":
        return lambda c: GaloisFieldElement(F, F.from_coeffs(c))
    ring = SeriesRing(F, sub["cap"])
    return lambda obj: TruncatedSeries.from_json(obj, ring)
