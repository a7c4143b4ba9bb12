"""Valuations under the isomorphism f_a, and the single-valuation Artin-Schreier root pipeline.

All operations take tuples of truncated series. Exact inputs are given a working
relative precision first; when a leading term cannot be certified at that
precision the computation is retried with twice as much, up to a ceiling.
Every asserted valuation is read off a certified leading term, never guessed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra.exponent import INF, PExponent
from .algebra.maps import ts_as_root, wp_apply
from .algebra.series import PrecisionError, TruncatedSeries
from .moore import IsoData, build_iso, f_apply, f_inv_apply, ga_contains, same

DEFAULT_PRECISION = 8
MAX_PRECISION = 1536


def _fmt(v) -> object:
    if v is None or isinstance(v, bool):
        return v
    if v is INF:
        return "inf"
    if isinstance(v, Fraction):
        return str(Fraction(v))
    if isinstance(v, (int, float, str)):
        return v
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _fmt(x) for k, x in v.items()}
    return str(v)


@dataclass
class Check:
    name: str
    expected: object
    computed: object
    passed: bool

    def to_json(self) -> dict:
        return {"claim": self.name, "expected": _fmt(self.expected),
                "computed": _fmt(self.computed), "pass": bool(self.passed)}


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, expected, computed, passed: bool | None = None) -> bool:
        if passed is None:
            passed = expected == computed
        self.checks.append(Check(name, expected, computed, bool(passed)))
        return bool(passed)

    def extend(self, other: Report, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.expected, c.computed, c.passed))

    def to_json(self) -> dict:
        return {"report": self.name, "pass": self.ok,
                "data": {k: _fmt(v) for k, v in self.data.items()},
                "checks": [c.to_json() for c in self.checks]}


# --- valuation profiles -------------------------------------------------------------

@dataclass(frozen=True)
class ValProfile:
    p: int
    vals: tuple

    def __post_init__(self):
        vals = tuple(PExponent(v, self.p) for v in self.vals)
        object.__setattr__(self, "vals", vals)
        if not vals:
            raise ValueError("empty profile")
        if any(v <= 0 for v in vals):
            raise ValueError(f"valuations must be positive: {[str(v) for v in vals]}")
        if len(set(vals)) != len(vals):
            raise ValueError(f"valuations must be pairwise distinct: {[str(v) for v in vals]}")

    @property
    def m(self) -> int:
        return len(self.vals) - 1

    @property
    def is_sorted(self) -> bool:
        return all(a < b for a, b in zip(self.vals, self.vals[1:]))

    def order(self) -> list[int]:
        """Indices sorted by valuation."""
        return sorted(range(len(self.vals)), key=lambda i: self.vals[i])

    @classmethod
    def of(cls, a: Sequence[TruncatedSeries]) -> ValProfile:
        return cls(a[0].p, tuple(x.valuation() for x in a))


def alpha_val_closed_form(profile: ValProfile, sorted_ascending: bool = True) -> list[PExponent]:
    """val(alpha_i) = v_i/p^{m-i} + sum_{j=i}^{m-1} (p-1)/p^{m-j} v_{j+1} for increasing v.

    With ``sorted_ascending=False`` the profile may be in any order; values are
    computed on the sorted profile and carried back along the permutation.
    """
    p, m, v = profile.p, profile.m, profile.vals
    if not profile.is_sorted:
        if sorted_ascending:
            raise ValueError(f"profile not sorted ascending: {[str(x) for x in v]}")
        order = profile.order()
        inner = alpha_val_closed_form(ValProfile(p, tuple(v[i] for i in order)))
        out: list = [None] * len(v)
        for pos, i in enumerate(order):
            out[i] = inner[pos]
        return out
    res = []
    for i in range(m + 1):
        s = Fraction(v[i], p**(m - i))
        for j in range(i, m):
            s += Fraction(p - 1, p**(m - j)) * v[j + 1]
        res.append(PExponent(s, p))
    return res


# --- precision handling ----------------------------------------------------------------

def _prep(x: TruncatedSeries, rel) -> TruncatedSeries:
    return x.with_relative_precision(rel) if x.is_exact else x


def with_precision(fn: Callable, inputs: Sequence[TruncatedSeries], precision=None):
    """Call fn(rel) with growing relative precision until leading terms certify.

    ``rel`` starts at ``precision`` (default DEFAULT_PRECISION) and doubles on each
    PrecisionError up to MAX_PRECISION. When no input is exact the caller's
    precision is all there is, so a single attempt is made.
    """
    rel = Fraction(precision if precision is not None else DEFAULT_PRECISION)
    adaptive = any(x.is_exact for x in inputs)
    while True:
        try:
            return fn(rel)
        except PrecisionError:
            if not adaptive or rel * 2 > MAX_PRECISION:
                raise
            rel *= 2


def _val(x: TruncatedSeries):
    """Certified valuation (PrecisionError if none)."""
    return x.valuation()


# --- alpha valuations -------------------------------------------------------------------

def direct_alpha_vals(a: Sequence[TruncatedSeries], precision=None) -> list[PExponent]:
    def run(rel):
        iso = build_iso(a, rel)
        return [_val(x) for x in iso.alpha]
    return with_precision(run, a, precision)


def verify_alpha_vals(a: Sequence[TruncatedSeries], precision=None) -> Report:
    a = list(a)
    profile = ValProfile.of(a)
    rep = Report("alpha-valuations")
    rep.data["profile"] = list(profile.vals)
    direct = direct_alpha_vals(a, precision)
    closed = alpha_val_closed_form(profile, sorted_ascending=False)
    rep.data["direct"] = direct
    rep.data["closed_form"] = closed
    order = profile.order()
    sorted_direct = [direct[i] for i in order]
    sorted_closed = alpha_val_closed_form(ValProfile(profile.p, tuple(profile.vals[i] for i in order)))
    rep.check("valalpha.closed_form", sorted_closed, sorted_direct)
    rep.check("valalpha.increasing", True, all(x < y for x, y in zip(sorted_direct, sorted_direct[1:])))
    rep.check("valalpha.positive", True, all(x > 0 for x in direct))
    top = order[-1]
    rep.check("minvalal.top", profile.vals[top], direct[top])
    if profile.m <= 2:
        for sigma in itertools.permutations(range(profile.m + 1)):
            permuted = direct_alpha_vals([a[s] for s in sigma], precision)
            rep.check(f"permutation{list(sigma)}", [direct[s] for s in sigma], permuted)
    return rep


def min_val_check(a: Sequence[TruncatedSeries], l: int, precision=None) -> bool:
    profile = ValProfile.of(a)
    if not 0 <= l <= profile.m:
        raise ValueError(f"index {l} out of range")
    vl = profile.vals[l]
    if any(v >= vl for i, v in enumerate(profile.vals) if i != l):
        raise ValueError(f"val(a_{l}) = {vl} is not strictly maximal")
    direct = direct_alpha_vals(a, precision)
    return direct[l] == vl and all(direct[s] < vl for s in range(len(direct)) if s != l)


# --- preimages -----------------------------------------------------------------------------

@dataclass
class PreimageResult:
    x: tuple
    iso: IsoData
    report: Report
    boundary_hit: bool


def preimage_valuations(a: Sequence[TruncatedSeries], y: TruncatedSeries, precision=None) -> PreimageResult:
    a = list(a)
    profile = ValProfile.of(a)
    vy = y.valuation()
    if any(v >= vy for v in profile.vals):
        raise ValueError(f"need val(a_j) < val(y) = {vy} for all j")

    def run(rel):
        iso = build_iso(a, rel)
        x = f_inv_apply(iso, _prep(y, rel))
        return iso, x, [_val(xi) for xi in x], [_val(al) for al in iso.alpha], \
            [_val(wp_apply(xi)) for xi in x]

    iso, x, vx, valpha, vwp = with_precision(run, [y] + a, precision)
    rep = Report("preimage-valuations")
    rep.data.update(profile=list(profile.vals), val_y=vy, val_x=vx)
    rep.check("f_inv.in_group", True, ga_contains(iso.a, x))
    l = profile.order()[-1]
    rep.check("xn0", vy - profile.vals[l], vx[l])
    rep.check("xi0", True, all(v > 0 for v in vx))
    chain = [profile.vals[i] + vwp[i] for i in range(len(a))]
    rep.check("OFE.chain", [chain[0]] * len(a), chain)
    for i, v in enumerate(vx):
        expected = v if v > 0 else (profile.p * v if v < 0 else None)
        if expected is not None:
            rep.check(f"OFE.rule[{i}]", expected, vwp[i])
        else:
            rep.check(f"OFE.rule[{i}]", ">= 0", vwp[i], vwp[i] >= 0)
    boundary = any(v == 0 for v in vx)
    if vx[l] >= 0:
        for s in range(len(a)):
            if s != l and vx[s] > 0:
                rep.check(f"ordxi1[{s}]", True, valpha[s] + vx[s] > valpha[l] + vx[l])
    for s, t in itertools.permutations(range(len(a)), 2):
        if profile.vals[s] < profile.vals[t] and vx[s] == 0 and vx[t] >= 0:
            rep.check(f"ordxi2[{s},{t}]", True, valpha[s] + vx[s] < valpha[t] + vx[t])
    rep.data["boundary_hit"] = boundary
    return PreimageResult(x, iso, rep, boundary)


# --- rho' ---------------------------------------------------------------------------------

@dataclass
class RhoFit:
    """rho'(t) = f_{a'}(pi(f_a^{-1}(alpha_m t))) = sum_j gamma_j t^{p^j}, with gamma = (-c, c, 0, ...)."""
    a: tuple
    iso: IsoData
    iso_prime: IsoData
    gammas: tuple
    c: object

    @property
    def a_prime(self) -> tuple:
        return self.a[:-1]

    def evaluate(self, t):
        acc = self.gammas[0] * t
        for j, g in enumerate(self.gammas[1:], start=1):
            acc = acc + g * t.frobenius(j)
        return acc

    def mu(self, t):
        return self.iso.alpha[-1] * t

    def project(self, x: Sequence) -> tuple:
        return tuple(x[:-1])

    def compose(self, t):
        """rho'(t) through the diagram, without the fitted polynomial."""
        return f_apply(self.iso_prime, self.project(f_inv_apply(self.iso, self.mu(t))))


def _fit(a: Sequence, rel=None) -> RhoFit:
    a = tuple(a)
    if len(a) < 2:
        raise ValueError("rho' needs m >= 1")
    iso = build_iso(a, rel)
    iso_p = build_iso(a[:-1], rel)
    m = iso.m
    am = iso.alpha[m]
    gammas = []
    for j in range(m + 1):
        g = iso_p.alpha[0] * iso.beta[0][j]
        for i in range(1, m):
            g = g + iso_p.alpha[i] * iso.beta[i][j]
        gammas.append(g * am.frobenius(j))
    for j in range(2, m + 1):
        if not gammas[j].is_zero():
            raise AssertionError(f"rho' has a nonzero t^(p^{j}) coefficient")
    if not same(gammas[0], -gammas[1]):
        raise AssertionError("rho' is not of the form c (t^p - t)")
    c = gammas[1]
    if c.is_zero():
        raise AssertionError("rho' vanishes identically")
    return RhoFit(a, iso, iso_p, tuple(gammas), c)


def rho_prime_fit(a: Sequence, precision=None) -> RhoFit:
    if isinstance(a[0], TruncatedSeries):
        return with_precision(lambda rel: _fit(a, rel), list(a), precision)
    return _fit(a)


# --- small-valuation preimage and the root pipeline ------------------------------------

@dataclass
class SmallValResult:
    w: TruncatedSeries
    x: tuple
    fit: RhoFit
    report: Report


def _small_val(a: tuple, u: TruncatedSeries, rel) -> SmallValResult:
    m = len(a) - 1
    fit = _fit(a, rel)
    u = _prep(u, rel)
    iso, iso_p = fit.iso, fit.iso_prime
    xs = f_inv_apply(iso_p, u)
    z = a[0] * wp_apply(xs[0]) / _prep(a[m], rel)
    if z.is_zero() or _val(z) <= 0:
        raise PrecisionError("cannot certify val(a_0 wp(x_0) / a_m) > 0")
    xm = ts_as_root(z)
    x = tuple(xs) + (xm,)
    f = f_apply(iso, x)
    w = f / iso.alpha[m]
    _val(w)
    return SmallValResult(w, x, fit, Report("small-valuation-preimage"))


def preimage_small_val(a: Sequence[TruncatedSeries], u: TruncatedSeries, precision=None) -> SmallValResult:
    a = tuple(a)
    m = len(a) - 1
    if m < 1:
        raise ValueError("need m >= 1")
    profile = ValProfile.of(a)
    head = ValProfile(profile.p, profile.vals[:m])
    if not head.is_sorted:
        raise ValueError("a' = (a_0, ..., a_{m-1}) must have strictly increasing valuations")
    vu = u.valuation()
    bound = max(profile.vals[m - 1], profile.vals[m])
    if not vu > bound:
        raise ValueError(f"need val(u) = {vu} > max(val(a_(m-1)), val(a_m)) = {bound}")
    res = with_precision(lambda rel: _small_val(a, u, rel), [u] + list(a), precision)
    rep = res.report
    vw = _val(res.w)
    vx = [_val(xi) for xi in res.x]
    rep.data.update(val_u=vu, val_w=vw, val_x=vx, c=str(res.fit.c))
    rep.check("w.in_maximal_ideal", True, vw > 0)
    rep.check("val(w) < val(u)", True, vw < vu)
    rep.check("x.in_maximal_ideal", True, all(v > 0 for v in vx))
    rep.check("xn0(a')", vu - profile.vals[m - 1], vx[m - 1])
    rep.check("val(u) = val(a_m) + val(x_m)", vu, profile.vals[m] + vx[m])
    rep.check("rho'(w) = u", True, same(res.fit.evaluate(res.w), u))
    return res


@dataclass
class RootResult:
    w: TruncatedSeries
    c: TruncatedSeries
    w_prime: TruncatedSeries
    report: Report


def as_root_in_maximal_ideal(a: Sequence[TruncatedSeries], y: TruncatedSeries, precision=None) -> RootResult:
    first = preimage_small_val(a, y, precision)
    w = first.w
    c = y / wp_apply(w)
    vy, vw, vc = y.valuation(), _val(w), _val(c)
    rep = Report("artin-schreier-root")
    rep.extend(first.report, "w: ")
    rep.check("val(c) = val(y) - val(w)", vy - vw, vc)
    rep.check("val(c) > 0", True, vc > 0)
    rep.check("c matches rho' constant", True, same(c, first.fit.c))
    second = preimage_small_val(a, c * y, precision)
    wp = second.w
    rep.extend(second.report, "w': ")
    rep.check("wp(w') = y", True, same(wp_apply(wp), y))
    rep.check("val(w') > 0", True, _val(wp) > 0)
    rep.data.update(val_y=vy, val_w=vw, val_c=vc, val_w_prime=_val(wp), w_prime=str(wp))
    return RootResult(w, c, wp, rep)


# --- grids of small elements ---------------------------------------------------------

@dataclass
class BGrid:
    n: int
    ell: int
    gap: int
    schedule: str
    y: TruncatedSeries
    b: tuple                   # b[j][l]
    report: Report

    def product(self, idx: Sequence[int]) -> TruncatedSeries:
        acc = self.b[0][idx[0]]
        for j in range(1, self.n):
            acc = acc * self.b[j][idx[j]]
        return acc


class ScheduleError(ValueError):
    def __init__(self, constraint: str, detail: str):
        self.constraint = constraint
        super().__init__(f"{constraint}: {detail}")


SCHEDULES = ("block", "interleaved")


def grid_rank(schedule: str, n: int, ell: int, j: int, l: int) -> int:
    """Position of b_{j,l} in increasing valuation order.

    ``block``: all of row j before row j+1 (j*ell + l). This is the order under
    which the reversed-lex law for products holds for every n and ell.
    ``interleaved``: l-major (l*n + j), matching val(b_{n-1,l}) < val(b_{0,l+1});
    its products break the reversed-lex law once n >= 2 and ell >= 3.
    """
    if schedule == "block":
        return j * ell + l
    if schedule == "interleaved":
        return l * n + j
    raise ValueError(f"unknown schedule {schedule!r}; expected one of {SCHEDULES}")


def build_b_grid(n: int, ell: int, y: TruncatedSeries, gap: int, schedule: str = "block") -> BGrid:
    """Monomials b_{j,l} with val(b_{j,l}) = val(y)/p^{s(j,l)}, s(j,l) = (n*ell - rank(j,l)) * gap.

    The selection constraints are checked up front and the reversed-lex law for
    the products b_(l_0..l_{n-1}) is then verified exhaustively, never assumed.
    """
    if n < 1 or ell < 1:
        raise ValueError("n and ell must be >= 1")
    grid_rank(schedule, n, ell, 0, 0)
    ring = y.ring
    p = ring.p
    V = y.valuation()
    if V is INF or V <= 0:
        raise ValueError("need val(y) > 0")
    if gap < 1 or p**gap <= n:
        raise ScheduleError("n*val(b_(n-1,ell-1)) < val(y)", f"p^gap = {p**gap} must exceed n = {n}")
    lc = y.leading_coefficient()

    def s(j, l):
        return (n * ell - grid_rank(schedule, n, ell, j, l)) * gap

    b = tuple(tuple(ring.monomial(V / p**s(j, l), lc.frobenius(-s(j, l))) for l in range(ell))
              for j in range(n))
    val = [[b[j][l].valuation() for l in range(ell)] for j in range(n)]
    rep = Report("b-grid")
    rep.data.update(n=n, ell=ell, gap=gap, schedule=schedule, val_y=V, vals=val)
    if schedule == "interleaved":
        name1 = "val(b_(n-1,l)) < val(b_(0,l+1))"
        ok1 = all(val[n - 1][l] < val[0][l + 1] for l in range(ell - 1))
    else:
        name1 = "val(b_(j,ell-1)) < val(b_(j+1,0))"
        ok1 = all(val[j][ell - 1] < val[j + 1][0] for j in range(n - 1))
    ok2 = all(0 < (j + 1) * val[j][l] < val[j][l + 1] for j in range(n) for l in range(ell - 1)) \
        and all(v > 0 for row in val for v in row)
    ok3 = n * val[n - 1][ell - 1] < V
    for name, ok in ((name1, ok1),
                     ("0 < (j+1)val(b_(j,l)) < val(b_(j,l+1))", ok2),
                     ("n*val(b_(n-1,ell-1)) < val(y)", ok3)):
        if not ok:
            raise ScheduleError(name, "violated by the schedule")
        rep.check(name, True, ok)
    grid = BGrid(n, ell, gap, schedule, y, b, rep)
    idx = list(itertools.product(range(ell), repeat=n))
    pv = {t: grid.product(t).valuation() for t in idx}
    rep.check("products in (0, val(y))", True, all(0 < v < V for v in pv.values()))
    bad = []
    for s_, t in itertools.combinations(idx, 2):
        lex = tuple(reversed(s_)) < tuple(reversed(t))
        if pv[s_] == pv[t] or (pv[s_] < pv[t]) != lex:
            bad.append([list(s_), list(t)])
    total = len(idx) * (len(idx) - 1) // 2
    rep.check("reversed-lex order = valuation order", total, total - len(bad))
    rep.data["pairs"] = total
    rep.data["disagreeing_pairs"] = bad[:10]
    return grid
