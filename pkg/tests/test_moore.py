from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndep.algebra import PerfectionCapError, SeriesRing, gf_make, wp_apply
from ndep.algebra.linalg import det
from ndep.moore import (
    DependentTupleError, IsoData, NotInGroupError, artin_schreier_roots_gf, build_iso,
    f_apply, f_inv_apply, fp_independent_bruteforce, ga_contains, ga_points, is_fp_independent,
    moore_det, moore_matrix, tfrob_check,
)

F4 = gf_make(2, 2)
g = F4.gen()
one = F4.one()


def _brute_points(a):
    # oracle: scan the whole product K^{m+1}
    F = a[0].field
    return sorted(x for x in itertools.product(list(F), repeat=len(a)) if ga_contains(a, x))


def test_moore_det_examples():
    c = F4.gen()
    assert moore_det([c]) == c
    assert moore_det([one, one]).is_zero()
    # 2x2 by hand: det [[1, g], [1, g^2]] = g^2 - g = 1 using g^2 = g + 1
    assert moore_det([one, g]) == one


def test_moore_matrix_rows_are_frobenius_powers():
    F = gf_make(3, 3)
    cs = [F.element(5), F.element(11), F.element(20)]
    M = moore_matrix(cs)
    for j, row in enumerate(M):
        assert row == [c ** (3**j) for c in cs]


def test_independence_examples():
    assert not is_fp_independent([one, one])
    assert not is_fp_independent([F4.zero()])
    assert is_fp_independent([one, g])


@pytest.mark.parametrize("p,k,m", [(2, 3, 2), (3, 2, 1), (2, 4, 2), (5, 2, 1)])
def test_moore_det_vanishes_iff_dependent(p, k, m):
    F = gf_make(p, k)
    rng = random.Random(p * 100 + k)
    els = list(F)
    for _ in range(150):
        cs = [rng.choice(els) for _ in range(m + 1)]
        assert is_fp_independent(cs) == fp_independent_bruteforce(cs)
        assert moore_det(cs).is_zero() == (not fp_independent_bruteforce(cs))


def test_build_iso_single():
    a0 = F4.gen()
    iso = build_iso([a0])
    assert iso.alpha == (a0,)
    assert iso.beta == ((a0.inverse(),),)


def test_build_iso_f4_pair():
    iso = build_iso([one, g])
    # A = [[1, g], [1, g+1]] since 1/g = g + 1 and g^{-1/2} = g; alpha = last column of A^{-1}
    A = [[one, g], [one, g + one]]
    assert [list(r) for r in iso.A] == A
    assert iso.alpha == (g, one)
    assert det(A) == iso.delta
    with pytest.raises(DependentTupleError):
        build_iso([one, one])


def test_f_apply_examples_f4():
    iso = build_iso([one, g])
    zero = F4.zero()
    assert f_apply(iso, (zero, zero)).is_zero()
    assert f_apply(iso, (one, zero)) == g
    assert f_apply(iso, (one, one)) == g + one
    assert f_inv_apply(iso, zero) == (zero, zero)
    with pytest.raises(NotInGroupError):
        f_apply(iso, (g, zero))


def test_membership_examples():
    assert not ga_contains([one, g], [g, F4.zero()])
    assert ga_contains([one, g], [F4.zero(), F4.zero()])


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3)])
def test_membership_closed_under_addition(p, k):
    F = gf_make(p, k)
    for a in itertools.product([x for x in F if not x.is_zero()], repeat=2):
        pts = _brute_points(a)
        S = set(pts)
        for x in pts:
            for y in pts:
                assert tuple(u + v for u, v in zip(x, y)) in S


def _valid_tuples(F, m, limit, seed):
    rng = random.Random(seed)
    nonzero = [x for x in F if not x.is_zero()]
    out = []
    while len(out) < limit:
        a = [rng.choice(nonzero) for _ in range(m + 1)]
        if is_fp_independent([x.inverse() for x in a]):
            out.append(a)
    return out


@pytest.mark.parametrize("p,k,m", [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1)])
def test_isomorphism_is_bijective_homomorphism(p, k, m):
    F = gf_make(p, k)
    for a in _valid_tuples(F, m, 6, p + k + m):
        iso = build_iso(a)
        pts = _brute_points(a)
        assert pts == sorted(ga_points(a))
        assert len(pts) == F.q
        images = {f_apply(iso, x) for x in pts}
        assert len(images) == F.q
        for x in pts:
            assert f_inv_apply(iso, f_apply(iso, x)) == x
            for i in range(m + 1):
                assert tfrob_check(iso, x, i)
        for x, y in zip(pts, pts[1:] + pts[:1]):
            s = tuple(u + v for u, v in zip(x, y))
            assert f_apply(iso, s) == f_apply(iso, x) + f_apply(iso, y)
        for t in F:
            assert ga_contains(a, f_inv_apply(iso, t))


def test_tfrob_rejects_non_member():
    iso = build_iso([one, g])
    with pytest.raises(NotInGroupError):
        tfrob_check(iso, (g, F4.zero()), 1)


def test_artin_schreier_roots_examples():
    F2 = gf_make(2, 1)
    assert artin_schreier_roots_gf(F2.zero()) == list(F2)
    assert artin_schreier_roots_gf(F2.one()) == []
    assert artin_schreier_roots_gf(one) == [g, g + one]


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 1)])
def test_artin_schreier_roots_exhaustive(p, k):
    F = gf_make(p, k)
    for a in F:
        assert artin_schreier_roots_gf(a) == sorted(x for x in F if wp_apply(x) == a)


def test_iso_json_round_trip():
    iso = build_iso([one, g])
    assert IsoData.from_json(iso.to_json()) == iso


def test_series_iso():
    R = SeriesRing(gf_make(2, 1), 1)
    t = R.t()
    iso = build_iso([t, t**3], precision=12)
    assert [al.valuation() for al in iso.alpha] == [2, 3]
    x = f_inv_apply(iso, R.t(5, precision=20))
    assert ga_contains(iso.a, x)


def test_series_iso_needs_cap():
    R = SeriesRing(gf_make(2, 1), 0)
    with pytest.raises(PerfectionCapError):
        build_iso([R.t(), R.t(3)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_alpha_moore_system(seed):
    # sum_i a_i^{-p^j/p^m} alpha_i = delta_{j,m}, checked directly from the definition
    F = gf_make(2, 4)
    (a,) = _valid_tuples(F, 2, 1, seed)
    iso = build_iso(a)
    m = 2
    roots = [x.inverse().frobenius(-m) for x in a]
    for j in range(m + 1):
        s = sum((r.frobenius(j) * al for r, al in zip(roots, iso.alpha)), F.zero())
        assert s == (F.one() if j == m else F.zero())
