from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndep.algebra import (
    INF, PExponent, PerfectionCapError, Place, Poly, PrecisionError, RationalFunction,
    SeriesRing, SeriesSyntaxError, TruncatedSeries, as_root_descent, coset_intersect,
    exponent_from_json, exponent_to_json, gf_frobenius, gf_make, is_irreducible, parse_series,
    required_cap, rf_valuation, ts_as_root, wp_apply,
)
from ndep.algebra.gf import GaloisField, has_factor_by_trial_division, is_prime
from ndep.algebra.linalg import (
    SingularMatrixError, det, fp_nullspace, fp_rank, fp_solve, inverse, mat_mul, solve,
)


# --- exponents ---------------------------------------------------------------

def test_pexponent_normalized_and_ordered():
    e = PExponent(Fraction(3, 4), 2)
    assert e.denominator_log == 2
    assert e.to_pair() == [3, 2]
    assert PExponent.from_pair([6, 3], 2) == Fraction(3, 4)
    assert PExponent(Fraction(1, 2), 2) < PExponent(Fraction(3, 4), 2)
    with pytest.raises(ValueError):
        PExponent(Fraction(1, 3), 2)


def test_infinity_is_a_distinct_variant():
    assert INF > 10**9 and INF > Fraction(7, 2)
    assert INF == INF
    assert exponent_from_json(exponent_to_json(INF, 3), 3) is INF
    assert exponent_from_json(exponent_to_json(PExponent(Fraction(5, 9), 3), 3), 3) == Fraction(5, 9)


# --- Galois fields -----------------------------------------------------------

def _irreducible_by_roots_and_factors(poly, p):
    # independent oracle: a polynomial is reducible iff a monic factor of degree <= k/2 divides it
    return not has_factor_by_trial_division(poly, p)


def test_gf_make_prime_field():
    F = gf_make(2, 1)
    assert F.q == 2 and F.k == 1


def test_gf_make_f4_modulus():
    # exhaustive scan of monic quadratics over F_2: only x^2+x+1 has no root
    quads = [(c0, c1, 1) for c1 in range(2) for c0 in range(2)]
    irreducible = [q for q in quads if all((q[0] + q[1] * x + x * x) % 2 for x in range(2))]
    assert irreducible == [(1, 1, 1)]
    assert gf_make(2, 2).modulus == (1, 1, 1)


def test_gf_make_rejects_non_prime_and_bad_degree():
    with pytest.raises(ValueError):
        gf_make(4, 1)
    with pytest.raises(ValueError):
        gf_make(2, 9)
    with pytest.raises(ValueError):
        gf_make(2, 0)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_smallest_modulus_is_lexicographically_least(p, k):
    F = gf_make(p, k)
    assert _irreducible_by_roots_and_factors(F.modulus, p)
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if _irreducible_by_roots_and_factors(cand, p):
            # smallest as an integer encoding (least significant coefficient first)
            assert sum(c * p**i for i, c in enumerate(cand)) >= sum(c * p**i for i, c in enumerate(F.modulus))


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_agrees_with_trial_division(p, k):
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        assert is_irreducible(cand, p) == (not has_factor_by_trial_division(cand, p))


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2)])
def test_field_axioms_exhaustive(p, k):
    F = gf_make(p, k)
    els = list(F)
    zero, one = F.zero(), F.one()
    assert len(els) == p**k
    for a in els:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if not a.is_zero():
            assert a * a.inverse() == one
        for b in els:
            assert a + b == b + a and a * b == b * a
            for c in els[::3]:
                assert (a + b) * c == a * c + b * c
                assert (a * b) * c == a * (b * c)


def test_multiplication_against_polynomial_oracle():
    # schoolbook product of coefficient vectors reduced by the modulus
    F = gf_make(3, 3)
    mod = F.modulus

    def mulpoly(a, b):
        out = [0] * (2 * F.k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % 3
        for d in range(len(out) - 1, F.k - 1, -1):
            c = out[d]
            if c:
                for i in range(F.k + 1):
                    out[d - F.k + i] = (out[d - F.k + i] - c * mod[i]) % 3
        return out[:F.k]

    for a in F:
        for b in list(F)[::5]:
            assert (a * b).coeffs == mulpoly(a.coeffs, b.coeffs)


def test_frobenius_f4():
    F = gf_make(2, 2)
    g = F.gen()
    assert gf_frobenius(g, 1) == g + F.one()


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 2)])
def test_frobenius_inverse_and_order(p, k):
    F = gf_make(p, k)
    for x in F:
        assert gf_frobenius(gf_frobenius(x, 1), -1) == x
        assert gf_frobenius(x, k) == x
        assert gf_frobenius(x, 1) == x**p


def test_wp_examples():
    F = gf_make(2, 2)
    assert wp_apply(F.zero()).is_zero()
    assert wp_apply(F.gen()) == F.one()


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (5, 1), (5, 2)])
def test_wp_kernel_is_prime_field(p, k):
    F = gf_make(p, k)
    kernel = [x for x in F if wp_apply(x).is_zero()]
    assert sorted(x.value for x in kernel) == list(range(p))


def test_wp_additive_f9():
    F = gf_make(3, 2)
    for x in F:
        for y in F:
            assert wp_apply(x + y) == wp_apply(x) + wp_apply(y)


# --- rational functions -------------------------------------------------------

F3 = gf_make(3, 1)


def _t(F=F3):
    return RationalFunction.t(F)


def test_rf_valuation_examples():
    t = _t()
    f = t**3 / (t + 1)
    assert rf_valuation(f, Place.at(F3, 0)) == 3
    assert rf_valuation(f, Place.infinite()) == -2
    assert rf_valuation(t - t, Place.at(F3, 0)) is INF


def test_rational_function_canonical_form():
    t = _t()
    a = (t**2 - 1) / (t - 1)
    assert a == t + 1
    assert ((2 * t) / (2 * t + 2)) == t / (t + 1)


def _random_rf(rng, F, deg=3):
    num = Poly(F, tuple(rng.randrange(F.q) for _ in range(deg + 1)))
    while True:
        den = Poly(F, tuple(rng.randrange(F.q) for _ in range(deg)) + (1,))
        if not den.is_zero():
            break
    return RationalFunction(num, den)


def test_rational_function_field_axioms_sampled():
    rng = random.Random(1)
    F = gf_make(2, 2)
    one = RationalFunction.const(F, 1)
    for _ in range(200):
        a, b, c = (_random_rf(rng, F) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        if not a.is_zero():
            assert a * a.inverse() == one


def test_rf_valuation_laws_sampled():
    rng = random.Random(2)
    places = [Place.at(F3, 0), Place.at(F3, 1), Place.infinite(),
              Place(Poly(F3, (1, 0, 1)))]  # t^2 + 1 is irreducible over F_3
    for _ in range(200):
        f, g = _random_rf(rng, F3), _random_rf(rng, F3)
        for v in places:
            vf, vg = rf_valuation(f, v), rf_valuation(g, v)
            assert rf_valuation(f * g, v) == vf + vg
            assert rf_valuation(f + g, v) >= min(vf, vg)


def test_place_must_be_irreducible():
    with pytest.raises(ValueError):
        Place(Poly(F3, (2, 0, 1)))  # t^2 - 1


def test_coset_intersect_examples():
    t = _t()
    zero, one = RationalFunction.const(F3, 0), RationalFunction.const(F3, 1)
    w = coset_intersect(zero, Place.at(F3, 0), one, Place.at(F3, 1))
    assert rf_valuation(w, Place.at(F3, 0)) > 0 and rf_valuation(w - one, Place.at(F3, 1)) > 0
    assert w == t
    c = RationalFunction.const(F3, 2)
    assert coset_intersect(c, Place.at(F3, 0), c, Place.infinite()) == c
    with pytest.raises(ValueError):
        coset_intersect(one, Place.at(F3, 0), one, Place.at(F3, 0))


def test_coset_intersect_random_post_condition():
    rng = random.Random(3)
    places = [Place.at(F3, 0), Place.at(F3, 2), Place.infinite(), Place(Poly(F3, (1, 0, 1)))]
    for _ in range(100):
        v1, v2 = rng.sample(places, 2)
        a = RationalFunction(Poly(F3, tuple(rng.randrange(3) for _ in range(3))))
        b = RationalFunction(Poly(F3, tuple(rng.randrange(3) for _ in range(3))))
        if v1.is_infinite:
            a = RationalFunction.const(F3, rng.randrange(3))
        if v2.is_infinite:
            b = RationalFunction.const(F3, rng.randrange(3))
        w = coset_intersect(a, v1, b, v2)
        assert rf_valuation(w - a, v1) > 0 and rf_valuation(w - b, v2) > 0


def test_rational_function_json_round_trip():
    rng = random.Random(4)
    F = gf_make(2, 3)
    for _ in range(20):
        f = _random_rf(rng, F)
        assert RationalFunction.from_json(f.to_json()) == f


# --- truncated series --------------------------------------------------------

def test_series_product_examples():
    R = SeriesRing(F3, 0)
    t = R.t()
    assert t * t**2 == R.t(3)
    assert (R.one() + t) * (R.one() - t) == R.one() - t**2
    x = R.series([(1, 1)], precision=5)
    assert (x * t).precision == 6


def test_series_inverse_frobenius():
    R = SeriesRing(gf_make(2, 1), 2)
    assert R.t().frobenius(-1) == R.t(Fraction(1, 2))
    with pytest.raises(PerfectionCapError):
        R.t(Fraction(1, 4)).frobenius(-1)


def test_zero_inversion_raises():
    R = SeriesRing(F3, 0)
    with pytest.raises(ZeroDivisionError):
        R.zero().inverse()


def test_below_precision_is_an_error():
    R = SeriesRing(F3, 0)
    x = R.series([(2, 1)], precision=3)
    with pytest.raises(PrecisionError):
        x.coefficient(3)
    with pytest.raises(PrecisionError):
        (x - x).valuation()


def _series(draw_terms, R, prec):
    return R.series(draw_terms, prec)


@st.composite
def series_st(draw, R, low=0):
    n = draw(st.integers(0, 5))
    terms = [(Fraction(draw(st.integers(low * R.scale, 8 * R.scale)), R.scale),
              draw(st.integers(1, R.field.q - 1))) for _ in range(n)]
    prec = draw(st.integers(9, 14))
    return R.series(terms, prec)


R2 = SeriesRing(gf_make(2, 2), 1)
R3 = SeriesRing(gf_make(3, 1), 1)


@settings(max_examples=150, deadline=None)
@given(series_st(R2), series_st(R2), series_st(R2))
def test_series_ring_axioms(a, b, c):
    assert ((a + b) * c).agrees_with(a * c + b * c)
    assert ((a * b) * c).agrees_with(a * (b * c))
    assert (a + b).agrees_with(b + a)


@settings(max_examples=150, deadline=None)
@given(series_st(R3), st.integers(0, 3), st.integers(1, 2))
def test_series_inverse_and_valuation_of_products(a, shift, coeff):
    R = a.ring
    u = R.one() * coeff + R.t(1) * a          # unit: constant term nonzero
    x = u * R.t(shift)
    inv = x.inverse()
    assert (x * inv).agrees_with(R.one())
    assert inv.valuation() == -shift
    if not a.is_zero():
        assert (a * x).valuation() == a.valuation() + x.valuation()


@settings(max_examples=200, deadline=None)
@given(series_st(R3, low=-3))
def test_wp_valuation_rule(x):
    # val(wp(x)) = val(x) if val(x) > 0, p val(x) if val(x) < 0, >= 0 if val(x) = 0
    if x.is_zero():
        return
    v = x.valuation()
    w = wp_apply(x)
    if v > 0:
        assert w.valuation() == v
    elif v < 0:
        assert w.valuation() == 3 * v
    else:
        assert w.is_zero() or w.valuation() >= 0


@settings(max_examples=100, deadline=None)
@given(series_st(R2))
def test_series_json_round_trip(x):
    y = TruncatedSeries.from_json(x.to_json())
    assert y == x


def test_series_json_shape():
    R = SeriesRing(gf_make(2, 1), 2)
    x = R.series([(Fraction(1, 4), 1), (3, 1)], precision=5)
    obj = x.to_json()
    assert obj["p"] == 2 and obj["k"] == 1
    assert obj["terms"] == [[1, 2, [1]], [3, 0, [1]]]
    assert obj["precision"] == [5, 0]


# --- root maps -----------------------------------------------------------------

def test_ts_as_root_examples():
    R = SeriesRing(gf_make(2, 1), 0)
    assert ts_as_root(R.zero()).is_zero()
    z = R.t(4) + R.t(1)
    x = ts_as_root(z, precision=40)
    assert x.valuation() == 1
    assert wp_apply(x).agrees_with(z.truncate(40))
    # term-by-term oracle: x = z + z^2 + z^4 + ... in characteristic 2
    acc, term = R.zero(), z
    while term.valuation() < 40:
        acc = acc + term
        term = term * term
    assert x.agrees_with(acc.truncate(40))
    with pytest.raises(ValueError):
        ts_as_root(R.one())


def test_ts_as_root_exact_input_needs_precision():
    R = SeriesRing(F3, 0)
    with pytest.raises(PrecisionError):
        ts_as_root(R.t())


@settings(max_examples=80, deadline=None)
@given(series_st(SeriesRing(gf_make(3, 2), 1), low=1))
def test_ts_as_root_random(z):
    if z.is_zero():
        return
    x = ts_as_root(z)
    assert x.valuation() == z.valuation()
    assert wp_apply(x).agrees_with(z)


def test_as_root_descent_examples():
    R = SeriesRing(gf_make(2, 1), 2)
    es = as_root_descent(R.t(), 2)
    assert [e.valuation() for e in es] == [1, Fraction(1, 2), Fraction(1, 4)]
    (e0,) = as_root_descent(R.t(), 0)
    assert e0.terms == R.t().terms and e0.is_exact
    with pytest.raises(ValueError):
        as_root_descent(R.one() + R.t(), 1)
    with pytest.raises(PerfectionCapError):
        as_root_descent(R.t(), 3)


@pytest.mark.parametrize("p,cap,v", [(2, 3, 3), (3, 2, 2), (5, 1, 1), (3, 2, Fraction(5, 3))])
def test_as_root_descent_valuations_exact(p, cap, v):
    R = SeriesRing(gf_make(p, 1), cap)
    y = R.t(v) + R.t(v + 2)
    steps = cap if Fraction(v).denominator == 1 else cap - 1
    es = as_root_descent(y, steps)
    for i, e in enumerate(es):
        assert e.valuation() == Fraction(v) / p**i
    # 1/e_{i+1} is a root of x^p - x = 1/e_i with negative valuation, so its
    # p-th power carries the leading term of 1/e_i
    for a, b in zip(es, es[1:]):
        lhs = wp_apply(b.leading_term().inverse())
        assert lhs.valuation() == -a.valuation()
        assert lhs.leading_coefficient() == a.leading_coefficient().inverse()


# --- parsing -----------------------------------------------------------------

def test_parse_series_and_required_cap():
    F = gf_make(2, 2)
    assert required_cap("t^(1/4) + t", F) == 2
    assert required_cap("t^3", F) == 0
    R = SeriesRing(F, 2)
    x = parse_series("t^(1/4) + g*t + O(t^3)", R)
    assert x.valuation() == Fraction(1, 4)
    assert x.coefficient(1) == F.gen()
    assert x.precision == 3
    y = parse_series("-g^2*t + (g+1)*t^2 - 1", SeriesRing(gf_make(3, 2), 0))
    G = gf_make(3, 2)
    assert y.terms == [(0, -G.one()), (1, -G.gen() ** 2), (2, G.gen() + G.one())]
    with pytest.raises(SeriesSyntaxError):
        parse_series("t^^2", R)


# --- linear algebra ------------------------------------------------------------

def test_det_inverse_solve_over_f4():
    F = gf_make(2, 2)
    g, one = F.gen(), F.one()
    A = [[one, g], [one, g + one]]
    assert det(A) == one
    Ai = inverse(A)
    I = mat_mul(A, Ai)
    assert I == [[one, F.zero()], [F.zero(), one]]
    x = solve(A, [g, one])
    assert [A[0][0] * x[0] + A[0][1] * x[1], A[1][0] * x[0] + A[1][1] * x[1]] == [g, one]
    with pytest.raises(SingularMatrixError):
        inverse([[one, one], [one, one]])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_fp_rank_nullspace(rows, cols, seed):
    p = 3
    A = np.random.default_rng(seed).integers(0, p, size=(rows, cols))
    r = fp_rank(A, p)
    N = fp_nullspace(A, p, ncols=cols)
    assert N.shape[0] == cols - r
    assert not np.any(A @ N.T % p)
    # oracle: count solutions of A x = 0 by enumeration
    sols = sum(1 for x in itertools.product(range(p), repeat=cols) if not np.any(A @ np.array(x) % p))
    assert sols == p ** (cols - r)
    b = A @ np.random.default_rng(seed + 1).integers(0, p, size=cols) % p
    x = fp_solve(A, b, p)
    assert x is not None and np.array_equal(A @ x % p, b)
