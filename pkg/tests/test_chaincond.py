from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndep.algebra import gf_make, wp_apply
from ndep.chaincond import (
    FamilyArray, FamilySpec, SubspaceSubgroup, baldwin_saxl_threshold, find_redundant,
    find_redundant_naive, intersection, product_wp_family, redundant_by_elements,
    wp_image_subgroup,
)


def _image_by_evaluation(b):
    F = b.field
    return frozenset((b * wp_apply(x)).value for x in F)


def test_wp_image_example_f4():
    F = gf_make(2, 2)
    H = wp_image_subgroup(F.one())
    assert H.elements() == frozenset({0, 1})
    assert H.elements() == _image_by_evaluation(F.one())


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_wp_image_dimension_and_elements(p, k):
    F = gf_make(p, k)
    for b in F:
        if b.is_zero():
            continue
        H = wp_image_subgroup(b)
        assert H.dim == k - 1
        assert H.elements() == _image_by_evaluation(b)


def test_wp_image_zero_error():
    with pytest.raises(ValueError):
        wp_image_subgroup(gf_make(2, 2).zero())


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 4))
def test_intersection_matches_element_sets(seed, count):
    F = gf_make(3, 3)
    rng = random.Random(seed)
    els = list(F)
    groups = [SubspaceSubgroup.span(F, rng.sample(els, rng.randrange(0, 3))) for _ in range(count)]
    got = intersection(F, groups)
    assert got.elements() == frozenset.intersection(*(g.elements() for g in groups))
    for x in F:
        assert got.contains(x) == (x.value in got.elements())


def test_empty_intersection_is_whole_field():
    F = gf_make(2, 3)
    assert intersection(F, []).elements() == frozenset(range(8))


def test_all_parameters_equal_gives_zero_index():
    F = gf_make(2, 3)
    b = F.gen()
    fa = FamilyArray([[b, b, b], [b, b, b]], [product_wp_family])
    assert find_redundant(fa) == (0, 0)


def test_single_proper_subgroup_has_no_redundant_index():
    F = gf_make(2, 3)
    fa = FamilyArray([[F.gen()]], [product_wp_family])
    assert find_redundant(fa) is None
    assert find_redundant_naive(fa) is None


def test_whole_group_family_is_redundant():
    F = gf_make(2, 3)
    fa = FamilyArray([[F.gen()]], [lambda params: SubspaceSubgroup.whole(F)])
    assert find_redundant(fa) == (0,)


def test_dimension_bound_gives_redundant_index():
    # k + 1 hyperplanes in F_2^k always contain a redundant one
    F = gf_make(2, 4)
    rng = random.Random(0)
    nonzero = [x for x in F if not x.is_zero()]
    for _ in range(40):
        n, d = rng.choice([(1, 5), (2, 3), (3, 2)])
        params = [[rng.choice(nonzero) for _ in range(d)] for _ in range(n)]
        fa = FamilyArray(params, [product_wp_family])
        nu = find_redundant(fa)
        assert nu is not None
        assert redundant_by_elements(fa, nu)
        assert nu == find_redundant_naive(fa)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([(2, 3), (3, 2), (2, 4)]), st.integers(1, 2), st.integers(1, 3))
def test_find_redundant_agrees_with_naive(seed, pk, n, d):
    F = gf_make(*pk)
    rng = random.Random(seed)
    nonzero = [x for x in F if not x.is_zero()]
    params = [[rng.choice(nonzero) for _ in range(d)] for _ in range(n)]
    fam2 = lambda prm: wp_image_subgroup(prm[-1] * prm[-1])  # noqa: E731
    fa = FamilyArray(params, [product_wp_family, fam2])
    assert find_redundant(fa) == find_redundant_naive(fa)


def test_family_array_validation():
    F = gf_make(2, 2)
    with pytest.raises(ValueError):
        FamilyArray([[F.one()], [F.one(), F.one()]], [product_wp_family])
    with pytest.raises(ValueError):
        FamilyArray([[F.zero()]], [product_wp_family])


def test_threshold_constant_family():
    F = gf_make(2, 3)
    whole = FamilySpec(F, 1, (lambda prm: SubspaceSubgroup.whole(F),))
    assert baldwin_saxl_threshold(whole, 10, seed=0).d == 1
    fixed = FamilySpec(F, 1, (lambda prm: wp_image_subgroup(F.one()),))
    assert baldwin_saxl_threshold(fixed, 10, seed=0).d == 2


def test_threshold_hyperplanes_f16():
    F = gf_make(2, 4)
    res = baldwin_saxl_threshold(FamilySpec(F, 1, (product_wp_family,)), 50, seed=0)
    assert res.d <= 5
    if res.failing is not None:
        assert find_redundant_naive(res.failing) is None


def test_threshold_zero_trials():
    F = gf_make(2, 2)
    with pytest.raises(ValueError):
        baldwin_saxl_threshold(FamilySpec(F, 1, (product_wp_family,)), 0, seed=0)
