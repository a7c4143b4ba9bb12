from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from ndep.algebra import gf_make
from ndep.opg import Hypergraph, random_opg
from ndep.shatter import (
    BilinearSpace, BudgetExceeded, DegenerateFormError, WitnessedRelation, bilinear_encode,
    bilinear_shatter_demo, binary_pattern, compose_relation, find_lowarity_blind_pair,
    gf_tables, has_monochromatic_box, has_monochromatic_box_naive, identity_space,
    max_shattered_grid, max_shattered_grid_naive, ramsey_partite, shatters, shatters_naive,
    symplectic_space, traces, verify_blind_pair, verify_ramsey,
)


def _powerset_family(shape):
    cells = int(np.prod(shape))
    masks = np.arange(1 << cells)
    bits = (masks[:, None] >> np.arange(cells)[None, :]) & 1
    return WitnessedRelation(bits.astype(bool).reshape((1 << cells,) + tuple(shape)))


def _equality(size):
    # witness y, element x: x = y
    return WitnessedRelation(np.eye(size, dtype=bool))


# --- shattering ----------------------------------------------------------------

def test_empty_grid():
    rel = _powerset_family((2, 2))
    assert shatters(rel, ((), ()))
    empty = WitnessedRelation(np.zeros((0, 2, 2), dtype=bool))
    assert not shatters(empty, ((), ()))
    assert not shatters_naive(empty, ((), ()))


def test_equality_relation():
    rel = _equality(5)
    assert not shatters(rel, ((0, 1),))
    assert max_shattered_grid(rel).side == max_shattered_grid_naive(rel)


def test_equality_single_point_shattered():
    rel = _equality(5)
    # witnesses 3 and 0 give traces {x} and {} on the one-point grid
    assert shatters_naive(rel, ((3,),))
    assert shatters(rel, ((3,),))
    assert max_shattered_grid(rel).side == 1


def test_powerset_family():
    rel = _powerset_family((2, 2))
    assert shatters(rel, ((0, 1), (0, 1)))
    assert len(traces(rel, ((0, 1), (0, 1)))) == 16
    big = _powerset_family((3, 3))
    res = max_shattered_grid(big)
    assert res.side == 3 and res.grid == ((0, 1, 2), (0, 1, 2))


def test_grid_validation():
    rel = _powerset_family((2, 2))
    with pytest.raises(ValueError):
        shatters(rel, ((0, 5), (0,)))
    with pytest.raises(ValueError):
        shatters(rel, ((0, 0), (1,)))
    with pytest.raises(ValueError):
        shatters(rel, ((0,),))


@settings(max_examples=150, deadline=None)
@given(hnp.arrays(bool, st.tuples(st.integers(0, 20), st.integers(1, 4), st.integers(1, 3))),
       st.data())
def test_shatters_agrees_with_naive(bits, data):
    rel = WitnessedRelation(bits)
    d1, d2 = rel.parts
    g1 = data.draw(st.lists(st.integers(0, d1 - 1), unique=True, max_size=2))
    g2 = data.draw(st.lists(st.integers(0, d2 - 1), unique=True, max_size=2))
    grid = (tuple(sorted(g1)), tuple(sorted(g2)))
    assert shatters(rel, grid) == shatters_naive(rel, grid)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.sampled_from([(3,), (3, 3), (4, 2), (2, 2, 2)]))
def test_max_grid_agrees_with_naive(seed, density_num, shape):
    rng = np.random.default_rng(seed)
    w = int(rng.integers(1, 80))
    bits = rng.integers(0, 4, size=(w,) + shape) < density_num
    rel = WitnessedRelation(bits)
    res = max_shattered_grid(rel)
    assert res.side == max_shattered_grid_naive(rel)
    if res.side:
        assert shatters_naive(rel, res.grid)


def test_max_grid_caps():
    rel = _powerset_family((3, 3))
    assert max_shattered_grid(rel, caps=(2, 3)).side == 2
    assert max_shattered_grid_naive(rel, caps=(2, 3)) == 2


def test_relation_json_and_text_round_trip():
    rng = np.random.default_rng(5)
    rel = WitnessedRelation(rng.integers(0, 2, size=(7, 3, 5)).astype(bool), tuple(f"w{i}" for i in range(7)))
    assert WitnessedRelation.from_json(rel.to_json()) == rel
    assert WitnessedRelation.from_text(rel.to_text()) == rel


# --- composition ----------------------------------------------------------------

def test_compose_first_projection_is_constant_in_witness():
    S = np.array([True, False, True, False, False])
    first = np.tile(np.arange(5)[:, None], (1, 5))
    rel = compose_relation(S, [(2, 3)], [first])
    assert all(np.array_equal(w, rel.bits[0]) for w in rel.bits)
    assert max_shattered_grid(rel).side == 0


def test_compose_constant_functions():
    rng = np.random.default_rng(1)
    R = rng.integers(0, 2, size=(4, 4)).astype(bool)
    zero = np.zeros((4, 4), dtype=np.int64)
    rel = compose_relation(R, [(1, 2), (1, 3)], [zero, zero])
    assert len(np.unique(rel.bits)) == 1
    assert max_shattered_grid(rel).side == 0


def test_compose_sum_of_products_f5():
    F = gf_make(5, 1)
    add, mul = gf_tables(F)
    M = range(5)
    R = np.array([[[(a + b + c) % 5 == 0 for c in M] for b in M] for a in M])
    rel = compose_relation(R, [(1, 2), (1, 3), (2, 3)], [mul, mul, mul])
    # direct oracle: psi(x; y, z) iff xy + xz + yz = 0
    for x, y, z in itertools.product(M, repeat=3):
        assert rel.bits[x, y, z] == ((x * y + x * z + y * z) % 5 == 0)
    assert max_shattered_grid(rel).side == max_shattered_grid_naive(rel)


def test_compose_validation():
    R = np.zeros((3, 3), dtype=bool)
    t = np.zeros((3, 3), dtype=np.int64)
    with pytest.raises(ValueError):
        compose_relation(R, [(1, 2)], [t])
    with pytest.raises(ValueError):
        compose_relation(R, [(2, 1), (1, 2)], [t, t])
    with pytest.raises(ValueError):
        compose_relation(R, [(1, 2), (1, 2)], [t, t + 7])


def test_gf_tables_match_field():
    F = gf_make(2, 2)
    add, mul = gf_tables(F)
    for a in F:
        for b in F:
            assert add[a.value, b.value] == (a + b).value
            assert mul[a.value, b.value] == (a * b).value


# --- bilinear forms --------------------------------------------------------------

def test_identity_encoding_reads_off_columns():
    F = gf_make(3, 1)
    C = [[F(1), F(2)], [F(0), F(1)]]
    a, b = bilinear_encode(identity_space(F, 3), C)
    assert a[0] == [F(1), F(0), F(0)]
    assert b[1] == [F(2), F(1), F(0)]


def test_symplectic_encoding_random_f3():
    F = gf_make(3, 1)
    space = symplectic_space(F, 2)
    rng = random.Random(0)
    for _ in range(20):
        C = [[F(rng.randrange(3)) for _ in range(2)] for _ in range(2)]
        a, b = bilinear_encode(space, C)
        for i in range(2):
            for j in range(2):
                assert space.pair(a[i], b[j]) == C[i][j]


def test_encoding_dimension_error():
    F = gf_make(3, 1)
    with pytest.raises(ValueError):
        bilinear_encode(identity_space(F, 2), [[F(0)] * 3] * 3)


def test_space_validation():
    F = gf_make(3, 1)
    with pytest.raises(DegenerateFormError):
        BilinearSpace(F, [[F(1), F(1)], [F(1), F(1)]], "symmetric")
    with pytest.raises(ValueError):
        BilinearSpace(F, [[F(0), F(1)], [F(1), F(0)]], "alternating")
    with pytest.raises(ValueError):
        BilinearSpace(F, [[F(1), F(2)], [F(1), F(1)]], "symmetric")


def test_bilinear_demo():
    F16 = gf_make(2, 4)
    demo = bilinear_shatter_demo(identity_space(F16, 3), 3)
    assert demo.ok
    assert bilinear_shatter_demo(symplectic_space(F16, 2), 3).ok
    assert bilinear_shatter_demo(identity_space(gf_make(3, 1), 2), 1).ok
    with pytest.raises(ValueError):
        bilinear_shatter_demo(identity_space(gf_make(2, 2), 3), 3)


# --- partite Ramsey --------------------------------------------------------------

def test_ramsey_trivial_cases():
    assert ramsey_partite(1, 3, 2).R == 1
    assert ramsey_partite(3, 1, 2).R == 3
    assert ramsey_partite(2, 2, 1).R == 3


@pytest.mark.parametrize("l,m,n,expected", [(2, 2, 1, 3), (2, 3, 1, 4), (3, 2, 1, 5), (1, 2, 3, 1), (2, 1, 2, 2)])
def test_ramsey_small_values(l, m, n, expected):
    # n = 1 is pigeonhole: m(l-1)+1
    res = ramsey_partite(l, m, n)
    assert res.R == expected
    assert verify_ramsey(res) == (True, True)


def test_ramsey_budget():
    with pytest.raises(BudgetExceeded) as info:
        ramsey_partite(2, 2, 2, budget=5)
    assert info.value.lower >= 2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 3), st.integers(1, 2))
def test_monochromatic_box_agrees_with_naive(seed, R, l):
    rng = np.random.default_rng(seed)
    col = rng.integers(0, 2, size=(R, R))
    assert has_monochromatic_box(col, l, 2) == has_monochromatic_box_naive(col, l)


# --- blind pairs -------------------------------------------------------------------

def _complete_binary(H):
    N = sum(H.sizes)
    return frozenset(itertools.product(range(N), repeat=2))


def test_blind_pair_with_complete_relations():
    H = Hypergraph((2, 2, 2), frozenset({(0, 0, 0)}))
    pair = find_lowarity_blind_pair(H, [_complete_binary(H)])
    assert pair is not None
    assert verify_blind_pair(H, [_complete_binary(H)], pair)
    assert pair == ((0, 0, 0), (0, 0, 1))


def test_blind_pair_complete_hypergraph():
    H = random_opg((3, 3, 3), 1, seed=0)
    assert find_lowarity_blind_pair(H, [_complete_binary(H)]) is None


def test_blind_pair_random_verified_and_least():
    for seed in range(5):
        H = random_opg((6, 6, 6), "1/2", seed=seed)
        rng = random.Random(seed)
        N = sum(H.sizes)
        rel = frozenset((u, v) for u in range(N) for v in range(N) if rng.random() < 0.5)
        pair = find_lowarity_blind_pair(H, [rel])
        # oracle: scan ordered pairs of cross-tuples in lexicographic order
        best = None
        tuples = list(H.cross_tuples())
        pats = {t: binary_pattern(H, [rel], t) for t in tuples}
        for g in tuples:
            if not H.has_edge(g):
                continue
            for h in tuples:
                if not H.has_edge(h) and pats[g] == pats[h]:
                    best = (g, h)
                    break
            if best:
                break
        assert pair == best
        if pair is not None:
            assert verify_blind_pair(H, [rel], pair)
