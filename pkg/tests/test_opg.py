from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndep.opg import (
    Hypergraph, InconsistentEmbeddingError, amalgamate, check_extension, check_extension_naive,
    find_induced_copy, find_induced_copy_naive, is_induced_embedding, random_opg,
)


def test_random_opg_density_extremes():
    assert random_opg((3, 4), 0, seed=1).edges == frozenset()
    full = random_opg((3, 4, 2), 1, seed=1)
    assert full.edges == frozenset(itertools.product(range(3), range(4), range(2)))


def test_random_opg_deterministic():
    a = random_opg((4, 4, 4), "1/2", seed=7)
    b = random_opg((4, 4, 4), "1/2", seed=7)
    assert a == b
    assert a != random_opg((4, 4, 4), "1/2", seed=8)


def test_random_opg_validation():
    with pytest.raises(ValueError):
        random_opg((3, 0), "1/2", seed=0)
    with pytest.raises(ValueError):
        random_opg((3, 3), 2, seed=0)


def test_hypergraph_validation_and_json():
    with pytest.raises(ValueError):
        Hypergraph((2, 2), frozenset({(0, 0, 0)}))
    with pytest.raises(ValueError):
        Hypergraph((2, 2), frozenset({(0, 5)}))
    H = random_opg((3, 2, 4), "1/3", seed=2)
    assert Hypergraph.from_json(H.to_json()) == H
    assert Hypergraph.from_tensor(H.tensor()) == H


# --- extension axioms ------------------------------------------------------------

def test_extension_complete_hypergraph():
    H = random_opg((3, 3, 3), 1, seed=0)
    rep = check_extension(H, 1)
    linkage = [f for f in rep.failures if f.kind == "linkage"]
    assert linkage and all(f.negative for f in linkage)
    # every demand with a negative tuple and a nonempty gap fails
    for f in rep.failures:
        if f.kind == "betweenness":
            assert f.hi == f.lo + 1
    assert len(linkage) == 3 * 9 * 1  # per part: 9 negative singletons x 1 gapped pair (0, 2)


def test_extension_empty_hypergraph():
    H = Hypergraph((3, 3, 3))
    rep = check_extension(H, 1)
    linkage = [f for f in rep.failures if f.kind == "linkage"]
    assert len(linkage) == 3 * 9 and all(f.positive and not f.negative for f in linkage)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([(4, 4, 4), (5, 3), (3, 3, 3), (6, 2)]), st.integers(1, 2))
def test_extension_agrees_with_naive(seed, sizes, k):
    H = random_opg(sizes, "1/2", seed=seed)
    fast, slow = check_extension(H, k), check_extension_naive(H, k)
    assert fast.demands == slow.demands
    assert fast.failures == slow.failures


def test_extension_8x8x8_k1():
    H = random_opg((8, 8, 8), "1/2", seed=0)
    fast, slow = check_extension(H, 1), check_extension_naive(H, 1)
    assert fast.failures == slow.failures
    assert fast.to_json(limit=3)["failures"] == len(slow.failures)


# --- induced copies ----------------------------------------------------------------

def test_copy_single_vertex_non_edge():
    H = Hypergraph((2, 2), frozenset({(0, 0)}))
    P = Hypergraph((1, 1))
    assert find_induced_copy(H, P) == ((0,), (1,))


def test_copy_of_itself_is_identity():
    H = random_opg((4, 3, 3), "1/2", seed=3)
    assert find_induced_copy(H, H) == tuple(tuple(range(s)) for s in H.sizes)


def test_copy_square_agrees_with_naive():
    square = Hypergraph((2, 2), frozenset({(0, 0), (1, 1)}))
    for seed in range(30):
        H = random_opg((8, 8), "1/2", seed=seed)
        assert find_induced_copy(H, square) == find_induced_copy_naive(H, square)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(0, 3), st.integers(4, 7))
def test_copy_in_box_agrees_with_naive(seed, lo, hi):
    H = random_opg((7, 6, 5), "1/2", seed=seed)
    P = random_opg((2, 1, 2), "1/2", seed=seed + 1)
    box = [(lo, min(hi, s)) for s in H.sizes]
    got = find_induced_copy(H, P, box)
    assert got == find_induced_copy_naive(H, P, box)
    if got is not None:
        assert is_induced_embedding(P, H, got)
        assert all(l0 <= v < b for part, (l0, b) in zip(got, box) for v in part)


def test_copy_box_validation():
    H = random_opg((3, 3), "1/2", seed=0)
    with pytest.raises(ValueError):
        find_induced_copy(H, Hypergraph((1, 1)), [(0, 5), (0, 3)])


# --- amalgamation ---------------------------------------------------------------------

def test_amalgam_over_empty_is_ordered_disjoint_union():
    A = random_opg((2, 3), "1/2", seed=1)
    B = random_opg((3, 1), "1/2", seed=2)
    C = Hypergraph((0, 0))
    am = amalgamate(A, B, C, ((), ()), ((), ()))
    assert am.result.sizes == (5, 4)
    assert am.embed_a == ((0, 1), (0, 1, 2))
    assert am.embed_b == ((2, 3, 4), (3,))
    assert is_induced_embedding(A, am.result, am.embed_a)
    assert is_induced_embedding(B, am.result, am.embed_b)


def test_amalgam_of_equal_structures():
    A = random_opg((3, 3), "1/2", seed=4)
    ident = tuple(tuple(range(s)) for s in A.sizes)
    am = amalgamate(A, A, A, ident, ident)
    assert am.result == A


def test_amalgam_random_over_small_common_part():
    for seed in range(25):
        rng = random.Random(seed)
        A = random_opg((4, 4), "1/2", seed=seed)
        emb_a = tuple(tuple(sorted(rng.sample(range(4), 1))) for _ in range(2))
        C = Hypergraph((1, 1), frozenset({(0, 0)}) if A.has_edge((emb_a[0][0], emb_a[1][0])) else frozenset())
        # B: a random host containing C at random positions
        B_t = np.random.default_rng(seed).integers(0, 2, size=(3, 5)).astype(bool)
        emb_b = ((rng.randrange(3),), (rng.randrange(5),))
        B_t[emb_b[0][0], emb_b[1][0]] = C.has_edge((0, 0))
        B = Hypergraph.from_tensor(B_t)
        am = amalgamate(A, B, C, emb_a, emb_b)
        assert is_induced_embedding(A, am.result, am.embed_a)
        assert is_induced_embedding(B, am.result, am.embed_b)
        # the images of C coincide
        for part in range(2):
            assert am.embed_a[part][emb_a[part][0]] == am.embed_b[part][emb_b[part][0]]
        assert am.result.sizes == tuple(a + b - 1 for a, b in zip(A.sizes, B.sizes))


def test_amalgam_rejects_bad_embedding():
    A = Hypergraph((1, 1), frozenset({(0, 0)}))
    C = Hypergraph((1, 1))
    with pytest.raises(InconsistentEmbeddingError):
        amalgamate(A, A, C, ((0,), (0,)), ((0,), (0,)))
