"""Ordered n-partite hypergraphs.

Vertices are addressed locally as (part, index). The global order puts part 0
before part 1 and so on, and orders each part by index. An edge is an n-tuple
of local indices with one vertex from each part.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Hypergraph:
    sizes: tuple[int, ...]
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        edges = frozenset(tuple(int(v) for v in e) for e in self.edges)
        for e in edges:
            if len(e) != self.n:
                raise ValueError(f"edge {e} does not have one vertex per part")
            if any(not 0 <= v < s for v, s in zip(e, self.sizes)):
                raise ValueError(f"edge {e} leaves the parts {self.sizes}")
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return len(self.sizes)

    def has_edge(self, e) -> bool:
        return tuple(e) in self.edges

    def cross_tuples(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(s) for s in self.sizes))

    def tensor(self) -> np.ndarray:
        t = np.zeros(self.sizes, dtype=bool)
        for e in self.edges:
            t[e] = True
        return t

    @classmethod
    def from_tensor(cls, t: np.ndarray) -> Hypergraph:
        return cls(t.shape, frozenset(tuple(int(v) for v in e) for e in np.argwhere(t)))

    def global_index(self, part: int, i: int) -> int:
        return sum(self.sizes[:part]) + i

    def to_json(self) -> dict:
        return {"n": self.n, "parts": list(self.sizes), "edges": sorted(list(e) for e in self.edges)}

    @classmethod
    def from_json(cls, obj: dict) -> Hypergraph:
        h = cls(tuple(obj["parts"]), frozenset(tuple(e) for e in obj["edges"]))
        if "n" in obj and obj["n"] != h.n:
            raise ValueError(f"n={obj['n']} disagrees with {h.n} parts")
        return h


def random_opg(sizes: Sequence[int], density, seed: int) -> Hypergraph:
    """Each cross-tuple is an edge independently with probability ``density``.

    Uses numpy's PCG64 generator; the rational density is compared exactly
    against uniform integers, so 0 and 1 are honoured without rounding.
    """
    if any(s < 1 for s in sizes):
        raise ValueError("part sizes must be >= 1")
    d = Fraction(density)
    if not 0 <= d <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.integers(0, d.denominator, size=tuple(sizes))
    return Hypergraph.from_tensor(draws < d.numerator)


# --- extension axioms -----------------------------------------------------------

@dataclass(frozen=True)
class ExtensionFailure:
    part: int
    positive: tuple      # cross-tuples that must be linked to b
    negative: tuple      # cross-tuples that must not be linked
    lo: int
    hi: int
    kind: str            # "betweenness" or "linkage"

    def to_json(self) -> dict:
        return {"part": self.part, "A0": [list(a) for a in self.positive],
                "A1": [list(a) for a in self.negative], "b0": self.lo, "b1": self.hi, "kind": self.kind}


@dataclass
class ExtensionReport:
    k: int
    demands: int
    failures: list[ExtensionFailure]

    @property
    def betweenness(self) -> int:
        return sum(f.kind == "betweenness" for f in self.failures)

    @property
    def linkage(self) -> int:
        return sum(f.kind == "linkage" for f in self.failures)

    def to_json(self, limit: int | None = None) -> dict:
        fails = self.failures if limit is None else self.failures[:limit]
        return {"k": self.k, "demands": self.demands, "failures": len(self.failures),
                "betweenness_failures": self.betweenness, "linkage_failures": self.linkage,
                "listed": [f.to_json() for f in fails]}


def _demands(cross: list, k: int):
    """Disjoint (A0, A1) with |A0| + |A1| <= k, in a fixed order."""
    for size in range(k + 1):
        for chosen in itertools.combinations(cross, size):
            for mask in range(1 << size):
                pos = tuple(c for b, c in enumerate(chosen) if mask >> b & 1)
                neg = tuple(c for b, c in enumerate(chosen) if not mask >> b & 1)
                yield pos, neg


def _link_matrix(H: Hypergraph, j: int) -> tuple[np.ndarray, list]:
    """Rows: vertices of part j; columns: cross-tuples of the other parts."""
    t = np.moveaxis(H.tensor(), j, 0)
    others = [s for i, s in enumerate(H.sizes) if i != j]
    cross = list(itertools.product(*(range(s) for s in others)))
    return t.reshape(H.sizes[j], len(cross)), cross


def check_extension(H: Hypergraph, k: int) -> ExtensionReport:
    if k < 1:
        raise ValueError("k must be >= 1")
    failures = []
    demands = 0
    for j in range(H.n):
        M, cross = _link_matrix(H, j)
        col = {c: i for i, c in enumerate(cross)}
        size = H.sizes[j]
        for pos, neg in _demands(cross, k):
            good = np.ones(size, dtype=bool)
            for a in pos:
                good &= M[:, col[a]]
            for a in neg:
                good &= ~M[:, col[a]]
            csum = np.concatenate([[0], np.cumsum(good)])
            for lo in range(size):
                for hi in range(lo + 1, size):
                    demands += 1
                    if hi == lo + 1:
                        failures.append(ExtensionFailure(j, pos, neg, lo, hi, "betweenness"))
                    elif csum[hi] - csum[lo + 1] == 0:
                        failures.append(ExtensionFailure(j, pos, neg, lo, hi, "linkage"))
    return ExtensionReport(k, demands, failures)


def check_extension_naive(H: Hypergraph, k: int) -> ExtensionReport:
    """Oracle: scan every candidate b for every demand directly against the edge set."""
    failures = []
    demands = 0
    for j in range(H.n):
        others = [range(s) for i, s in enumerate(H.sizes) if i != j]
        cross = list(itertools.product(*others))

        def linked(b, a):
            return H.has_edge(a[:j] + (b,) + a[j:])

        for pos, neg in _demands(cross, k):
            for lo in range(H.sizes[j]):
                for hi in range(lo + 1, H.sizes[j]):
                    demands += 1
                    between = range(lo + 1, hi)
                    if not between:
                        failures.append(ExtensionFailure(j, pos, neg, lo, hi, "betweenness"))
                    elif not any(all(linked(b, a) for a in pos) and not any(linked(b, a) for a in neg)
                                 for b in between):
                        failures.append(ExtensionFailure(j, pos, neg, lo, hi, "linkage"))
    return ExtensionReport(k, demands, failures)


# --- embeddings ---------------------------------------------------------------

Embedding = tuple  # per part, an increasing tuple of target indices


def is_induced_embedding(small: Hypergraph, big: Hypergraph, emb: Embedding) -> bool:
    if small.n != big.n or len(emb) != small.n:
        return False
    for part, (img, s, b) in enumerate(zip(emb, small.sizes, big.sizes)):
        if len(img) != s or any(not 0 <= v < b for v in img):
            return False
        if any(x >= y for x, y in zip(img, img[1:])):
            return False
    for e in small.cross_tuples():
        if small.has_edge(e) != big.has_edge(tuple(emb[i][v] for i, v in enumerate(e))):
            return False
    return True


def _check_box(H: Hypergraph, pattern: Hypergraph, box) -> list[range]:
    if pattern.n != H.n or len(box) != H.n:
        raise ValueError("pattern, host and box must have the same number of parts")
    out = []
    for (lo, hi), s, ps in zip(box, H.sizes, pattern.sizes):
        if not 0 <= lo <= hi <= s:
            raise ValueError(f"interval [{lo}, {hi}) leaves a part of size {s}")
        out.append(range(lo, hi))
    return out


def find_induced_copy(H: Hypergraph, pattern: Hypergraph, box=None) -> Embedding | None:
    """Lexicographically least order- and part-preserving induced embedding of
    ``pattern`` into H inside ``box`` (half-open intervals per part)."""
    if box is None:
        box = [(0, s) for s in H.sizes]
    ranges = _check_box(H, pattern, box)
    if any(ps > len(r) for ps, r in zip(pattern.sizes, ranges)):
        return None
    n = H.n
    host, pat = H.tensor(), pattern.tensor()
    if any(s == 0 for s in pattern.sizes):
        return tuple(tuple(range(r.start, r.start + ps)) for ps, r in zip(pattern.sizes, ranges))
    # all parts but the last are chosen as whole combinations; the last part is
    # filled vertex by vertex, checking every tuple through the new vertex
    heads = [itertools.combinations(r, ps) for r, ps in zip(ranges[:-1], pattern.sizes[:-1])]
    last, lsize = ranges[-1], pattern.sizes[-1]
    for head in itertools.product(*heads):
        sub_host = host[np.ix_(*head, last)]
        sub_host = sub_host.reshape(-1, len(last))
        sub_pat = pat.reshape(-1, lsize)
        chosen: list[int] = []

        def extend(start: int) -> bool:
            if len(chosen) == lsize:
                return True
            i = len(chosen)
            for c in range(start, len(last) - (lsize - i) + 1):
                if np.array_equal(sub_host[:, c], sub_pat[:, i]):
                    chosen.append(c)
                    if extend(c + 1):
                        return True
                    chosen.pop()
            return False

        if extend(0):
            return tuple(head) + (tuple(last[c] for c in chosen),)
    return None


def find_induced_copy_naive(H: Hypergraph, pattern: Hypergraph, box=None) -> Embedding | None:
    """Oracle: every product of increasing maps in lexicographic order."""
    if box is None:
        box = [(0, s) for s in H.sizes]
    ranges = _check_box(H, pattern, box)
    for emb in itertools.product(*(itertools.combinations(r, ps) for r, ps in zip(ranges, pattern.sizes))):
        if is_induced_embedding(pattern, H, emb):
            return tuple(emb)
    return None


# --- amalgamation ---------------------------------------------------------------

class InconsistentEmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class Amalgam:
    result: Hypergraph
    embed_a: Embedding
    embed_b: Embedding

    def to_json(self) -> dict:
        return {"result": self.result.to_json(), "embed_a": [list(x) for x in self.embed_a],
                "embed_b": [list(x) for x in self.embed_b]}


def amalgamate(A: Hypergraph, B: Hypergraph, C: Hypergraph, into_a: Embedding, into_b: Embedding) -> Amalgam:
    """Free amalgam of A and B over C.

    Within every gap between consecutive images of C, the vertices of A not in C
    come before those of B not in C. The only edges are those of A and of B.
    """
    if not (A.n == B.n == C.n):
        raise ValueError("A, B and C must have the same number of parts")
    into_a = tuple(tuple(x) for x in into_a)
    into_b = tuple(tuple(x) for x in into_b)
    if not is_induced_embedding(C, A, into_a):
        raise InconsistentEmbeddingError("the map C -> A is not an induced order-preserving embedding")
    if not is_induced_embedding(C, B, into_b):
        raise InconsistentEmbeddingError("the map C -> B is not an induced order-preserving embedding")
    sizes, emb_a, emb_b = [], [], []
    for part in range(A.n):
        ca, cb = into_a[part], into_b[part]
        pos_a = [0] * A.sizes[part]
        pos_b = [0] * B.sizes[part]
        nxt = 0
        bounds_a = list(ca) + [A.sizes[part]]
        bounds_b = list(cb) + [B.sizes[part]]
        prev_a = prev_b = -1
        for g in range(len(ca) + 1):
            for v in range(prev_a + 1, bounds_a[g]):
                pos_a[v] = nxt
                nxt += 1
            for v in range(prev_b + 1, bounds_b[g]):
                pos_b[v] = nxt
                nxt += 1
            if g < len(ca):
                pos_a[ca[g]] = pos_b[cb[g]] = nxt
                nxt += 1
            prev_a, prev_b = bounds_a[g], bounds_b[g]
        sizes.append(nxt)
        emb_a.append(tuple(pos_a))
        emb_b.append(tuple(pos_b))
    edges = {tuple(emb_a[i][v] for i, v in enumerate(e)) for e in A.edges}
    edges |= {tuple(emb_b[i][v] for i, v in enumerate(e)) for e in B.edges}
    out = Amalgam(Hypergraph(tuple(sizes), frozenset(edges)), tuple(emb_a), tuple(emb_b))
    assert is_induced_embedding(A, out.result, out.embed_a), "A does not embed into the amalgam"
    assert is_induced_embedding(B, out.result, out.embed_b), "B does not embed into the amalgam"
    return out
