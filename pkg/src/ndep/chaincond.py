"""Chain conditions for families of subgroups of (F_{p^k}, +).

Subgroups are F_p-subspaces, stored by a reduced row-echelon basis over the
coordinate vectors of the field's polynomial basis. Intersections are computed
through annihilators: ann(H_1 cap H_2) = ann(H_1) + ann(H_2). Since dropping a
member can only enlarge an intersection, the two intersections agree exactly
when the spans of the annihilators have equal rank.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra.gf import GaloisField, GaloisFieldElement
from .algebra.linalg import fp_nullspace, fp_rank, fp_rref
from .algebra.maps import wp_apply


@dataclass(frozen=True, eq=False)
class SubspaceSubgroup:
    field: GaloisField
    basis: np.ndarray                      # rows in reduced row-echelon form
    _ann: np.ndarray = field(repr=False, default=None)
    _elements: frozenset = field(repr=False, default=None, compare=False)

    def __post_init__(self):
        p, k = self.field.p, self.field.k
        B = np.asarray(self.basis, dtype=np.int64).reshape(-1, k)
        R, _ = fp_rref(B, p) if B.size else (np.zeros((0, k), dtype=np.int64), [])
        object.__setattr__(self, "basis", R)
        object.__setattr__(self, "_ann", fp_nullspace(R, p, ncols=k) if R.size else np.eye(k, dtype=np.int64))

    @classmethod
    def span(cls, F: GaloisField, elements: Sequence[GaloisFieldElement]) -> SubspaceSubgroup:
        return cls(F, np.array([F.to_coeffs(F(x).value) for x in elements], dtype=np.int64).reshape(-1, F.k))

    @classmethod
    def whole(cls, F: GaloisField) -> SubspaceSubgroup:
        return cls(F, np.eye(F.k, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def annihilator(self) -> np.ndarray:
        """Rows h with h . x = 0 for every x in the subgroup."""
        return self._ann

    def contains(self, x: GaloisFieldElement) -> bool:
        v = np.array(self.field.to_coeffs(x.value), dtype=np.int64)
        return not np.any(self._ann @ v % self.field.p)

    def elements(self) -> frozenset[int]:
        """All members as integer encodings (p^dim of them)."""
        if self._elements is None:
            object.__setattr__(self, "_elements", frozenset(self._enumerate()))
        return self._elements

    def _enumerate(self) -> set[int]:
        F = self.field
        out = set()
        for coeffs in itertools.product(range(F.p), repeat=self.dim):
            v = np.zeros(F.k, dtype=np.int64)
            for c, row in zip(coeffs, self.basis):
                v = (v + c * row) % F.p
            out.add(F.from_coeffs([int(x) for x in v]))
        return out

    def intersect(self, other: SubspaceSubgroup) -> SubspaceSubgroup:
        return intersection(self.field, [self, other])

    def __eq__(self, other) -> bool:
        return (isinstance(other, SubspaceSubgroup) and self.field == other.field
                and np.array_equal(self.basis, other.basis))

    def __hash__(self) -> int:
        return hash((self.field, self.basis.tobytes()))


def intersection(F: GaloisField, groups: Sequence[SubspaceSubgroup]) -> SubspaceSubgroup:
    """Intersection of the groups; the empty intersection is the whole field."""
    if not groups:
        return SubspaceSubgroup.whole(F)
    ann = np.vstack([g.annihilator for g in groups])
    return SubspaceSubgroup(F, fp_nullspace(ann, F.p, ncols=F.k) if ann.size else np.eye(F.k, dtype=np.int64))


@functools.lru_cache(maxsize=4096)
def wp_image_subgroup(b: GaloisFieldElement) -> SubspaceSubgroup:
    """b * (x^p - x) over all x in the field: a subgroup of dimension k - 1."""
    if b.is_zero():
        raise ValueError("b must be nonzero")
    F = b.field
    images = [b * wp_apply(F.element(F.p ** i)) for i in range(F.k)]
    H = SubspaceSubgroup.span(F, images)
    assert H.dim == F.k - 1, "x^p - x should have kernel F_p"
    return H


Family = Callable[[tuple], SubspaceSubgroup]


def product_wp_family(params: tuple) -> SubspaceSubgroup:
    """eta -> b_{0,eta_0} * ... * b_{n-1,eta_{n-1}} * (x^p - x)(K)."""
    prod = params[0]
    for b in params[1:]:
        prod = prod * b
    return wp_image_subgroup(prod)


@dataclass
class FamilyArray:
    params: tuple                     # params[i][j] for i < n, j < d
    families: tuple                   # callables: n-tuple of parameters -> SubspaceSubgroup
    names: tuple = ()

    def __post_init__(self):
        self.params = tuple(tuple(row) for row in self.params)
        if not self.params or len({len(r) for r in self.params}) != 1 or not self.params[0]:
            raise ValueError("parameter array must be a nonempty n x d array")
        if any(x.is_zero() for row in self.params for x in row):
            raise ValueError("parameters must be nonzero")
        self.families = tuple(self.families)
        if not self.names:
            self.names = tuple(getattr(f, "__name__", f"family{t}") for t, f in enumerate(self.families))

    @property
    def n(self) -> int:
        return len(self.params)

    @property
    def d(self) -> int:
        return len(self.params[0])

    @property
    def field(self) -> GaloisField:
        return self.params[0][0].field

    def indices(self):
        return itertools.product(range(self.d), repeat=self.n)

    def subgroup(self, t: int, eta: tuple) -> SubspaceSubgroup:
        return self.families[t](tuple(self.params[i][e] for i, e in enumerate(eta)))

    def to_json(self) -> dict:
        F = self.field
        return {"n": self.n, "d": self.d, "families": list(self.names),
                "params": [[F.format(x.value) for x in row] for row in self.params]}


def find_redundant(fa: FamilyArray) -> tuple | None:
    """Lexicographically least nu with, for every family t,
    the intersection over all eta equal to the intersection over eta != nu."""
    etas = list(fa.indices())
    p = fa.field.p
    anns = [[fa.subgroup(t, eta).annihilator for eta in etas] for t in range(len(fa.families))]
    full = [fp_rank(np.vstack(a), p) for a in anns]
    for i, nu in enumerate(etas):
        ok = True
        for t, a in enumerate(anns):
            rest = a[:i] + a[i + 1:]
            r = fp_rank(np.vstack(rest), p) if rest else 0
            if r != full[t]:
                ok = False
                break
        if ok:
            return nu
    return None


def redundant_by_elements(fa: FamilyArray, nu: tuple) -> bool:
    """Oracle: compare the intersections as explicit element sets."""
    everything = set(range(len(fa.field)))
    for t in range(len(fa.families)):
        sets = {eta: fa.subgroup(t, eta).elements() for eta in fa.indices()}
        full = set.intersection(everything, *sets.values())
        rest = set.intersection(everything, *(s for eta, s in sets.items() if eta != nu))
        if full != rest:
            return False
    return True


def find_redundant_naive(fa: FamilyArray) -> tuple | None:
    for nu in fa.indices():
        if redundant_by_elements(fa, nu):
            return nu
    return None


# --- thresholds ---------------------------------------------------------------

class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    field: GaloisField
    n: int
    families: tuple
    names: tuple = ()


@dataclass
class Threshold:
    d: int
    trials: int
    failing: FamilyArray | None       # an array of width d - 1 without a redundant nu

    def to_json(self) -> dict:
        return {"d": self.d, "trials": self.trials,
                "failing_array": None if self.failing is None else self.failing.to_json()}


def baldwin_saxl_threshold(spec: FamilySpec, trials: int, seed: int, max_d: int = 8) -> Threshold:
    """Least d for which every sampled n x d parameter array has a redundant nu.

    An empirical estimate: arrays are drawn uniformly from the nonzero elements
    with a seeded generator, ``trials`` per width.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    F = spec.field
    nonzero = [x for x in F if not x.is_zero()]
    failing = None
    for d in range(1, max_d + 1):
        bad = None
        for _ in range(trials):
            params = [[rng.choice(nonzero) for _ in range(d)] for _ in range(spec.n)]
            fa = FamilyArray(params, spec.families, spec.names)
            if find_redundant(fa) is None:
                bad = fa
                break
        if bad is None:
            return Threshold(d, trials, failing)
        failing = bad
    raise BudgetExceeded(f"no width up to {max_d} passed all {trials} trials")
