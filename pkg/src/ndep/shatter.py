"""Finite grid shattering, composed relations, bilinear witnesses, partite Ramsey
numbers and low-arity blind pairs.

A witnessed relation is a boolean array of shape (|W|, d_1, ..., d_n): entry
[w, i_1, ..., i_n] says whether witness w satisfies the formula on parameters
(i_1, ..., i_n). A grid picks a subset of indices in each part; it is shattered
when every subset of its cells is the exact trace of some witness.
"""
from __future__ import annotations

import base64
import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import linalg
from .algebra.gf import GaloisField, GaloisFieldElement
from .opg import Hypergraph

Grid = tuple  # per part, a tuple of indices


@dataclass(frozen=True, eq=False)
class WitnessedRelation:
    bits: np.ndarray                 # shape (|W|, d_1, ..., d_n), dtype bool
    ids: tuple = ()

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.ndim < 2:
            raise ValueError("bits need a witness axis and at least one part")
        object.__setattr__(self, "bits", b)
        ids = tuple(self.ids) if self.ids else tuple(str(i) for i in range(b.shape[0]))
        if len(ids) != b.shape[0]:
            raise ValueError(f"{len(ids)} ids for {b.shape[0]} witnesses")
        object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.bits.ndim - 1

    @property
    def parts(self) -> tuple[int, ...]:
        return self.bits.shape[1:]

    @property
    def num_witnesses(self) -> int:
        return self.bits.shape[0]

    def __eq__(self, other) -> bool:
        return (isinstance(other, WitnessedRelation) and self.ids == other.ids
                and self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits)))

    def to_json(self) -> dict:
        return {"parts": list(self.parts),
                "witnesses": [{"id": i, "bits": base64.b64encode(np.packbits(w.ravel()).tobytes()).decode()}
                              for i, w in zip(self.ids, self.bits)]}

    @classmethod
    def from_json(cls, obj: dict) -> WitnessedRelation:
        parts = tuple(obj["parts"])
        size = int(np.prod(parts))
        ws = []
        for w in obj["witnesses"]:
            raw = np.frombuffer(base64.b64decode(w["bits"]), dtype=np.uint8)
            flat = np.unpackbits(raw)
            if len(flat) < size:
                raise ValueError(f"witness {w['id']!r} has {len(flat)} bits, needs {size}")
            ws.append(flat[:size].astype(bool).reshape(parts))
        bits = np.array(ws, dtype=bool).reshape((len(ws),) + parts)
        return cls(bits, tuple(str(w["id"]) for w in obj["witnesses"]))

    def to_text(self) -> str:
        """``parts d1 ... dn`` then, per witness, ``witness <id>`` and rows of 0/1
        (the last part runs along each row)."""
        lines = ["parts " + " ".join(map(str, self.parts))]
        for i, w in zip(self.ids, self.bits):
            lines.append(f"witness {i}")
            for row in w.reshape(-1, self.parts[-1]):
                lines.append("".join("1" if x else "0" for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> WitnessedRelation:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
        if not lines or not lines[0].startswith("parts"):
            raise ValueError("text relation must start with 'parts d1 ... dn'")
        parts = tuple(int(x) for x in lines[0].split()[1:])
        nrows = int(np.prod(parts[:-1])) if len(parts) > 1 else 1
        ids, ws, i = [], [], 1
        while i < len(lines):
            if not lines[i].startswith("witness"):
                raise ValueError(f"expected 'witness <id>', got {lines[i]!r}")
            ids.append(lines[i].split(None, 1)[1] if len(lines[i].split()) > 1 else str(len(ids)))
            rows = lines[i + 1:i + 1 + nrows]
            if len(rows) != nrows or any(len(r) != parts[-1] or set(r) - {"0", "1"} for r in rows):
                raise ValueError(f"witness {ids[-1]!r}: expected {nrows} rows of {parts[-1]} bits")
            ws.append(np.array([[c == "1" for c in r] for r in rows]).reshape(parts))
            i += 1 + nrows
        return cls(np.array(ws, dtype=bool).reshape((len(ws),) + parts), tuple(ids))


def _check_grid(rel: WitnessedRelation, grid: Grid) -> tuple:
    if len(grid) != rel.n:
        raise ValueError(f"grid has {len(grid)} parts, relation has {rel.n}")
    out = []
    for sel, d in zip(grid, rel.parts):
        sel = tuple(int(i) for i in sel)
        if any(not 0 <= i < d for i in sel) or len(set(sel)) != len(sel):
            raise ValueError(f"grid part {sel} is not a subset of range({d})")
        out.append(sel)
    return tuple(out)


def traces(rel: WitnessedRelation, grid: Grid) -> set[bytes]:
    """Distinct traces on the grid, each a packed bitset in canonical C order."""
    grid = _check_grid(rel, grid)
    sub = rel.bits[np.ix_(range(rel.num_witnesses), *grid)].reshape(rel.num_witnesses, -1)
    packed = np.packbits(sub, axis=1)
    return {row.tobytes() for row in packed}


def shatters(rel: WitnessedRelation, grid: Grid) -> bool:
    grid = _check_grid(rel, grid)
    if rel.num_witnesses == 0:
        return False
    cells = int(np.prod([len(s) for s in grid]))
    if cells >= 63 or rel.num_witnesses < (1 << cells):
        return False
    return len(traces(rel, grid)) == 1 << cells


def shatters_naive(rel: WitnessedRelation, grid: Grid) -> bool:
    """Oracle: for each subset of cells, look for a witness with exactly that trace."""
    grid = _check_grid(rel, grid)
    cells = list(itertools.product(*grid))
    if rel.num_witnesses == 0:
        return False
    for mask in range(1 << len(cells)):
        want = [bool(mask >> c & 1) for c in range(len(cells))]
        if not any(all(bool(w[cell]) == x for cell, x in zip(cells, want)) for w in rel.bits):
            return False
    return True


@dataclass(frozen=True)
class MaxGrid:
    side: int
    grid: Grid | None      # a witnessing side^n grid (None when side = 0)

    def to_json(self) -> dict:
        return {"side": self.side, "grid": None if self.grid is None else [list(g) for g in self.grid]}


def _grids(caps: Sequence[int], d: int):
    return itertools.product(*(itertools.combinations(range(c), d) for c in caps))


def max_shattered_grid(rel: WitnessedRelation, caps: Sequence[int] | None = None) -> MaxGrid:
    """Largest d such that some d x ... x d grid inside the caps is shattered.

    Grids are visited in lexicographic order. Side d + 1 is only tried from
    grids containing a shattered side-d grid, since sub-grids of shattered
    grids are shattered; sides with 2^(d^n) > |W| are never tried.
    """
    caps = tuple(rel.parts) if caps is None else tuple(min(c, d) for c, d in zip(caps, rel.parts))
    if len(caps) != rel.n:
        raise ValueError("one cap per part")
    best = MaxGrid(0, None)
    shattered: set = set()
    d = 1
    while d <= min(caps) and (1 << d ** rel.n) <= rel.num_witnesses:
        found = []
        for g in _grids(caps, d):
            if d > 1 and not _has_shattered_subgrid(g, shattered):
                continue
            if shatters(rel, g):
                found.append(g)
        if not found:
            break
        best = MaxGrid(d, found[0])
        shattered = set(found)
        d += 1
    return best


def _has_shattered_subgrid(g: Grid, shattered: set) -> bool:
    # drop one index from every part
    return any(tuple(sub) in shattered
               for sub in itertools.product(*(itertools.combinations(s, len(s) - 1) for s in g)))


def max_shattered_grid_naive(rel: WitnessedRelation, caps: Sequence[int] | None = None) -> int:
    """Oracle: every side and every grid, decided by the naive subset search."""
    caps = tuple(rel.parts) if caps is None else tuple(min(c, d) for c, d in zip(caps, rel.parts))
    best = 0
    for d in range(1, min(caps) + 1):
        if any(shatters_naive(rel, g) for g in _grids(caps, d)):
            best = d
    return best


# --- composition ----------------------------------------------------------------

COORDINATE_PAIRS = ((1, 2), (1, 3), (2, 3))


def compose_relation(R: np.ndarray, coords: Sequence[tuple[int, int]], tables: Sequence[np.ndarray]) -> WitnessedRelation:
    """psi(y1; y2, y3) = R(f_1(y_s1, y_t1), ..., f_d(y_sd, y_td)) over a finite set M = range(|M|).

    ``R`` is a boolean array over M^d, ``coords`` picks the argument pair of each f_i
    from (1,2), (1,3), (2,3), and ``tables[i]`` is the |M| x |M| value table of f_i.
    """
    R = np.asarray(R, dtype=bool)
    d = R.ndim
    if len(coords) != d or len(tables) != d:
        raise ValueError(f"R has arity {d} but got {len(coords)} coordinates and {len(tables)} functions")
    size = R.shape[0]
    if any(s != size for s in R.shape):
        raise ValueError("R must be a cube over one set M")
    Y = np.indices((size, size, size))
    args = []
    for (s, t), tab in zip(coords, tables):
        if (s, t) not in COORDINATE_PAIRS:
            raise ValueError(f"coordinate pair {(s, t)} is not one of {COORDINATE_PAIRS}")
        tab = np.asarray(tab)
        if tab.shape != (size, size) or tab.min() < 0 or tab.max() >= size:
            raise ValueError("function tables must be total maps M x M -> M")
        args.append(tab[Y[s - 1], Y[t - 1]])
    return WitnessedRelation(R[tuple(args)])


def gf_tables(F: GaloisField) -> tuple[np.ndarray, np.ndarray]:
    """Addition and multiplication tables of F on the integer encoding."""
    q = len(F)
    idx = range(q)
    add = np.array([[F.add(a, b) for b in idx] for a in idx])
    mul = np.array([[F.mul(a, b) for b in idx] for a in idx])
    return add, mul


# --- bilinear forms -------------------------------------------------------------

class DegenerateFormError(ValueError):
    pass


@dataclass(frozen=True)
class BilinearSpace:
    field: GaloisField
    gram: tuple            # rows of field elements
    kind: str              # "symmetric" or "alternating"

    def __post_init__(self):
        g = tuple(tuple(self.field(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        m = len(g)
        if m == 0 or any(len(r) != m for r in g):
            raise ValueError("Gram matrix must be square and nonempty")
        if self.kind == "symmetric":
            ok = all(g[i][j] == g[j][i] for i in range(m) for j in range(m))
        elif self.kind == "alternating":
            ok = all(g[i][i].is_zero() and g[i][j] == -g[j][i] for i in range(m) for j in range(m))
        else:
            raise ValueError(f"unknown form type {self.kind!r}")
        if not ok:
            raise ValueError(f"Gram matrix is not {self.kind}")
        if linalg.det([list(r) for r in g]).is_zero():
            raise DegenerateFormError("Gram matrix is degenerate")

    @property
    def dim(self) -> int:
        return len(self.gram)

    def pair(self, x: Sequence, y: Sequence) -> GaloisFieldElement:
        acc = self.field.zero()
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                acc = acc + xi * self.gram[i][j] * yj
        return acc


def identity_space(F: GaloisField, m: int) -> BilinearSpace:
    return BilinearSpace(F, [[F.one() if i == j else F.zero() for j in range(m)] for i in range(m)], "symmetric")


def symplectic_space(F: GaloisField, half: int) -> BilinearSpace:
    """Standard alternating form on F^(2*half) with Gram [[0, I], [-I, 0]]."""
    m = 2 * half
    g = [[F.zero()] * m for _ in range(m)]
    for i in range(half):
        g[i][half + i] = F.one()
        g[half + i][i] = -F.one()
    return BilinearSpace(F, g, "alternating")


def bilinear_encode(space: BilinearSpace, C: Sequence[Sequence]) -> tuple[list, list]:
    """a_i = e_i and b_j solving G b_j = (C_0j, ..., C_(d-1)j, 0, ..., 0), so [a_i, b_j] = C_ij."""
    F = space.field
    d = len(C)
    if d > space.dim:
        raise ValueError(f"d = {d} exceeds the dimension {space.dim}")
    if any(len(r) != d for r in C):
        raise ValueError("C must be d x d")
    m = space.dim
    a = [[F.one() if k == i else F.zero() for k in range(m)] for i in range(d)]
    G = [list(r) for r in space.gram]
    b = []
    for j in range(d):
        rhs = [F(C[i][j]) for i in range(d)] + [F.zero()] * (m - d)
        b.append(linalg.solve(G, rhs))
    for i in range(d):
        for j in range(d):
            if space.pair(a[i], b[j]) != F(C[i][j]):
                raise AssertionError(f"[a_{i}, b_{j}] != C_{i}{j}")
    return a, b


@dataclass
class BilinearDemo:
    d: int
    C: list
    distinct: bool
    encoded: bool
    shattered: bool

    @property
    def ok(self) -> bool:
        return self.distinct and self.encoded and self.shattered

    def to_json(self) -> dict:
        return {"d": self.d, "C": [[str(x) for x in r] for r in self.C], "distinct": self.distinct,
                "encoded": self.encoded, "shattered": self.shattered}


def bilinear_shatter_demo(space: BilinearSpace, d: int) -> BilinearDemo:
    """Encode a d x d matrix of pairwise distinct field elements and check that the
    witnesses "[y, z] in S", for all subsets S of K, shatter the d x d grid (a, b)."""
    F = space.field
    q = len(F)
    if d * d > q:
        raise ValueError(f"d^2 = {d * d} distinct entries need |K| >= {d * d}, got {q}")
    elems = F.elements()
    C = [[elems[i * d + j] for j in range(d)] for i in range(d)]
    a, b = bilinear_encode(space, C)
    values = np.array([[space.pair(a[i], b[j]).value for j in range(d)] for i in range(d)])
    encoded = all(values[i, j] == C[i][j].value for i in range(d) for j in range(d))
    distinct = len(set(values.ravel().tolist())) == d * d
    # witness S (a bitmask over K) holds on (i, j) iff [a_i, b_j] in S
    masks = np.arange(1 << q, dtype=np.int64)
    bits = (masks[:, None, None] >> values[None, :, :]) & 1
    rel = WitnessedRelation(bits.astype(bool))
    shattered = shatters(rel, (tuple(range(d)), tuple(range(d))))
    return BilinearDemo(d, C, distinct, encoded, shattered)


# --- partite Ramsey ---------------------------------------------------------------

class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, lower: int, upper: int | None):
        self.lower = lower
        self.upper = upper
        super().__init__(f"{message} (verified bounds: {lower} <= R" + (f" <= {upper})" if upper else ")"))


def has_monochromatic_box(col: np.ndarray, l: int, colors: int) -> bool:
    """Is there c and l-subsets s_0, ..., s_(n-1) with col constant c on their product?"""
    n = col.ndim
    R = col.shape[0] if n else 0
    if l == 0:
        return True
    if R < l:
        return False
    for c in range(colors):
        mask = col == c
        for heads in itertools.product(*(itertools.combinations(range(R), l) for _ in range(n - 1))):
            block = mask[np.ix_(*heads, range(R))] if heads else mask
            full = block.reshape(-1, R).all(axis=0)
            if int(full.sum()) >= l:
                return True
    return False


def has_monochromatic_box_naive(col: np.ndarray, l: int) -> bool:
    """Oracle: every choice of l-subsets on every axis."""
    R = col.shape[0]
    for boxes in itertools.product(*(itertools.combinations(range(R), l) for _ in range(col.ndim))):
        if len({int(col[c]) for c in itertools.product(*boxes)}) <= 1:
            return True
    return False


def _canonical_colorings(R: int, n: int, m: int):
    """Colorings of [R]^n up to permuting axis 0 and permuting colours.

    Axis-0 slices are generated as a non-decreasing sequence; a colouring is kept
    only if no colour permutation followed by re-sorting gives a smaller one.
    """
    slice_size = R ** (n - 1)
    slices = list(itertools.product(range(m), repeat=slice_size))
    perms = list(itertools.permutations(range(m)))[1:]
    for choice in itertools.combinations_with_replacement(range(len(slices)), R):
        rows = [slices[i] for i in choice]
        key = tuple(rows)
        if any(tuple(sorted(tuple(p[x] for x in r) for r in rows)) < key for p in perms):
            continue
        yield np.array(rows, dtype=np.int64).reshape((R,) * n)


@dataclass(frozen=True)
class RamseyResult:
    l: int
    m: int
    n: int
    R: int
    checked: int                     # canonical colourings of R^n verified
    bad_coloring: np.ndarray         # colouring of (R-1)^n without a monochromatic box

    def to_json(self) -> dict:
        return {"l": self.l, "m": self.m, "n": self.n, "R": self.R, "checked": self.checked,
                "bad_coloring": self.bad_coloring.tolist()}


def ramsey_partite(l: int, m: int, n: int, budget: int = 1_000_000) -> RamseyResult:
    """Least R such that every m-colouring of [R]^n has l-subsets s_0, ..., s_(n-1)
    with a constant colour on s_0 x ... x s_(n-1)."""
    if l < 1 or m < 1 or n < 1:
        raise ValueError("l, m and n must be >= 1")
    spent = 0
    R = l
    bad = np.zeros((l - 1,) * n, dtype=np.int64)   # too small to hold any l-subset
    while True:
        checked = 0
        counterexample = None
        for col in _canonical_colorings(R, n, m):
            spent += 1
            checked += 1
            if spent > budget:
                raise BudgetExceeded(f"budget of {budget} colourings exhausted at R = {R}", R, None)
            if not has_monochromatic_box(col, l, m):
                counterexample = col
                break
        if counterexample is None:
            return RamseyResult(l, m, n, R, checked, bad)
        bad = counterexample
        R += 1


def verify_ramsey(res: RamseyResult) -> tuple[bool, bool]:
    """(every colouring of R^n has a box, the bad colouring has none); exhaustive without pruning."""
    upper = all(has_monochromatic_box_naive(np.array(c).reshape((res.R,) * res.n), res.l)
                for c in itertools.product(range(res.m), repeat=res.R ** res.n))
    lower = res.bad_coloring.size == 0 or not has_monochromatic_box_naive(res.bad_coloring, res.l)
    if res.R - 1 < res.l:
        lower = True
    return upper, lower


# --- low-arity blind pairs --------------------------------------------------------

BinaryRelation = frozenset  # of ordered pairs of global vertex indices


def binary_pattern(H: Hypergraph, relations: Sequence[BinaryRelation], tup: tuple) -> tuple:
    """Quantifier-free binary-atom pattern of a cross-tuple: order, part membership,
    equality and every relation on every ordered pair of coordinates."""
    g = [H.global_index(i, v) for i, v in enumerate(tup)]
    n = len(g)
    atoms = []
    for i in range(n):
        atoms.append(i)               # part predicate P_i(x_i)
        for j in range(n):
            atoms.append((g[i] < g[j], g[i] == g[j]))
            atoms.extend((g[i], g[j]) in rel for rel in relations)
    return tuple(atoms)


def find_lowarity_blind_pair(H: Hypergraph, relations: Sequence[BinaryRelation]) -> tuple | None:
    """Lexicographically least (g, h) of cross-tuples with equal binary patterns,
    g an edge and h a non-edge."""
    first_edge: dict = {}
    first_non: dict = {}
    for tup in H.cross_tuples():
        pat = binary_pattern(H, relations, tup)
        (first_edge if H.has_edge(tup) else first_non).setdefault(pat, tup)
    pairs = [(g, first_non[p]) for p, g in first_edge.items() if p in first_non]
    return min(pairs) if pairs else None


def verify_blind_pair(H: Hypergraph, relations: Sequence[BinaryRelation], pair) -> bool:
    g, h = pair
    return (binary_pattern(H, relations, g) == binary_pattern(H, relations, h)
            and H.has_edge(g) and not H.has_edge(h))
