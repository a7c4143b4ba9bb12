"""Exact linear algebra.

Two flavours: generic dense matrices over any exact element type exposing
``is_zero()``, ``zero()``, ``one()`` and field operations (Galois field
elements, truncated series); and integer matrices over the prime field F_p
held as numpy arrays, used for subspace computations.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np


class SingularMatrixError(ArithmeticError):
    """No nonzero pivot was found.

    ``uncertified`` is True when some candidate pivot was zero only up to a
    finite precision, so more precision might still reveal a pivot.
    """

    def __init__(self, message: str, uncertified: bool = False):
        super().__init__(message)
        self.uncertified = uncertified


Matrix = list[list]


def identity_like(x, n: int) -> Matrix:
    zero, one = x.zero(), x.one()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A: Matrix, v: Sequence) -> list:
    return [sum((A[i][j] * v[j] for j in range(1, len(v))), A[i][0] * v[0]) for i in range(len(A))]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def _pivot_row(M: Matrix, col: int, start: int) -> int:
    for r in range(start, len(M)):
        if not M[r][col].is_zero():
            return r
    vague = any(not getattr(M[r][col], "is_exact", True) for r in range(start, len(M)))
    raise SingularMatrixError(f"no nonzero pivot in column {col}", uncertified=vague)


def det(A: Matrix):
    """Determinant by Gaussian elimination (first nonzero pivot)."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    M = [list(r) for r in A]
    result = M[0][0].one()
    for c in range(n):
        try:
            r = _pivot_row(M, c, c)
        except SingularMatrixError as exc:
            if exc.uncertified:
                raise
            return M[0][0].zero()
        if r != c:
            M[c], M[r] = M[r], M[c]
            result = -result
        piv = M[c][c]
        result = result * piv
        inv = piv.one() / piv
        for i in range(c + 1, n):
            if M[i][c].is_zero():
                continue
            f = M[i][c] * inv
            M[i] = [M[i][j] - f * M[c][j] if j >= c else M[i][j] for j in range(n)]
    return result


def inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises :class:`SingularMatrixError`."""
    n = len(A)
    M = [list(A[i]) + identity_like(A[0][0], n)[i] for i in range(n)]
    for c in range(n):
        r = _pivot_row(M, c, c)
        M[c], M[r] = M[r], M[c]
        inv = M[c][c].one() / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i == c or M[i][c].is_zero():
                continue
            f = M[i][c]
            M[i] = [M[i][j] - f * M[c][j] for j in range(2 * n)]
    return [row[n:] for row in M]


def solve(A: Matrix, b: Sequence) -> list:
    """Solve A x = b for square nonsingular A."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        r = _pivot_row(M, c, c)
        M[c], M[r] = M[r], M[c]
        inv = M[c][c].one() / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i == c or M[i][c].is_zero():
                continue
            f = M[i][c]
            M[i] = [M[i][j] - f * M[c][j] for j in range(n + 1)]
    return [M[i][n] for i in range(n)]


# --- matrices over F_p ------------------------------------------------------

def fp_rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; returns (R, pivot columns). Zero rows are dropped."""
    M = np.array(A, dtype=np.int64) % p
    if M.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        others = np.nonzero(M[:, c])[0]
        for i in others:
            if i != r:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def fp_rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(fp_rref(A, p)[1])


def fp_nullspace(A, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        n = ncols if ncols is not None else (A.shape[1] if A.ndim == 2 else 0)
        return np.eye(n, dtype=np.int64)
    R, piv = fp_rref(A, p)
    n = A.shape[1]
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, c in enumerate(piv):
            basis[k, c] = (-R[r, f]) % p
    return basis


def fp_solve(A, b, p: int) -> np.ndarray | None:
    """One solution of A x = b over F_p, or None if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    R, piv = fp_rref(np.hstack([A, b]), p)
    n = A.shape[1]
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, n]
    return x
