"""Exact Gaussian elimination over Q, plus determinant/adjugate for
matrices with polynomial entries.

Matrices are lists of rows.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def rref(M):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    A = [[Fraction(v) for v in row] for row in M]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        if piv != 1:
            A[r] = [v / piv for v in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                Ai, Ar = A[i], A[r]
                A[i] = [a - f * b for a, b in zip(Ai, Ar)]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def nullspace(M, ncols: int | None = None):
    """Basis of {v : M v = 0}, one vector per free column (ascending)."""
    if not M:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    ncols = len(M[0])
    R, piv = rref(M)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def row_space(vectors):
    """Reduced basis of the span of ``vectors``."""
    if not vectors:
        return []
    R, _ = rref(vectors)
    return R


def solve(M, b):
    """One solution of M x = b, or None if inconsistent."""
    ncols = len(M[0]) if M else 0
    aug = [list(row) + [bv] for row, bv in zip(M, b)]
    R, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, piv):
        x[pc] = row[-1]
    return x


def transpose(M):
    return [list(col) for col in zip(*M)]


def matvec(M, v):
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M]


def in_span(basis, v) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank(basis + [v]) == rank(basis)


def complement_basis(sub, candidates):
    """Greedily pick candidates extending span(sub); deterministic order."""
    chosen = []
    current = [list(v) for v in sub]
    r = rank(current) if current else 0
    for v in candidates:
        trial = current + [list(v)]
        rt = rank(trial)
        if rt > r:
            chosen.append(list(v))
            current = trial
            r = rt
    return chosen


def identity(n, one=Fraction(1), zero=Fraction(0)):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def frac_inverse(M):
    n = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


# -- polynomial matrices -------------------------------------------------------


def det(M):
    """Determinant by cofactor expansion with memoized minors (n <= 6 intended)."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")

    @lru_cache(maxsize=None)
    def minor(rows: tuple, cols: tuple):
        if len(rows) == 1:
            return M[rows[0]][cols[0]]
        r0 = rows[0]
        rest = rows[1:]
        acc = None
        for k, c in enumerate(cols):
            a = M[r0][c]
            if not a:
                continue
            sub = minor(rest, cols[:k] + cols[k + 1:])
            if not sub:
                continue
            term = a * sub
            if k % 2:
                term = -term
            acc = term if acc is None else acc + term
        return acc if acc is not None else M[0][0] * 0

    return minor(tuple(range(n)), tuple(range(n)))


def adjugate(M):
    n = len(M)
    if n == 1:
        return [[M[0][0] * 0 + 1]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [[M[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            d = det(sub)
            out[j][i] = d if (i + j) % 2 == 0 else -d
    return out
