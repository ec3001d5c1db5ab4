"""Exact linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`.  Nothing here knows
about Grassmann algebras; the callers expand their elements into rational
coordinates first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(m: Sequence[Sequence[object]]) -> tuple[Matrix, list[int]]:
    """Nonzero rows of the reduced row echelon form, and the pivot columns."""
    a = to_matrix(m)
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: Sequence[Sequence[object]]) -> int:
    return len(rref(m)[1]) if m else 0


def nullspace(m: Sequence[Sequence[object]], n_cols: int | None = None) -> Matrix:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    if n_cols is None:
        n_cols = len(m[0]) if m else 0
    if not m:
        return [[Fraction(int(i == j)) for i in range(n_cols)] for j in range(n_cols)]
    red, pivots = rref(m)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(m: Sequence[Sequence[object]], b: Sequence[object],
          n_cols: int | None = None) -> list[Fraction] | None:
    """One solution of ``m x = b`` (free variables set to zero), or None."""
    if n_cols is None:
        n_cols = len(m[0]) if m else 0
    if not m:
        return [Fraction(0)] * n_cols
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, pivots = rref(aug)
    if pivots and pivots[-1] == n_cols:
        return None
    x = [Fraction(0)] * n_cols
    for row, p in zip(red, pivots):
        x[p] = row[n_cols]
    return x


def row_space(vectors: Sequence[Sequence[object]]) -> Matrix:
    """Canonical (reduced) basis of the span of ``vectors``."""
    vectors = [v for v in vectors if any(x != 0 for x in v)]
    if not vectors:
        return []
    return rref(vectors)[0]


def same_span(a: Sequence[Sequence[object]], b: Sequence[Sequence[object]]) -> bool:
    return row_space(a) == row_space(b)


def in_span(v: Sequence[object], vectors: Sequence[Sequence[object]]) -> bool:
    if not any(x != 0 for x in v):
        return True
    return rank(list(vectors) + [list(v)]) == rank(vectors) if vectors else False


def complement_columns(vectors: Sequence[Sequence[object]], n_cols: int) -> list[int]:
    """Standard basis indices completing the span of ``vectors`` to everything."""
    if not vectors:
        return list(range(n_cols))
    _, pivots = rref(vectors)
    return [c for c in range(n_cols) if c not in pivots]
