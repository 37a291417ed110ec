"""Small exact linear algebra over the rational (or Gaussian-rational) field.

Everything works on lists of rows whose entries support exact +, -, *, /
and truthiness; no pivoting heuristics are needed since arithmetic is
exact.
"""

from __future__ import annotations

from typing import Sequence

from .polynomials import _exact_div
from .scalars import RAT


def rref(rows: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [_exact_div(x, pv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list:
    """Basis of the right kernel, one vector per free column."""
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("need ncols for an empty row list")
        ncols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [RAT(0)] * ncols
        vec[fc] = RAT(1)
        for rr, pc in enumerate(pivots):
            vec[pc] = -reduced[rr][fc]
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence):
    """One solution of rows * x = rhs, or None if inconsistent."""
    rows = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not rows:
        return []
    ncols = len(rows[0]) - 1
    reduced, pivots = rref(rows)
    if ncols in pivots:  # pivot in the augmented column
        return None
    x = [RAT(0)] * ncols
    for rr, pc in enumerate(pivots):
        x[pc] = reduced[rr][ncols]
    return x


def det(rows: Sequence[Sequence]):
    """Determinant by fraction-producing elimination (exact)."""
    m = [list(r) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    result = RAT(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return RAT(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        pv = m[c][c]
        result = result * pv
        inv_rows = [_exact_div(x, pv) for x in m[c]]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], inv_rows)]
    return sign * result
