"""Exact Gaussian elimination over Fractions."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are chosen left to right, first nonzero row wins, so the result is
    deterministic for a given row order.  Only the first ``ncols`` columns
    are eligible as pivots (the rest are carried along, e.g. right-hand sides).
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    width = len(m[0])
    ncols = width if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][col]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def integer_scaled(vec: Sequence[Fraction]) -> list[int]:
    """Scale to the smallest integer vector with first nonzero entry positive."""
    den = 1
    for x in vec:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    first = next((x for x in ints if x != 0), 0)
    if first < 0:
        ints = [-x for x in ints]
    return ints


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[int]]:
    """Integer basis of the right nullspace, one vector per free column in order."""
    if not rows:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    m, pivots = rref(rows, ncols)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row_idx, pcol in enumerate(pivots):
            vec[pcol] = -m[row_idx][free]
        basis.append(integer_scaled(vec))
    return basis
