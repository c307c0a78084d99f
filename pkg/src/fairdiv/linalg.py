"""Exact linear algebra over rationals.

Everything in this module works on fractions.Fraction (or int) entries;
there is no floating point anywhere in the computational paths.
"""
from __future__ import annotations

import math
from fractions import Fraction


def gauss_eliminate(aug):
    """Row-reduce an augmented matrix in place (last column = rhs).

    Returns (matrix, pivot_columns). The rhs column is never chosen as a
    pivot, so the rank of the coefficient part is len(pivot_columns).
    """
    if not aug:
        return aug, []
    rows, cols = len(aug), len(aug[0])
    pivots = []
    r = 0
    for c in range(cols - 1):
        pr = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = aug[r][c]
        aug[r] = [v / inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return aug, pivots


def solve_unique(a, b):
    """Solve A x = b exactly; return the solution iff it is unique.

    Returns None when the system is inconsistent or underdetermined.
    A may be rectangular (more rows than unknowns).
    """
    ncols = len(a[0]) if a else 0
    aug = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    aug, pivots = gauss_eliminate(aug)
    rank = len(pivots)
    for i in range(rank, len(aug)):
        if aug[i][-1] != 0:
            return None
    if rank < ncols:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][-1]
    return x


def matrix_rank(a):
    """Rank of a rational matrix."""
    if not a:
        return 0
    aug = [[Fraction(v) for v in row] + [Fraction(0)] for row in a]
    _, pivots = gauss_eliminate(aug)
    return len(pivots)


def system_consistent(a, b):
    """True iff A x = b has at least one solution."""
    aug = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    aug, pivots = gauss_eliminate(aug)
    return all(aug[i][-1] == 0 for i in range(len(pivots), len(aug)))


def det_bareiss(mat):
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        pk = m[k]
        for i in range(k + 1, n):
            mi = m[i]
            mik = mi[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pk[k] - mik * pk[j]) // prev
            mi[k] = 0
        prev = pk[k]
    return sign * m[-1][-1]


def det_rational(mat):
    """Exact determinant of a square matrix with Fraction entries."""
    if not mat:
        return Fraction(1)
    scale = 1
    imat = []
    for row in mat:
        l = math.lcm(*(Fraction(v).denominator for v in row))
        scale *= l
        imat.append([int(Fraction(v) * l) for v in row])
    return Fraction(det_bareiss(imat), scale)
