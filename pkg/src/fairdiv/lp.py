"""Exact two-phase simplex over rationals.

Dense tableau, Bland's pivoting rule (termination guaranteed, fully
deterministic). Instances in this package are tiny, so exactness is worth
far more than speed: the certificates downstream must verify by equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

LE = "<="
GE = ">="
EQ = "=="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _reduced_costs(tab, basis, costs, ncols):
    red = []
    for j in range(ncols):
        rj = costs[j]
        for i, bi in enumerate(basis):
            cb = costs[bi]
            if cb:
                rj -= cb * tab[i][j]
        red.append(rj)
    return red


def _pivot(tab, basis, pr, pc):
    piv = tab[pr][pc]
    tab[pr] = [v / piv for v in tab[pr]]
    prow = tab[pr]
    for i in range(len(tab)):
        if i != pr and tab[i][pc] != 0:
            f = tab[i][pc]
            tab[i] = [a - f * b for a, b in zip(tab[i], prow)]
    basis[pr] = pc


def _simplex(tab, basis, costs, ncols):
    """Maximize costs.x on the tableau; returns OPTIMAL or UNBOUNDED."""
    while True:
        red = _reduced_costs(tab, basis, costs, ncols)
        pc = next((j for j in range(ncols) if j not in basis and red[j] > 0), None)
        if pc is None:
            return OPTIMAL
        pr = None
        best = None
        for i in range(len(tab)):
            a = tab[i][pc]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[pr]):
                    best = ratio
                    pr = i
        if pr is None:
            return UNBOUNDED
        _pivot(tab, basis, pr, pc)


def solve_lp(objective, rows, senses, rhs, maximize=True):
    """Solve max/min objective.x subject to rows[i].x (senses[i]) rhs[i], x >= 0.

    All data may be ints or Fractions; the result is exact.
    """
    nvars = len(objective)
    obj = [Fraction(v) for v in objective]
    if not maximize:
        obj = [-v for v in obj]

    arows = []
    asenses = []
    arhs = []
    for row, s, bv in zip(rows, senses, rhs):
        row = [Fraction(v) for v in row]
        bv = Fraction(bv)
        if bv < 0:
            row = [-v for v in row]
            bv = -bv
            s = {LE: GE, GE: LE, EQ: EQ}[s]
        arows.append(row)
        asenses.append(s)
        arhs.append(bv)

    m = len(arows)
    nslack = sum(1 for s in asenses if s in (LE, GE))
    nart = sum(1 for s in asenses if s in (GE, EQ))
    ncols = nvars + nslack + nart

    tab = []
    basis = []
    si = nvars
    ai = nvars + nslack
    art_cols = []
    for row, s, bv in zip(arows, asenses, arhs):
        full = row + [Fraction(0)] * (nslack + nart) + [bv]
        if s == LE:
            full[si] = Fraction(1)
            basis.append(si)
            si += 1
        elif s == GE:
            full[si] = Fraction(-1)
            si += 1
            full[ai] = Fraction(1)
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        else:
            full[ai] = Fraction(1)
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        tab.append(full)

    if art_cols:
        costs1 = [Fraction(0)] * ncols
        for c in art_cols:
            costs1[c] = Fraction(-1)
        status = _simplex(tab, basis, costs1, ncols)
        assert status == OPTIMAL  # phase 1 is always bounded
        value1 = sum(costs1[b] * tab[i][-1] for i, b in enumerate(basis))
        if value1 != 0:
            return LPResult(INFEASIBLE)
        # Drive remaining artificials out of the basis; drop redundant rows.
        art_set = set(art_cols)
        for i in list(range(len(tab)))[::-1]:
            if basis[i] in art_set:
                pc = next(
                    (j for j in range(nvars + nslack) if tab[i][j] != 0), None
                )
                if pc is None:
                    del tab[i]
                    del basis[i]
                else:
                    _pivot(tab, basis, i, pc)
        # Remove artificial columns (they sit at the end, so the indices of
        # genuine columns are unchanged).
        keep = nvars + nslack
        tab = [row[:keep] + [row[-1]] for row in tab]
        ncols = keep

    costs2 = obj + [Fraction(0)] * (ncols - nvars)
    status = _simplex(tab, basis, costs2, ncols)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = tab[i][-1]
    value = sum(o * v for o, v in zip(obj, x))
    if not maximize:
        value = -value
    return LPResult(OPTIMAL, value, tuple(x))
