"""Dense two-phase simplex in exact rational arithmetic.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with Bland's rule, so it cannot
cycle on degenerate vertices.  Entries may be ints or Fractions; floats
should be converted with ``Fraction(f)`` first to keep the pivots exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple


class InfeasibleError(ValueError):
    pass


class UnboundedError(ValueError):
    pass


def _pivot(tab: List[List[Fraction]], basis: List[int], row: int, col: int) -> None:
    prow = tab[row]
    piv = prow[col]
    if piv != 1:
        tab[row] = prow = [v / piv for v in prow]
    for i, r in enumerate(tab):
        if i != row:
            f = r[col]
            if f:
                tab[i] = [a - f * p for a, p in zip(r, prow)]
    basis[row] = col


def _run(tab, basis, allowed: int) -> None:
    """Iterate Bland pivots on ``tab``; the last row is the reduced cost row.

    Only columns ``< allowed`` may enter.
    """
    m = len(basis)
    while True:
        obj = tab[-1]
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                key = (tab[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise UnboundedError("objective is unbounded below")
        _pivot(tab, basis, best[1], col)


def simplex(c: Sequence, a: Sequence[Sequence], b: Sequence) -> Tuple[Fraction, List[Fraction]]:
    """Minimize ``c.x`` over ``{x >= 0 : a x = b}``.

    Returns ``(value, x)`` at an optimal basic feasible solution.
    """
    m = len(a)
    n = len(c)
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in a[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        rows.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]

    # phase 1: minimize the sum of artificials
    phase1 = [Fraction(0)] * (n + m + 1)
    for r in rows:
        for j in range(n):
            phase1[j] -= r[j]
        phase1[-1] -= r[-1]
    tab = rows + [phase1]
    _run(tab, basis, n)
    if tab[-1][-1] != 0:
        raise InfeasibleError("constraints admit no nonnegative solution")

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(basis):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, basis, i, col)
        i += 1

    # phase 2: reduced costs of the original objective
    cost = [Fraction(v) for v in c] + [Fraction(0)] * m
    obj = cost + [Fraction(0)]
    for i, bcol in enumerate(basis):
        f = cost[bcol]
        if f:
            obj = [o - f * t for o, t in zip(obj, tab[i])]
    tab[-1] = obj
    _run(tab, basis, n)

    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis):
        x[bcol] = tab[i][-1]
    value = sum((ci * xi for ci, xi in zip(cost, x)), Fraction(0))
    return value, x
