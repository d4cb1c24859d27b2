"""Dense two-phase simplex over exact rationals (Bland's rule).

Sized for the small programs the bounds module builds (at most a few hundred
columns); every pivot is exact, so optimal values come back as Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[tuple[Fraction, ...]] = None


def _pivot(rows, obj, basis, r, c):
    pivot_row = rows[r]
    inv = 1 / pivot_row[c]
    if inv != 1:
        rows[r] = pivot_row = [v * inv for v in pivot_row]
    for i, row in enumerate(rows):
        f = row[c]
        if i != r and f:
            rows[i] = [a - f * b for a, b in zip(row, pivot_row)]
    f = obj[c]
    if f:
        obj[:] = [a - f * b for a, b in zip(obj, pivot_row)]
    basis[r] = c


def _run(rows, obj, basis, allowed) -> str:
    """Minimise in place. ``allowed`` limits which columns may enter."""
    while True:
        entering = next((j for j in allowed if obj[j] < 0), None)
        if entering is None:
            return OPTIMAL
        best = None
        for i, row in enumerate(rows):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        _pivot(rows, obj, basis, best[1], entering)


def linprog_exact(c: Sequence, A_ub: Sequence = (), b_ub: Sequence = (),
                  A_eq: Sequence = (), b_eq: Sequence = (), maximize: bool = False) -> LPResult:
    """Optimise ``c·x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    n = len(c)
    m_ub, m_eq = len(A_ub), len(A_eq)
    m = m_ub + m_eq
    n_slack = m_ub
    width = n + n_slack + m  # structural, slack, artificial

    rows = []
    for i in range(m):
        if i < m_ub:
            coeffs, rhs = A_ub[i], b_ub[i]
        else:
            coeffs, rhs = A_eq[i - m_ub], b_eq[i - m_ub]
        row = [Fraction(v) for v in coeffs] + [Fraction(0)] * (n_slack + m) + [Fraction(rhs)]
        if i < m_ub:
            row[n + i] = Fraction(1)
        if row[-1] < 0:
            row = [-v for v in row]
        row[n + n_slack + i] = Fraction(1)
        rows.append(row)
    basis = [n + n_slack + i for i in range(m)]

    # phase 1: minimise the sum of artificials
    obj = [Fraction(0)] * (width + 1)
    for i, row in enumerate(rows):
        for j in range(n + n_slack):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    _run(rows, obj, basis, range(n + n_slack))
    if obj[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificials out of the basis; drop redundant rows
    keep = []
    for i in range(len(rows)):
        if basis[i] >= n + n_slack:
            col = next((j for j in range(n + n_slack) if rows[i][j] != 0), None)
            if col is None:
                continue
            _pivot(rows, obj, basis, i, col)
        keep.append(i)
    rows = [rows[i] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2
    sign = -1 if maximize else 1
    cost = [sign * Fraction(v) for v in c] + [Fraction(0)] * (width - n)
    obj = cost + [Fraction(0)]
    for i, row in enumerate(rows):
        cb = cost[basis[i]]
        if cb:
            obj = [a - cb * b for a, b in zip(obj, row)]
    status = _run(rows, obj, basis, range(n + n_slack))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = rows[i][-1]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, tuple(x))
