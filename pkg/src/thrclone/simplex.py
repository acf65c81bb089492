"""Exact rational phase-one simplex for feasibility of ``A x >= b``.

Everything is carried out over exact rationals (``gmpy2.mpq`` when
available, else :class:`fractions.Fraction`); Bland's rule
prevents cycling on the heavily degenerate systems produced by point sets.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exceptions import ResourceError

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction


def find_feasible(
    A: Sequence[Sequence[int | Fraction]],
    b: Sequence[int | Fraction],
    max_pivots: int = 100_000,
) -> list[Fraction] | None:
    """Return some ``x`` (free variables) with ``A x >= b``, or ``None`` if none exists."""
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    # columns: x+ (n), x- (n), surplus (m), artificial (m), then rhs
    n_cols = 2 * n + 2 * m
    rows: list[list] = []
    for i, (a_row, rhs) in enumerate(zip(A, b)):
        if len(a_row) != n:
            raise ValueError("ragged constraint matrix")
        sign = -1 if rhs < 0 else 1
        row = [_Q(0)] * (n_cols + 1)
        for j, v in enumerate(a_row):
            v = _Q(v) * sign
            row[j] = v
            row[n + j] = -v
        row[2 * n + i] = _Q(-sign)
        row[2 * n + m + i] = _Q(1)
        row[-1] = _Q(rhs) * sign
        rows.append(row)
    basis = [2 * n + m + i for i in range(m)]

    # reduced costs of the phase-one objective (minimise the sum of artificials)
    cost = [_Q(0)] * (n_cols + 1)
    for row in rows:
        for j in range(n_cols + 1):
            cost[j] -= row[j]
    for i in range(m):
        cost[2 * n + m + i] = _Q(0)

    for _ in range(max_pivots):
        enter = next((j for j in range(n_cols) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # phase one is bounded below by zero
            raise AssertionError("unbounded phase-one problem")
        _pivot(rows, cost, leave, enter)
        basis[leave] = enter
    else:
        raise ResourceError(f"simplex exceeded {max_pivots} pivots")

    if -cost[-1] != 0:
        return None
    x = [_Q(0)] * (2 * n)
    for i, var in enumerate(basis):
        if var < 2 * n:
            x[var] = rows[i][-1]
    return [Fraction(int(v.numerator), int(v.denominator)) for v in (x[j] - x[n + j] for j in range(n))]


def _pivot(rows: list[list], cost: list, r: int, c: int) -> None:
    prow = rows[r]
    piv = prow[c]
    if piv != 1:
        rows[r] = prow = [v / piv for v in prow]
    nz = [j for j, v in enumerate(prow) if v != 0]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            for j in nz:
                row[j] -= f * prow[j]
    if cost[c] != 0:
        f = cost[c]
        for j in nz:
            cost[j] -= f * prow[j]
