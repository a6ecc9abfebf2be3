"""Dense two-phase primal simplex over ``Fraction`` with Bland's rule.

Solves ``min c.x  s.t.  A x = b, x >= 0``. Instances here are tiny
(tens of rows), so a dense tableau is the simplest correct choice.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

_ZERO = Fraction(0)


class LPResult(NamedTuple):
    feasible: bool
    value: Optional[Fraction]
    x: Optional[tuple[Fraction, ...]]


def _pivot(tab: list[list[Fraction]], obj: list[Fraction], r: int, c: int) -> None:
    row = tab[r]
    piv = row[c]
    if piv != 1:
        row[:] = [v / piv for v in row]
    nz = [(j, v) for j, v in enumerate(row) if v]
    for k, other in enumerate(tab):
        if k != r:
            f = other[c]
            if f:
                for j, v in nz:
                    other[j] -= f * v
    f = obj[c]
    if f:
        for j, v in nz:
            obj[j] -= f * v


def _bland(tab, obj, basis, allowed: int) -> bool:
    """Minimise ``obj`` over the current tableau. Returns False if unbounded.

    ``obj`` holds reduced costs in columns ``0..allowed-1`` and minus the
    objective value in the last column.
    """
    while True:
        entering = next((j for j in range(allowed) if obj[j] < 0), None)
        if entering is None:
            return True
        best = None
        for i, row in enumerate(tab):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        leave = best[1]
        _pivot(tab, obj, leave, entering)
        basis[leave] = entering


def solve(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Exact minimum of ``c.x`` subject to ``A x = b``, ``x >= 0``."""
    m, n = len(A), len(c)
    tab = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row, rhs = [-v for v in row], -rhs
        art = [_ZERO] * m
        art[i] = Fraction(1)
        tab.append(row + art + [rhs])
    basis = list(range(n, n + m))

    # phase 1: minimise the sum of artificials
    obj = [_ZERO] * (n + m + 1)
    for row in tab:
        for j in range(n):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    _bland(tab, obj, basis, n)
    if obj[-1] != 0:
        return LPResult(False, None, None)

    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is None:
                del tab[i], basis[i]
                continue
            _pivot(tab, obj, i, col)
            basis[i] = col
        i += 1
    tab = [row[:n] + row[-1:] for row in tab]

    obj = [Fraction(v) for v in c] + [_ZERO]
    for i, row in enumerate(tab):
        f = obj[basis[i]]
        if f:
            for j, v in enumerate(row):
                obj[j] -= f * v
    if not _bland(tab, obj, basis, n):
        raise ArithmeticError("unbounded linear program")
    x = [_ZERO] * n
    for i, row in enumerate(tab):
        x[basis[i]] = row[-1]
    return LPResult(True, -obj[-1], tuple(x))
