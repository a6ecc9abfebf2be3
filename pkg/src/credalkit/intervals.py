"""Probability intervals and their outer approximations by possibility
distributions, clouds and generalized p-boxes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from ._simplex import solve
from .cloudops import GeneralizedPBox, genpbox_constraints
from .core import (
    ONE,
    ZERO,
    Cloud,
    CredalConstraints,
    PossibilityDistribution,
    Row,
    _as_space,
    _as_values,
    _dedupe,
)

EXTENSION_CAP = 10


@dataclass(frozen=True)
class ProbabilityInterval:
    """Bounds ``l(x) <= p(x) <= u(x)`` on a probability mass function."""

    space: object
    l: tuple[Fraction, ...]
    u: tuple[Fraction, ...]

    def __init__(self, space, l, u):
        space = _as_space(space)
        l = _as_values(space, l, "l")
        u = _as_values(space, u, "u")
        for e, lo, hi in zip(space.elements, l, u):
            if lo > hi:
                raise ValueError(f"l exceeds u at element {e}")
        if sum(l) > ONE:
            raise ValueError("lower bounds sum above 1: empty probability interval")
        if sum(u) < ONE:
            raise ValueError("upper bounds sum below 1: empty probability interval")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "u", u)

    @classmethod
    def precise(cls, space, p) -> ProbabilityInterval:
        space = _as_space(space)
        p = _as_values(space, p, "p")
        return cls(space, p, p)

    def constraints(self) -> CredalConstraints:
        return CredalConstraints(self.space, [Row(1 << i, lo, hi) for i, (lo, hi) in enumerate(zip(self.l, self.u))])


@dataclass(frozen=True)
class IntervalPartialOrder:
    """Strict precedence pairs ``(i, j)`` (element indices) meaning ``i`` before ``j``."""

    size: int
    pairs: frozenset[tuple[int, int]]

    def precedes(self, i: int, j: int) -> bool:
        return (i, j) in self.pairs


def interval_partial_order(pi: ProbabilityInterval) -> IntervalPartialOrder:
    """``x`` before ``y`` when ``u(x) <= l(y)``.

    Two identical precise values relate both ways; the lower storage index
    then goes first, which keeps the relation a strict order and lets a
    precise distribution with ties be recovered exactly.
    """
    n = len(pi.space)
    rel = {(i, j) for i in range(n) for j in range(n) if i != j and pi.u[i] <= pi.l[j]}
    return IntervalPartialOrder(n, frozenset((i, j) for i, j in rel if (j, i) not in rel or i < j))


def linear_extensions(order: IntervalPartialOrder, cap: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Every total order extending ``order``, lexicographically by index."""
    cap = EXTENSION_CAP if cap is None else cap
    if order.size > cap:
        raise ValueError(f"linear extension enumeration needs n <= {cap}, got n = {order.size}")
    preds = [frozenset(i for i, j in order.pairs if j == k) for k in range(order.size)]

    def rec(prefix: list[int], placed: set[int]):
        if len(prefix) == order.size:
            yield tuple(prefix)
            return
        for k in range(order.size):
            if k not in placed and preds[k] <= placed:
                prefix.append(k)
                placed.add(k)
                yield from rec(prefix, placed)
                placed.discard(k)
                prefix.pop()

    yield from rec([], set())


def _chain_lp(pi: ProbabilityInterval, ext: Sequence[int], objective: set[int]) -> Optional[Fraction]:
    """``max sum_{objective} p`` with ``l <= p <= u`` and ``p`` nondecreasing along ``ext``.

    Variables are ``p`` plus one slack per bound and per chain inequality.
    """
    n = len(ext)
    A, b = [], []
    n_slack = 2 * n + (n - 1)
    width = n + n_slack

    def row(coeffs: dict[int, int], slack: Optional[int], sign: int, rhs):
        r = [0] * width
        for k, v in coeffs.items():
            r[k] = v
        if slack is not None:
            r[n + slack] = sign
        A.append(r)
        b.append(rhs)

    row({i: 1 for i in range(n)}, None, 0, ONE)
    for i in range(n):
        row({i: 1}, 2 * i, -1, pi.l[i])
        row({i: 1}, 2 * i + 1, 1, pi.u[i])
    for k, (i, j) in enumerate(zip(ext, ext[1:])):
        row({i: 1, j: -1}, 2 * n + k, 1, ZERO)
    c = [-1 if i in objective else 0 for i in range(n)] + [0] * n_slack
    res = solve(c, A, b)
    return -res.value if res.feasible else None


def _md(pi: ProbabilityInterval, reverse: bool, cap: Optional[int]):
    n = len(pi.space)
    best = [ZERO] * n
    per_ext = []
    for ext in linear_extensions(interval_partial_order(pi), cap):
        vals = []
        for pos, x in enumerate(ext):
            obj = set(ext[pos:]) if reverse else set(ext[: pos + 1])
            vals.append((x, _chain_lp(pi, ext, obj)))
        if any(v is None for _, v in vals):
            continue
        row = [ZERO] * n
        for x, v in vals:
            row[x] = v
            best[x] = max(best[x], v)
        per_ext.append((ext, tuple(row)))
    return best, per_ext


def md_upper_rows(pi: ProbabilityInterval, cap: Optional[int] = None):
    """Per-extension upper distributions as ``(extension, values)`` pairs."""
    return _md(pi, False, cap)[1]


def md_lower_rows(pi: ProbabilityInterval, cap: Optional[int] = None):
    return _md(pi, True, cap)[1]


def md_upper_possibility(pi: ProbabilityInterval, cap: Optional[int] = None) -> PossibilityDistribution:
    return PossibilityDistribution(pi.space, _md(pi, False, cap)[0])


def md_lower_possibility(pi: ProbabilityInterval, cap: Optional[int] = None) -> PossibilityDistribution:
    """Reversed-sum counterpart; ``1 -`` this is the lower distribution of the cloud."""
    return PossibilityDistribution(pi.space, _md(pi, True, cap)[0])


def intervals_to_cloud(pi: ProbabilityInterval, cap: Optional[int] = None) -> Cloud:
    upper = md_upper_possibility(pi, cap)
    lower = md_lower_possibility(pi, cap)
    return Cloud(pi.space, [ONE - v for v in lower.pi], upper.pi)


def _order_indices(pi: ProbabilityInterval, order: Sequence[str]) -> list[int]:
    if sorted(order) != sorted(pi.space.elements):
        raise ValueError("order must list every element exactly once")
    return [pi.space.index(x) for x in order]


def intervals_to_genpbox(pi: ProbabilityInterval, order: Sequence[str]) -> GeneralizedPBox:
    """Tightest bounds on the cumulative chain of ``order`` implied by the intervals."""
    idx = _order_indices(pi, order)
    n = len(idx)
    flow, fhigh = [ZERO] * n, [ZERO] * n
    sl, su = sum(pi.l), sum(pi.u)
    acc_l = acc_u = ZERO
    for x in idx:
        acc_l += pi.l[x]
        acc_u += pi.u[x]
        flow[x] = max(acc_l, ONE - (su - acc_u))
        fhigh[x] = min(acc_u, ONE - (sl - acc_l))
    return GeneralizedPBox(pi.space, flow, fhigh, preorder=[(x,) for x in idx])


def multi_order_intersection(pi: ProbabilityInterval, orders: Sequence[Sequence[str]]) -> CredalConstraints:
    rows: list[Row] = []
    for order in orders:
        rows.extend(genpbox_constraints(intervals_to_genpbox(pi, order)).rows)
    return CredalConstraints(pi.space, _dedupe(rows))
