"""Clouds on a bounded real interval with continuous piecewise-linear
distributions.

Every cut, inverse and integral below is computed exactly: the functions
have rational breakpoints, so all level crossings are rational too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from .core import ONE, ZERO, Cloud, CredalConstraints, OutcomeSpace, PossibilityDistribution, possibility_constraints, to_rational
from .credal import lp_lower


class Interval(NamedTuple):
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def is_empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    def contains(self, t) -> bool:
        t = to_rational(t)
        above = t > self.lo or (t == self.lo and self.lo_closed)
        below = t < self.hi or (t == self.hi and self.hi_closed)
        return above and below

    def __str__(self) -> str:
        if self.lo == self.hi:
            return f"{{{self.lo}}}"
        return f"{'[' if self.lo_closed else '('}{self.lo}, {self.hi}{']' if self.hi_closed else ')'}"


def _touch(a: Interval, b: Interval) -> bool:
    """Whether ``b`` (starting no earlier than ``a``) overlaps or abuts ``a``."""
    return b.lo < a.hi or (b.lo == a.hi and (a.hi_closed or b.lo_closed))


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of disjoint intervals, kept sorted and maximally merged."""

    parts: tuple[Interval, ...]

    def __init__(self, parts: Iterable = ()):
        items = []
        for p in parts:
            p = Interval(to_rational(p[0]), to_rational(p[1]), *p[2:])
            if not p.is_empty():
                items.append(p)
        items.sort(key=lambda p: (p.lo, not p.lo_closed))
        merged: list[Interval] = []
        for p in items:
            if merged and _touch(merged[-1], p):
                last = merged[-1]
                if p.hi > last.hi:
                    hi, hc = p.hi, p.hi_closed
                elif p.hi == last.hi:
                    hi, hc = p.hi, p.hi_closed or last.hi_closed
                else:
                    hi, hc = last.hi, last.hi_closed
                merged[-1] = Interval(last.lo, hi, last.lo_closed, hc)
            else:
                merged.append(p)
        object.__setattr__(self, "parts", tuple(merged))

    def __iter__(self):
        return iter(self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def contains(self, t) -> bool:
        return any(p.contains(t) for p in self.parts)

    def measure(self) -> Fraction:
        return sum((p.hi - p.lo for p in self.parts), ZERO)

    def issubset(self, other: IntervalUnion) -> bool:
        return all(any(_inside(p, q) for q in other.parts) for p in self.parts)

    def __str__(self) -> str:
        return " U ".join(str(p) for p in self.parts) if self.parts else "{}"


def _inside(p: Interval, q: Interval) -> bool:
    left = p.lo > q.lo or (p.lo == q.lo and (q.lo_closed or not p.lo_closed))
    right = p.hi < q.hi or (p.hi == q.hi and (q.hi_closed or not p.hi_closed))
    return left and right


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous function interpolating ``(x, y)`` breakpoints linearly."""

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __init__(self, points: Sequence[Sequence]):
        pts = [(to_rational(x), to_rational(y)) for x, y in points]
        if len(pts) < 2:
            raise ValueError("a piecewise-linear function needs at least two breakpoints")
        xs = tuple(p[0] for p in pts)
        ys = tuple(p[1] for p in pts)
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not ZERO <= y <= ONE for y in ys):
            raise ValueError("values must lie in [0, 1]")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def support(self) -> tuple[Fraction, Fraction]:
        return self.xs[0], self.xs[-1]

    @property
    def points(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.xs, self.ys))

    def __call__(self, t) -> Fraction:
        t = to_rational(t)
        if not self.xs[0] <= t <= self.xs[-1]:
            raise ValueError(f"{t} is outside the support")
        for x0, y0, x1, y1 in self.pieces():
            if t <= x1:
                return y0 + (y1 - y0) * (t - x0) / (x1 - x0)
        raise AssertionError("unreachable")

    def pieces(self):
        return [(self.xs[k], self.ys[k], self.xs[k + 1], self.ys[k + 1]) for k in range(len(self.xs) - 1)]

    def crossings(self, level) -> list[Fraction]:
        """Points where the function equals ``level`` on a sloped piece."""
        level = to_rational(level)
        out = []
        for x0, y0, x1, y1 in self.pieces():
            if y0 != y1 and min(y0, y1) <= level <= max(y0, y1):
                out.append(x0 + (level - y0) * (x1 - x0) / (y1 - y0))
        return out

    def is_nondecreasing(self) -> bool:
        return all(a <= b for a, b in zip(self.ys, self.ys[1:]))

    def slope_on(self, a: Fraction, b: Fraction) -> Fraction:
        return (self(b) - self(a)) / (b - a)


def _combine(funcs: Sequence[PiecewiseLinear], op: Callable[..., Fraction]) -> PiecewiseLinear:
    xs = sorted(set().union(*(f.xs for f in funcs)))
    return PiecewiseLinear([(x, op(*(f(x) for f in funcs))) for x in xs])


@dataclass(frozen=True)
class ContinuousCloud:
    delta: PiecewiseLinear
    pi: PiecewiseLinear

    def __post_init__(self):
        if self.delta.support != self.pi.support:
            raise ValueError("delta and pi must share the same support")
        for x in sorted(set(self.delta.xs) | set(self.pi.xs)):
            if self.delta(x) > self.pi(x):
                raise ValueError(f"delta exceeds pi at r = {x}")
        if max(self.pi.ys) != ONE:
            raise ValueError("pi must reach 1 on the support")
        if min(self.delta.ys) != ZERO:
            raise ValueError("delta must reach 0 on the support")

    @property
    def support(self) -> tuple[Fraction, Fraction]:
        return self.pi.support

    def breakpoints(self) -> list[Fraction]:
        return sorted(set(self.delta.xs) | set(self.pi.xs))


def solve_set(
    funcs: Sequence[PiecewiseLinear],
    levels: Iterable,
    predicate: Callable[[Fraction], bool],
    extra: Iterable = (),
) -> IntervalUnion:
    """Exact ``{t in support : predicate(t)}``.

    ``predicate`` may only compare the values of ``funcs`` with ``levels``;
    then its truth value is constant between consecutive critical points
    (breakpoints and level crossings), so testing each critical point and
    one interior point per gap is exact.
    """
    lo, hi = funcs[0].support
    levels = [to_rational(v) for v in levels]
    pts = {lo, hi}
    for f in funcs:
        pts.update(f.xs)
        for v in levels:
            pts.update(f.crossings(v))
    pts.update(t for t in map(to_rational, extra) if lo <= t <= hi)
    pts = sorted(pts)
    parts = [Interval(t, t) for t in pts if predicate(t)]
    parts += [Interval(a, b, False, False) for a, b in zip(pts, pts[1:]) if predicate((a + b) / 2)]
    return IntervalUnion(parts)


def alpha_focal(cc: ContinuousCloud, alpha) -> IntervalUnion:
    """``{r : pi(r) >= alpha and delta(r) < alpha}``."""
    alpha = to_rational(alpha)
    if not ZERO < alpha <= ONE:
        raise ValueError("alpha must lie in (0, 1]")
    return solve_set([cc.pi, cc.delta], [alpha], lambda t: cc.pi(t) >= alpha and cc.delta(t) < alpha)


def upper_level_set(f: PiecewiseLinear, alpha, strict: bool = True) -> IntervalUnion:
    alpha = to_rational(alpha)
    if strict:
        return solve_set([f], [alpha], lambda t: f(t) > alpha)
    return solve_set([f], [alpha], lambda t: f(t) >= alpha)


# ---------------------------------------------------------------- discretization

@dataclass(frozen=True)
class Discretization:
    """Inner and outer finite clouds over a partition of the support.

    The inner pair may have ``delta > pi`` on some cells, in which case it
    is not a valid :class:`Cloud` but still defines constraints (possibly
    an empty credal set).
    """

    levels: int
    cells: tuple[Interval, ...]
    space: OutcomeSpace
    outer_pi: tuple[Fraction, ...]
    outer_delta: tuple[Fraction, ...]
    inner_pi: tuple[Fraction, ...]
    inner_delta: tuple[Fraction, ...]

    def outer_cloud(self) -> Cloud:
        return Cloud(self.space, self.outer_delta, self.outer_pi)

    def inner_cloud(self) -> Cloud:
        return Cloud(self.space, self.inner_delta, self.inner_pi)

    def constraints(self, side: str) -> CredalConstraints:
        if side == "outer":
            pi, delta = self.outer_pi, self.outer_delta
        elif side == "inner":
            pi, delta = self.inner_pi, self.inner_delta
        else:
            raise ValueError("side must be 'inner' or 'outer'")
        upper = PossibilityDistribution(self.space, pi)
        lower = PossibilityDistribution(self.space, [ONE - d for d in delta])
        return possibility_constraints(upper) + possibility_constraints(lower)

    def event(self, union: IntervalUnion) -> int:
        """Cells making up ``union``; every cell must lie inside or outside it."""
        mask = 0
        for k, cell in enumerate(self.cells):
            inside = IntervalUnion([cell]).issubset(union)
            if inside:
                mask |= 1 << k
            elif any(_overlap(cell, p) for p in union):
                raise ValueError(f"cell {cell} straddles the event boundary; pass its endpoints as cuts")
        return mask

    def lower(self, side: str, union: IntervalUnion):
        return lp_lower(self.constraints(side), self.event(union))


def _overlap(a: Interval, b: Interval) -> bool:
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo < hi:
        return True
    return lo == hi and a.contains(lo) and b.contains(lo)


def _up(v: Fraction, n: int) -> Fraction:
    return Fraction(math.ceil(v * n), n)


def _down(v: Fraction, n: int) -> Fraction:
    return Fraction(math.floor(v * n), n)


def _cell_label(cell: Interval) -> str:
    if cell.lo == cell.hi:
        return f"{{{cell.lo}}}"
    return f"{'[' if cell.lo_closed else '('}{cell.lo};{cell.hi}{']' if cell.hi_closed else ')'}"


def discretize(cc: ContinuousCloud, n: int, cuts: Iterable = ()) -> Discretization:
    """Round ``pi``/``delta`` to the grid ``k/n`` outward and inward.

    Outer: ``pi`` up, ``delta`` down. Inner: ``pi`` down, ``delta`` up.
    Values already on the grid stay put, except that the outer ``pi`` is at
    least ``1/n`` and the outer ``delta`` at most ``1 - 1/n``, so ``n = 1``
    yields the vacuous cloud. Points in ``cuts`` always bound cells, which
    lets events with those endpoints be expressed as unions of cells.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("number of levels must be a positive integer")
    cuts = {to_rational(c) for c in cuts}
    grid = [Fraction(k, n) for k in range(n + 1)]
    lo, hi = cc.support
    pts = {lo, hi} | set(cc.breakpoints()) | {c for c in cuts if lo <= c <= hi}
    for f in (cc.pi, cc.delta):
        for g in grid:
            pts.update(f.crossings(g))
    pts = sorted(pts)

    def key(t):
        p, d = cc.pi(t), cc.delta(t)
        return (max(_up(p, n), Fraction(1, n)), min(_down(d, n), Fraction(n - 1, n)), _down(p, n), _up(d, n))

    raw: list[tuple[Interval, tuple, bool]] = []
    for k, t in enumerate(pts):
        raw.append((Interval(t, t), key(t), t in cuts))
        if k + 1 < len(pts):
            raw.append((Interval(t, pts[k + 1], False, False), key((t + pts[k + 1]) / 2), False))
    cells: list[list] = []
    for cell, k, barrier in raw:
        if cells and not barrier and not cells[-1][2] and cells[-1][1] == k:
            prev = cells[-1][0]
            cells[-1][0] = Interval(prev.lo, cell.hi, prev.lo_closed, cell.hi_closed)
        else:
            cells.append([cell, k, barrier])
    geometry = tuple(c[0] for c in cells)
    space = OutcomeSpace(tuple(_cell_label(c) for c in geometry))
    return Discretization(
        n,
        geometry,
        space,
        tuple(c[1][0] for c in cells),
        tuple(c[1][1] for c in cells),
        tuple(c[1][2] for c in cells),
        tuple(c[1][3] for c in cells),
    )


# ---------------------------------------------------------------- p-boxes

def pseudo_inverse(f: PiecewiseLinear, alpha) -> Fraction:
    """``inf{t : f(t) >= alpha}``; the support's upper end if never reached."""
    alpha = to_rational(alpha)
    for x0, y0, x1, y1 in f.pieces():
        if y0 >= alpha:
            return x0
        if y1 >= alpha:
            return x0 + (alpha - y0) * (x1 - x0) / (y1 - y0)
    return f.xs[-1]


def _check_pbox(flow: PiecewiseLinear, fhigh: PiecewiseLinear) -> None:
    if flow.support != fhigh.support:
        raise ValueError("flow and fhigh must share the same support")
    if not (flow.is_nondecreasing() and fhigh.is_nondecreasing()):
        raise ValueError("p-box bounds must be nondecreasing")
    for x in sorted(set(flow.xs) | set(fhigh.xs)):
        if flow(x) > fhigh(x):
            raise ValueError(f"flow exceeds fhigh at r = {x}")
    if flow.ys[-1] != ONE or fhigh.ys[-1] != ONE:
        raise ValueError("p-box bounds must reach 1 at the end of the support")


def pbox_focal(flow: PiecewiseLinear, fhigh: PiecewiseLinear, alpha) -> Interval:
    """Focal interval at level ``alpha``: from the inverse of ``fhigh`` to that of ``flow``."""
    _check_pbox(flow, fhigh)
    alpha = to_rational(alpha)
    if not ZERO < alpha <= ONE:
        raise ValueError("alpha must lie in (0, 1]")
    return Interval(pseudo_inverse(fhigh, alpha), pseudo_inverse(flow, alpha))


def _alpha_measure_below(f: PiecewiseLinear, t: Fraction) -> Fraction:
    """Lebesgue measure of ``{alpha in (0, 1] : inverse of f at alpha <= t}``.

    The inverse is linear between consecutive breakpoint values of ``f``
    and constant (the support's low end) below ``f``'s first value, so the
    measure is a sum of clipped linear pieces in ``alpha``.
    """
    lo = f.xs[0]
    total = ZERO
    if t >= lo:
        total += f.ys[0]
    for x0, y0, x1, y1 in f.pieces():
        if y1 == y0:
            continue
        # on (y0, y1] the inverse runs linearly from x0 to x1
        if t >= x1:
            total += y1 - y0
        elif t > x0:
            total += (t - x0) * (y1 - y0) / (x1 - x0)
    return total


def focal_bel_pl(flow: PiecewiseLinear, fhigh: PiecewiseLinear, t) -> tuple[Fraction, Fraction]:
    """Belief and plausibility of ``(-inf, t]`` under the p-box's focal intervals,
    obtained by integrating focal membership over ``alpha``."""
    _check_pbox(flow, fhigh)
    t = to_rational(t)
    return _alpha_measure_below(flow, t), _alpha_measure_below(fhigh, t)


# ---------------------------------------------------------------- thin clouds

def _is_unimodal(f: PiecewiseLinear) -> bool:
    ys = f.ys
    k = 0
    while k + 1 < len(ys) and ys[k] <= ys[k + 1]:
        k += 1
    return all(a >= b for a, b in zip(ys[k:], ys[k + 1:]))


def _running_max(f: PiecewiseLinear) -> PiecewiseLinear:
    pts = [(f.xs[0], f.ys[0])]
    best = f.ys[0]
    for x0, y0, x1, y1 in f.pieces():
        if y1 > best:
            if y0 < best:
                pts.append((x0 + (best - y0) * (x1 - x0) / (y1 - y0), best))
            best = y1
        pts.append((x1, best))
    return PiecewiseLinear(_dedupe_x(pts))


def _dedupe_x(pts):
    out = []
    for x, y in pts:
        if out and out[-1][0] == x:
            out[-1] = (x, y)
        else:
            out.append((x, y))
    return out


def thin_cloud_cdfs(pi: PiecewiseLinear, unimodal: bool = False) -> tuple[PiecewiseLinear, PiecewiseLinear]:
    """CDFs ``F+(t) = sup_{r <= t} pi(r)`` and ``F-(t) = 1 - sup_{r > t} pi(r)``.

    ``F+`` puts its mass on the left ends of the cuts of ``pi``, ``F-`` on
    the right ends; both (and any mixture) lie in the thin cloud's credal set.
    """
    if max(pi.ys) != ONE:
        raise ValueError("pi must reach 1 on the support")
    if unimodal and not _is_unimodal(pi):
        raise ValueError("pi is not unimodal")
    plus = _running_max(pi)
    mirrored = PiecewiseLinear([(-x, y) for x, y in reversed(pi.points)])
    right = _running_max(mirrored)
    minus = PiecewiseLinear([(-x, ONE - y) for x, y in reversed(right.points)])
    return plus, minus


def mixture(first: PiecewiseLinear, second: PiecewiseLinear, weight) -> PiecewiseLinear:
    """``weight * first + (1 - weight) * second``."""
    w = to_rational(weight)
    if not ZERO <= w <= ONE:
        raise ValueError("mixture weight must lie in [0, 1]")
    return _combine([first, second], lambda a, b: w * a + (ONE - w) * b)


def cdf_probability(cdf: PiecewiseLinear, event: IntervalUnion) -> Fraction:
    """Probability of ``event`` for a continuous CDF on the support, whose value
    at the support's low end is an atom there."""
    lo, hi = cdf.support
    total = ZERO
    for p in event:
        a, b = max(p.lo, lo), min(p.hi, hi)
        if a > b:
            continue
        total += cdf(b) - cdf(a)
        if a == lo and p.contains(lo):
            total += cdf(lo)
    return total


# ---------------------------------------------------------------- comonotonicity

def _refinement(cc: ContinuousCloud) -> list[tuple[Fraction, Fraction]]:
    xs = cc.breakpoints()
    return list(zip(xs, xs[1:]))


def _box_violation(cc: ContinuousCloud, pa, pb) -> bool:
    """Exists ``t`` in piece ``pa`` and ``s`` in ``pb`` with
    ``delta(t) < delta(s)`` and ``pi(t) > pi(s)``.

    Both gaps are affine on the box, so the maximum of their minimum is
    reached at a corner or where an edge meets the line on which they agree.
    """
    d, p = cc.delta, cc.pi

    def gaps(t, s):
        return d(s) - d(t), p(t) - p(s)

    (a0, a1), (b0, b1) = pa, pb
    cands = [(t, s) for t in (a0, a1) for s in (b0, b1)]
    for fixed_t in (a0, a1):
        g0, g1 = gaps(fixed_t, b0), gaps(fixed_t, b1)
        cands += _edge_cross(g0, g1, lambda lam: (fixed_t, b0 + lam * (b1 - b0)))
    for fixed_s in (b0, b1):
        g0, g1 = gaps(a0, fixed_s), gaps(a1, fixed_s)
        cands += _edge_cross(g0, g1, lambda lam: (a0 + lam * (a1 - a0), fixed_s))
    return any(min(gaps(t, s)) > 0 for t, s in cands)


def _edge_cross(g0, g1, at):
    diff0 = g0[0] - g0[1]
    diff1 = g1[0] - g1[1]
    if diff0 == diff1:
        return []
    lam = diff0 / (diff0 - diff1)
    return [at(lam)] if ZERO <= lam <= ONE else []


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def comonotonicity_continuous(cc: ContinuousCloud) -> str:
    """``"comonotonic"``, ``"weakly_comonotonic"`` or ``"neither"``.

    Weak comonotonicity asks that ``delta`` and ``pi`` never move in strictly
    opposite directions; a flat stretch agrees with either direction.
    """
    pieces = _refinement(cc)
    for a, b in pieces:
        if _sign(cc.delta.slope_on(a, b)) * _sign(cc.pi.slope_on(a, b)) < 0:
            return "neither"
    if any(_box_violation(cc, pa, pb) for pa in pieces for pb in pieces):
        return "weakly_comonotonic"
    return "comonotonic"
