"""Cloud algorithms: emptiness tests, comonotonicity, conversion to
generalized p-boxes and random sets, outer bounds and 2-monotonicity
violations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    ONE,
    ZERO,
    Cloud,
    CredalConstraints,
    OutcomeSpace,
    PossibilityDistribution,
    Row,
    _as_space,
    _as_values,
    cloud_constraints,
    level_values,
    lower_cut,
    necessity_measure,
    possibility_measure,
    to_possibility_pair,
    upper_cut,
)
from .credal import (
    INFEASIBLE,
    MassFunction,
    Violation,
    lower_prob_function,
    lp_lower,
    two_monotone_violation,
)


def _chateauneuf_scan(upper: Sequence[Fraction], lower: Sequence[Fraction]) -> bool:
    """``max_{A} upper >= min_{not A} lower`` for every event ``A``.

    Only prefixes of the elements sorted by ``upper`` need checking: for a
    given maximum, the largest such event leaves the fewest elements outside.
    """
    order = sorted(range(len(upper)), key=lambda i: upper[i])
    suffix_min = [ONE] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        suffix_min[k] = min(suffix_min[k + 1], lower[order[k]])
    return all(upper[order[k]] >= suffix_min[k + 1] for k in range(len(order) - 1))


def is_nonempty(cloud: Cloud) -> bool:
    return _chateauneuf_scan(cloud.pi, cloud.delta)


def pair_nonempty(first: PossibilityDistribution, second: PossibilityDistribution) -> bool:
    """Whether the credal sets of two possibility distributions intersect."""
    if first.space != second.space:
        raise ValueError("distributions live on different spaces")
    return _chateauneuf_scan(first.pi, [ONE - p for p in second.pi])


def tightest_lower_distribution(dist: PossibilityDistribution, order: Sequence[str]) -> Cloud:
    """Cloud ``[delta, pi]`` with ``delta(x_i) = pi(x_{i-1})`` along ``order``.

    ``order`` must list every element once with ``pi`` nondecreasing.
    """
    space = dist.space
    if sorted(order) != sorted(space.elements):
        raise ValueError("order must list every element exactly once")
    idx = [space.index(x) for x in order]
    pis = [dist.pi[i] for i in idx]
    if any(a > b for a, b in zip(pis, pis[1:])):
        raise ValueError("pi is not nondecreasing along the given order")
    delta = [ZERO] * len(space)
    for prev, cur in zip(idx, idx[1:]):
        delta[cur] = dist.pi[prev]
    return Cloud(space, delta, dist.pi)


def is_comonotonic(cloud: Cloud) -> bool:
    d, p = cloud.delta, cloud.pi
    n = len(d)
    return not any(d[i] < d[j] and p[i] > p[j] for i in range(n) for j in range(n))


def cuts_nested(cloud: Cloud) -> bool:
    """Whether all strong upper cuts and regular lower cuts form a chain."""
    levels = level_values(cloud)
    sets = {upper_cut(cloud, g, strict=True) for g in levels}
    sets |= {lower_cut(cloud, g) for g in levels}
    sets = sorted(sets, key=lambda s: bin(s).count("1"))
    return all(a & ~b == 0 for a, b in zip(sets, sets[1:]))


@dataclass(frozen=True)
class GeneralizedPBox:
    """Comonotone pair ``flow <= fhigh`` with a complete preorder.

    ``preorder`` is a tuple of rank classes (tuples of element indices) from
    lowest to highest. The credal set is ``flow(A_k) <= P(A_k) <= fhigh(A_k)``
    on the cumulative unions ``A_k`` of the classes. When no preorder is
    given, the one induced by ``(flow, fhigh)`` is used.
    """

    space: OutcomeSpace
    flow: tuple[Fraction, ...]
    fhigh: tuple[Fraction, ...]
    preorder: tuple[tuple[int, ...], ...]

    def __init__(self, space, flow, fhigh, preorder=None):
        space = _as_space(space)
        flow = _as_values(space, flow, "flow")
        fhigh = _as_values(space, fhigh, "fhigh")
        for e, lo, hi in zip(space.elements, flow, fhigh):
            if lo > hi:
                raise ValueError(f"flow exceeds fhigh at element {e}")
        n = len(space)
        if any(flow[i] < flow[j] and fhigh[i] > fhigh[j] for i in range(n) for j in range(n)):
            raise ValueError("flow and fhigh are not comonotone")
        if not any(lo == hi == ONE for lo, hi in zip(flow, fhigh)):
            raise ValueError("flow and fhigh must both reach 1 on a common element")
        if preorder is None:
            keys = sorted({(flow[i], fhigh[i]) for i in range(n)})
            preorder = [tuple(i for i in range(n) if (flow[i], fhigh[i]) == k) for k in keys]
        else:
            preorder = [
                tuple(space.index(x) if isinstance(x, str) else int(x) for x in cls)
                for cls in preorder
            ]
        flat = sorted(i for cls in preorder for i in cls)
        if flat != list(range(n)) or any(not cls for cls in preorder):
            raise ValueError("preorder classes must partition the space")
        for cls in preorder:
            if len({(flow[i], fhigh[i]) for i in cls}) > 1:
                raise ValueError("elements of one rank class must share flow and fhigh")
        for lower, upper in zip(preorder, preorder[1:]):
            i, j = lower[0], upper[0]
            if flow[i] > flow[j] or fhigh[i] > fhigh[j]:
                raise ValueError("flow and fhigh must be nondecreasing along the preorder")
        if flow[preorder[-1][0]] != ONE:
            raise ValueError("the top rank class must have flow = fhigh = 1")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "flow", flow)
        object.__setattr__(self, "fhigh", fhigh)
        object.__setattr__(self, "preorder", tuple(tuple(sorted(c)) for c in preorder))

    def chain(self) -> list[tuple[int, Fraction, Fraction]]:
        """``(A_k, alpha_k, beta_k)`` along the preorder."""
        out, acc = [], 0
        for cls in self.preorder:
            for i in cls:
                acc |= 1 << i
            out.append((acc, self.flow[cls[0]], self.fhigh[cls[0]]))
        return out

    def preorder_labels(self) -> list[list[str]]:
        return [[self.space.elements[i] for i in cls] for cls in self.preorder]


def genpbox_constraints(gpb: GeneralizedPBox) -> CredalConstraints:
    rows = [Row(a, lo, hi) for a, lo, hi in gpb.chain()]
    return CredalConstraints(gpb.space, [r for r in rows if not (r.lo == ZERO and r.hi == ONE)
                                         and r.event != gpb.space.full])


def _joint_classes(cloud: Cloud) -> list[tuple[int, ...]]:
    n = len(cloud.space)
    keys = sorted({(cloud.pi[i], cloud.delta[i]) for i in range(n)})
    return [tuple(i for i in range(n) if (cloud.pi[i], cloud.delta[i]) == k) for k in keys]


def cloud_to_genpbox(cloud: Cloud) -> GeneralizedPBox:
    """Generalized p-box with the same credal set as a comonotonic cloud.

    ``fhigh = pi`` and ``flow(x)`` is the smallest ``delta`` among elements
    strictly above ``x`` in the preorder jointly induced by ``(pi, delta)``
    (1 when there are none).
    """
    if not is_comonotonic(cloud):
        raise ValueError("cloud is not comonotonic")
    if not is_nonempty(cloud):
        raise ValueError("the cloud induces an empty credal set")
    classes = _joint_classes(cloud)
    flow = [ONE] * len(cloud.space)
    above = ONE
    for cls in reversed(classes):
        for i in cls:
            flow[i] = above
        above = min(above, min(cloud.delta[i] for i in cls))
    return GeneralizedPBox(cloud.space, flow, cloud.pi, preorder=classes)


def genpbox_to_cloud(gpb: GeneralizedPBox) -> Cloud:
    """Comonotonic cloud: ``pi = fhigh`` and ``delta(x)`` the largest ``flow``
    strictly below ``x`` in the p-box preorder (0 for the lowest class)."""
    delta = [ZERO] * len(gpb.space)
    below = ZERO
    for cls in gpb.preorder:
        for i in cls:
            delta[i] = below
        below = max(below, gpb.flow[cls[0]])
    return Cloud(gpb.space, delta, gpb.fhigh)


def focal_sets(cloud: Cloud) -> list[tuple[int, Fraction]]:
    """Unmerged ``(E_j, gamma_j - gamma_{j-1})`` for ``j = 1..M``."""
    levels = level_values(cloud)
    out = []
    for prev, g in zip(levels, levels[1:]):
        e = upper_cut(cloud, g) & ~lower_cut(cloud, g)
        out.append((e, g - prev))
    return out


def cloud_to_randomset(cloud: Cloud) -> MassFunction:
    """Random set with focal sets ``{pi >= g, delta < g}`` weighted by level gaps.

    Exact for comonotonic clouds, an inner approximation otherwise. An empty
    focal set means the cloud's credal set is empty.
    """
    merged: dict[int, Fraction] = {}
    for e, m in focal_sets(cloud):
        if e == 0:
            raise ValueError("empty focal set: the cloud induces an empty credal set")
        merged[e] = merged.get(e, ZERO) + m
    return MassFunction(cloud.space, merged)


def outer_bounds(cloud: Cloud, event: int) -> tuple[Fraction, Fraction]:
    upper, lower_c = to_possibility_pair(cloud)
    lo = max(necessity_measure(upper, event), necessity_measure(lower_c, event))
    hi = min(possibility_measure(upper, event), possibility_measure(lower_c, event))
    return lo, hi


def overlapping_cut_pairs(cloud: Cloud) -> list[tuple[int, int]]:
    """Pairs ``(B, C)`` of a strong upper cut and a lower cut, the upper one
    taken at a strictly higher level, that overlap without nesting and do
    not cover the space."""
    full = cloud.space.full
    levels = level_values(cloud)
    pairs = []
    for gi in levels:
        b = upper_cut(cloud, gi, strict=True)
        for gj in levels:
            if gj >= gi:
                break
            c = lower_cut(cloud, gj)
            inter = b & c
            if inter not in (b, c, 0) and b | c != full and (b, c) not in pairs:
                pairs.append((b, c))
    return pairs


def find_2monotone_violation(cloud: Cloud, cap: Optional[int] = None) -> Optional[Violation]:
    """A verified pair of events on which the cloud's lower probability
    fails 2-monotonicity, or ``None`` if it is 2-monotone."""
    cons = cloud_constraints(cloud)
    full = cloud.space.full
    if lp_lower(cons, 0) is INFEASIBLE:
        raise ValueError("the cloud induces an empty credal set")
    for b, c in overlapping_cut_pairs(cloud):
        a, bb = b, full & ~c
        fa, fb = lp_lower(cons, a), lp_lower(cons, bb)
        fu, fi = lp_lower(cons, a | bb), lp_lower(cons, a & bb)
        if fa + fb > fu + fi:
            return Violation(a, bb, fa + fb, fu + fi)
    return two_monotone_violation(lower_prob_function(cons), cap)
