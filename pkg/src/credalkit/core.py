"""Finite-space representations: outcome spaces, clouds, possibility
distributions, level cuts and the credal constraints they induce.

Events are plain ``int`` bitmasks over the storage order of an
:class:`OutcomeSpace` (bit ``i`` set means element ``i`` is in the event).
Every numeric value is a :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

Number = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value) -> Fraction:
    """Parse ``value`` exactly.

    Accepts ``Fraction``, ``int``, decimal strings (``"0.75"``) and rational
    strings (``"3/4"``). Floats go through their shortest repr so that
    ``0.1`` becomes ``1/10`` rather than its binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"not a rational number: {value!r}") from None
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def _unit(value, what: str) -> Fraction:
    q = to_rational(value)
    if not ZERO <= q <= ONE:
        raise ValueError(f"{what} = {q} is outside [0, 1]")
    return q


@dataclass(frozen=True)
class OutcomeSpace:
    """Finite set of labelled outcomes; listing order is storage order only."""

    elements: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elements = tuple(str(e) for e in self.elements)
        if not elements:
            raise ValueError("outcome space must contain at least one element")
        if len(set(elements)) != len(elements):
            raise ValueError("outcome labels must be pairwise distinct")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(elements)})

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown element {label!r}") from None

    def event(self, labels: Iterable[str] | str) -> int:
        """Bitmask of ``labels``; a string is split on commas."""
        if isinstance(labels, str):
            labels = [s for s in (t.strip() for t in labels.split(",")) if s]
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return mask

    def labels(self, mask: int) -> tuple[str, ...]:
        if mask & ~self.full:
            raise ValueError(f"event {mask:#b} is not a subset of the space")
        return tuple(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def format_event(self, mask: int) -> str:
        return "{" + ",".join(self.labels(mask)) + "}"

    def complement(self, mask: int) -> int:
        return self.full & ~mask

    def values(self, mapping: Mapping[str, Number], what: str) -> tuple[Fraction, ...]:
        """Read one value per element from ``mapping`` (all must be present)."""
        missing = [e for e in self.elements if e not in mapping]
        if missing:
            raise ValueError(f"{what} has no value for element {missing[0]}")
        extra = set(mapping) - set(self.elements)
        if extra:
            raise ValueError(f"{what} mentions unknown element {sorted(extra)[0]}")
        return tuple(_unit(mapping[e], f"{what}({e})") for e in self.elements)


def _as_space(space) -> OutcomeSpace:
    return space if isinstance(space, OutcomeSpace) else OutcomeSpace(tuple(space))


def _as_values(space: OutcomeSpace, values, what: str) -> tuple[Fraction, ...]:
    if isinstance(values, Mapping):
        return space.values(values, what)
    values = tuple(values)
    if len(values) != len(space):
        raise ValueError(f"{what} has {len(values)} values for {len(space)} elements")
    return tuple(_unit(v, f"{what}({e})") for e, v in zip(space.elements, values))


@dataclass(frozen=True)
class Cloud:
    """A cloud ``[delta, pi]`` on a finite space.

    ``delta`` and ``pi`` may be given as mappings label -> value or as
    sequences in storage order.
    """

    space: OutcomeSpace
    delta: tuple[Fraction, ...]
    pi: tuple[Fraction, ...]

    def __init__(self, space, delta, pi):
        space = _as_space(space)
        delta = _as_values(space, delta, "delta")
        pi = _as_values(space, pi, "pi")
        for e, d, p in zip(space.elements, delta, pi):
            if d > p:
                raise ValueError(f"delta exceeds pi at element {e}")
        if max(pi) != ONE:
            raise ValueError("pi must reach 1 on at least one element")
        if min(delta) != ZERO:
            raise ValueError("delta must be 0 on at least one element")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "pi", pi)

    @classmethod
    def vacuous(cls, space) -> Cloud:
        space = _as_space(space)
        return cls(space, [ZERO] * len(space), [ONE] * len(space))

    def as_dicts(self) -> tuple[dict, dict]:
        e = self.space.elements
        return dict(zip(e, self.delta)), dict(zip(e, self.pi))


@dataclass(frozen=True)
class PossibilityDistribution:
    space: OutcomeSpace
    pi: tuple[Fraction, ...]

    def __init__(self, space, pi):
        space = _as_space(space)
        pi = _as_values(space, pi, "pi")
        if max(pi) != ONE:
            raise ValueError("possibility distribution must reach 1")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "pi", pi)


class Row(NamedTuple):
    """One credal constraint ``lo <= P(event) <= hi``."""

    event: int
    lo: Fraction
    hi: Fraction


@dataclass(frozen=True)
class CredalConstraints:
    space: OutcomeSpace
    rows: tuple[Row, ...]

    def __init__(self, space, rows: Iterable = ()):
        space = _as_space(space)
        checked = []
        for event, lo, hi in rows:
            lo, hi = to_rational(lo), to_rational(hi)
            if event & ~space.full:
                raise ValueError(f"event {event:#b} is not a subset of the space")
            if not ZERO <= lo <= hi <= ONE:
                raise ValueError(f"invalid bounds [{lo}, {hi}] on {space.format_event(event)}")
            checked.append(Row(event, lo, hi))
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "rows", tuple(checked))

    def __add__(self, other: CredalConstraints) -> CredalConstraints:
        if other.space != self.space:
            raise ValueError("constraints live on different spaces")
        return CredalConstraints(self.space, _dedupe(self.rows + other.rows))

    def describe(self) -> list[str]:
        fmt = self.space.format_event
        return [f"{r.lo} <= P({fmt(r.event)}) <= {r.hi}" for r in self.rows]


def _dedupe(rows: Iterable[Row]) -> tuple[Row, ...]:
    seen, out = set(), []
    for row in rows:
        if row not in seen:
            seen.add(row)
            out.append(row)
    return tuple(out)


def _mask_where(values: Sequence[Fraction], predicate) -> int:
    mask = 0
    for i, v in enumerate(values):
        if predicate(v):
            mask |= 1 << i
    return mask


def _check_level(gamma) -> Fraction:
    gamma = to_rational(gamma)
    if not ZERO <= gamma <= ONE:
        raise ValueError(f"level {gamma} outside [0, 1]")
    return gamma


def level_values(cloud: Cloud) -> tuple[Fraction, ...]:
    """Sorted distinct values of delta and pi, always starting at 0 and ending at 1."""
    return tuple(sorted(set(cloud.delta) | set(cloud.pi) | {ZERO, ONE}))


def upper_cut(cloud: Cloud, gamma, strict: bool = False) -> int:
    """``{x : pi(x) > gamma}`` if ``strict`` else ``{x : pi(x) >= gamma}``."""
    gamma = _check_level(gamma)
    if strict:
        return _mask_where(cloud.pi, lambda v: v > gamma)
    return _mask_where(cloud.pi, lambda v: v >= gamma)


def lower_cut(cloud: Cloud, gamma, strict: bool = False) -> int:
    gamma = _check_level(gamma)
    if strict:
        return _mask_where(cloud.delta, lambda v: v > gamma)
    return _mask_where(cloud.delta, lambda v: v >= gamma)


def cloud_constraints(cloud: Cloud) -> CredalConstraints:
    """Two-sided constraint rows equivalent to the cloud's credal set.

    For every level ``g`` the cut ``C_g = {delta >= g}`` is bounded above by
    ``1 - g`` and ``B_g = {pi > g}`` below by ``1 - g``; the opposite side of
    each row is the tightest bound implied by inclusion between cuts. Rows on
    the empty set or the whole space that carry no information are dropped.
    When the implied bounds contradict each other (an empty credal set) the
    rows are left one-sided so that they stay well formed.
    """
    space = cloud.space
    levels = level_values(cloud)
    lower_cuts = [(lower_cut(cloud, g), ONE - g) for g in levels]
    upper_cuts = [(upper_cut(cloud, g, strict=True), ONE - g) for g in levels]

    rows, one_sided = [], []
    for (c_set, c_hi), (b_set, b_lo) in zip(reversed(lower_cuts), reversed(upper_cuts)):
        c_lo = max((lo for b, lo in upper_cuts if b & ~c_set == 0), default=ZERO)
        b_hi = min((hi for c, hi in lower_cuts if b_set & ~c == 0), default=ONE)
        rows += [Row(c_set, c_lo, c_hi), Row(b_set, b_lo, b_hi)]
        one_sided += [Row(c_set, ZERO, c_hi), Row(b_set, b_lo, ONE)]
    if any(r.lo > r.hi for r in rows):
        rows = one_sided
    return CredalConstraints(space, _dedupe(r for r in rows if not _vacuous(r, space)))


def _vacuous(row: Row, space: OutcomeSpace) -> bool:
    if row.event == 0:
        return row.lo == ZERO
    if row.event == space.full:
        return row.hi == ONE
    return row.lo == ZERO and row.hi == ONE


def possibility_constraints(dist: PossibilityDistribution) -> CredalConstraints:
    """Rows ``P({pi > g}) >= 1 - g`` over the distinct levels of ``pi``."""
    levels = sorted(set(dist.pi) | {ZERO})
    rows = (Row(_mask_where(dist.pi, lambda v, g=g: v > g), ONE - g, ONE) for g in levels)
    return CredalConstraints(dist.space, _dedupe(r for r in rows if not _vacuous(r, dist.space)))


def to_possibility_pair(cloud: Cloud) -> tuple[PossibilityDistribution, PossibilityDistribution]:
    """``(pi, 1 - delta)``; the cloud's credal set is the intersection of theirs."""
    return (
        PossibilityDistribution(cloud.space, cloud.pi),
        PossibilityDistribution(cloud.space, [ONE - d for d in cloud.delta]),
    )


def mirror(cloud: Cloud) -> Cloud:
    return Cloud(cloud.space, [ONE - p for p in cloud.pi], [ONE - d for d in cloud.delta])


def possibility_measure(dist: PossibilityDistribution, event: int) -> Fraction:
    return max((p for i, p in enumerate(dist.pi) if event >> i & 1), default=ZERO)


def necessity_measure(dist: PossibilityDistribution, event: int) -> Fraction:
    return ONE - possibility_measure(dist, dist.space.complement(event))
