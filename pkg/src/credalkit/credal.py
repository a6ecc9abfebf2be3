"""Exact lower/upper probabilities over constraint-defined credal sets,
set functions on the full event lattice, Möbius inversion and
monotonicity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, NamedTuple, Optional

from . import _kernels
from ._simplex import solve
from .core import (
    ONE,
    ZERO,
    CredalConstraints,
    OutcomeSpace,
    PossibilityDistribution,
    necessity_measure,
    to_rational,
)

LOWER_PROB_CAP = 12
MONOTONE_CAP = 8


class _Infeasible:
    """Marker for an empty credal set. Falsy, compares only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFEASIBLE"

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_Infeasible, ())


INFEASIBLE = _Infeasible()


def _check_cap(n: int, cap: Optional[int], default: int, what: str) -> None:
    cap = default if cap is None else cap
    if n > cap:
        raise ValueError(f"{what} needs n <= {cap}, got n = {n}")


def _lumped_lp(constraints: CredalConstraints, objective: int):
    """Build ``(c, A, b)`` with one variable per class of interchangeable elements.

    Elements belonging to exactly the same constraint events and the same
    side of ``objective`` can be merged without changing the optimum.
    """
    space = constraints.space
    rows = constraints.rows
    groups: dict[tuple, int] = {}
    for i in range(len(space)):
        sig = tuple(r.event >> i & 1 for r in rows) + (objective >> i & 1,)
        groups[sig] = groups.get(sig, 0) | 1 << i
    sigs = list(groups)
    k = len(sigs)

    eqs: list[tuple[list[int], Fraction, int]] = [([1] * k, ONE, 0)]
    for r_idx, row in enumerate(rows):
        coeffs = [sig[r_idx] for sig in sigs]
        if row.lo == row.hi:
            eqs.append((coeffs, row.lo, 0))
            continue
        if row.lo > ZERO:
            eqs.append((coeffs, row.lo, -1))
        if row.hi < ONE:
            eqs.append((coeffs, row.hi, 1))
    n_slack = sum(1 for _, _, s in eqs if s)
    A, b = [], []
    slack = 0
    for coeffs, rhs, sign in eqs:
        extra = [0] * n_slack
        if sign:
            extra[slack] = sign
            slack += 1
        A.append(coeffs + extra)
        b.append(rhs)
    c = [sig[-1] for sig in sigs] + [0] * n_slack
    return c, A, b


def lp_lower(constraints: CredalConstraints, event: int):
    """Exact ``min P(event)`` over the credal set, or ``INFEASIBLE``."""
    res = solve(*_lumped_lp(constraints, event))
    return res.value if res.feasible else INFEASIBLE


def lp_upper(constraints: CredalConstraints, event: int):
    low = lp_lower(constraints, constraints.space.complement(event))
    return INFEASIBLE if low is INFEASIBLE else ONE - low


def is_feasible(constraints: CredalConstraints) -> bool:
    return lp_lower(constraints, 0) is not INFEASIBLE


@dataclass(frozen=True)
class SetFunction:
    """A set function on all ``2**n`` events, indexed by bitmask."""

    space: OutcomeSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != 1 << len(self.space):
            raise ValueError("a set function needs one value per event")

    def __call__(self, event: int) -> Fraction:
        return self.values[event]


@dataclass(frozen=True)
class MassFunction:
    """Random set: positive masses on non-empty focal sets, summing to one."""

    space: OutcomeSpace
    focal: Mapping[int, Fraction]

    def __init__(self, space, focal: Mapping[int, object]):
        space = space if isinstance(space, OutcomeSpace) else OutcomeSpace(tuple(space))
        merged: dict[int, Fraction] = {}
        for event, mass in focal.items():
            mass = to_rational(mass)
            if event == 0:
                raise ValueError("a mass function puts no mass on the empty set")
            if event & ~space.full:
                raise ValueError(f"focal set {event:#b} is not a subset of the space")
            if mass < 0:
                raise ValueError(f"negative mass {mass} on {space.format_event(event)}")
            if mass:
                merged[event] = merged.get(event, ZERO) + mass
        if sum(merged.values(), ZERO) != ONE:
            raise ValueError("masses must sum to 1")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "focal", MappingProxyType(dict(sorted(merged.items()))))

    def __hash__(self):
        return hash((self.space, tuple(self.focal.items())))

    def __eq__(self, other):
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self.space == other.space and dict(self.focal) == dict(other.focal)

    @classmethod
    def from_labels(cls, space, focal: Mapping) -> MassFunction:
        space = space if isinstance(space, OutcomeSpace) else OutcomeSpace(tuple(space))
        merged: dict[int, object] = {}
        for labels, mass in focal.items():
            event = space.event(labels)
            merged[event] = to_rational(merged.get(event, 0)) + to_rational(mass)
        return cls(space, merged)


def bel(mass: MassFunction, event: int) -> Fraction:
    return sum((m for e, m in mass.focal.items() if e & ~event == 0), ZERO)


def pl(mass: MassFunction, event: int) -> Fraction:
    return sum((m for e, m in mass.focal.items() if e & event), ZERO)


def belief_function(mass: MassFunction) -> SetFunction:
    n = len(mass.space)
    m = [ZERO] * (1 << n)
    for e, v in mass.focal.items():
        m[e] = v
    arr, den = _kernels.scale(m, terms=1 << n)
    return SetFunction(mass.space, tuple(_kernels.unscale(_kernels.zeta(arr, n), den)))


def necessity_function(dist: PossibilityDistribution) -> SetFunction:
    n = len(dist.space)
    return SetFunction(dist.space, tuple(necessity_measure(dist, a) for a in range(1 << n)))


def lower_prob_function(constraints: CredalConstraints, cap: Optional[int] = None):
    """Lower probability of every event, or ``INFEASIBLE``."""
    n = len(constraints.space)
    _check_cap(n, cap, LOWER_PROB_CAP, "lower_prob_function")
    if not is_feasible(constraints):
        return INFEASIBLE
    values = [ZERO] * (1 << n)
    values[-1] = ONE
    for event in range(1, (1 << n) - 1):
        values[event] = lp_lower(constraints, event)
    return SetFunction(constraints.space, tuple(values))


class Violation(NamedTuple):
    """Events ``a``, ``b`` with ``f(a) + f(b) > f(a|b) + f(a&b)``."""

    a: int
    b: int
    lhs: Fraction
    rhs: Fraction


def two_monotone_violation(f: SetFunction, cap: Optional[int] = None) -> Optional[Violation]:
    """First violating pair in lexicographic bitmask order, or ``None``."""
    n = len(f.space)
    _check_cap(n, cap, MONOTONE_CAP, "2-monotonicity scan")
    arr, _ = _kernels.scale(f.values, terms=4)
    a, b = _kernels.first_2mon_violation(arr)
    if a < 0:
        return None
    return Violation(a, b, f(a) + f(b), f(a | b) + f(a & b))


def is_2_monotone(f: SetFunction, cap: Optional[int] = None) -> bool:
    return two_monotone_violation(f, cap) is None


def mobius_transform(f: SetFunction) -> dict[int, Fraction]:
    """Signed masses ``m(E) = sum_{B <= E} (-1)^{|E - B|} f(B)``; zeros omitted."""
    n = len(f.space)
    arr, den = _kernels.scale(f.values, terms=1 << n)
    masses = _kernels.unscale(_kernels.mobius(arr, n), den)
    return {e: m for e, m in enumerate(masses) if m}


def is_infinitely_monotone(f: SetFunction) -> bool:
    """True iff ``f`` is a belief function (non-negative Möbius masses)."""
    return f(0) == ZERO and f(f.space.full) == ONE and all(
        m > 0 for m in mobius_transform(f).values()
    )
