"""Lower probability of the intersection of two credal sets given by
random sets, via minimisation over joint mass matrices.

A joint mass matrix ``q`` has rows indexed by the focal sets of the first
random set and columns by those of the second. Its marginals are fixed and
cells whose focal sets do not intersect carry no mass. The lower
probability of ``A`` is the least mass such a matrix can put on cells whose
intersection lies inside ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._simplex import solve
from .core import ONE, ZERO, Cloud, PossibilityDistribution, to_possibility_pair
from .credal import INFEASIBLE, MassFunction


@dataclass(frozen=True)
class JointMassProblem:
    rows: tuple[tuple[int, Fraction], ...]
    cols: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_marginals(cls, first: MassFunction, second: MassFunction) -> JointMassProblem:
        if first.space != second.space:
            raise ValueError("random sets live on different spaces")
        return cls(tuple(first.focal.items()), tuple(second.focal.items()))

    @property
    def allowed(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i, (f, _) in enumerate(self.rows)
            for j, (g, _) in enumerate(self.cols)
            if f & g
        ]

    @property
    def forbidden(self) -> set[tuple[int, int]]:
        ok = set(self.allowed)
        return {(i, j) for i in range(len(self.rows)) for j in range(len(self.cols))} - ok


@dataclass(frozen=True)
class TransportResult:
    value: Fraction
    matrix: tuple[tuple[Fraction, ...], ...]


def _solve_transport(problem: JointMassProblem, event: int) -> Optional[TransportResult]:
    cells = problem.allowed
    if not cells:
        return None
    n_r, n_c = len(problem.rows), len(problem.cols)
    A, b = [], []
    for i, (_, mass) in enumerate(problem.rows):
        A.append([1 if ci == i else 0 for ci, _ in cells])
        b.append(mass)
    for j, (_, mass) in enumerate(problem.cols):
        A.append([1 if cj == j else 0 for _, cj in cells])
        b.append(mass)
    c = [
        1 if problem.rows[i][0] & problem.cols[j][0] & ~event == 0 else 0
        for i, j in cells
    ]
    res = solve(c, A, b)
    if not res.feasible:
        return None
    matrix = [[ZERO] * n_c for _ in range(n_r)]
    for (i, j), v in zip(cells, res.x):
        matrix[i][j] = v
    return TransportResult(res.value, tuple(tuple(r) for r in matrix))


def transport_lower_bel(first: MassFunction, second: MassFunction, event: int):
    """Exact lower probability of ``event`` over both credal sets, or ``INFEASIBLE``."""
    res = _solve_transport(JointMassProblem.from_marginals(first, second), event)
    return INFEASIBLE if res is None else res.value


def transport_witness(first: MassFunction, second: MassFunction, event: int) -> Optional[TransportResult]:
    """Optimal joint mass matrix (rows/cols in focal-set order), or ``None``."""
    return _solve_transport(JointMassProblem.from_marginals(first, second), event)


def possibility_to_randomset(dist: PossibilityDistribution) -> MassFunction:
    """Nested focal sets ``{pi > g}`` with masses equal to the level gaps."""
    levels = sorted(set(dist.pi) | {ZERO})
    focal: dict[int, Fraction] = {}
    for g, nxt in zip(levels, levels[1:]):
        cut = sum(1 << i for i, p in enumerate(dist.pi) if p > g)
        focal[cut] = nxt - g
    return MassFunction(dist.space, focal)


def cloud_lower_via_transport(cloud: Cloud, event: int):
    upper, lower_c = to_possibility_pair(cloud)
    return transport_lower_bel(possibility_to_randomset(upper), possibility_to_randomset(lower_c), event)


def cloud_upper_via_transport(cloud: Cloud, event: int):
    low = cloud_lower_via_transport(cloud, cloud.space.complement(event))
    return INFEASIBLE if low is INFEASIBLE else ONE - low
