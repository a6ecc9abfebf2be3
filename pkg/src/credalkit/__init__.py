"""Exact imprecise-probability toolkit: clouds, possibility distributions,
generalized p-boxes, probability intervals and random sets."""

from .core import (
    Cloud,
    CredalConstraints,
    OutcomeSpace,
    PossibilityDistribution,
    Row,
    cloud_constraints,
    level_values,
    lower_cut,
    mirror,
    necessity_measure,
    possibility_constraints,
    possibility_measure,
    to_possibility_pair,
    to_rational,
    upper_cut,
)
from .credal import (
    INFEASIBLE,
    MassFunction,
    SetFunction,
    bel,
    belief_function,
    is_2_monotone,
    is_feasible,
    is_infinitely_monotone,
    lower_prob_function,
    lp_lower,
    lp_upper,
    mobius_transform,
    necessity_function,
    pl,
)
from .cloudops import (
    GeneralizedPBox,
    cloud_to_genpbox,
    cloud_to_randomset,
    cuts_nested,
    find_2monotone_violation,
    genpbox_constraints,
    genpbox_to_cloud,
    is_comonotonic,
    is_nonempty,
    outer_bounds,
    pair_nonempty,
    tightest_lower_distribution,
)
from .chateauneuf import (
    cloud_lower_via_transport,
    possibility_to_randomset,
    transport_lower_bel,
)
from .intervals import (
    ProbabilityInterval,
    interval_partial_order,
    intervals_to_cloud,
    intervals_to_genpbox,
    linear_extensions,
    md_lower_possibility,
    md_upper_possibility,
    multi_order_intersection,
)
from .continuous import (
    ContinuousCloud,
    IntervalUnion,
    PiecewiseLinear,
    alpha_focal,
    comonotonicity_continuous,
    discretize,
    pbox_focal,
    thin_cloud_cdfs,
)

__version__ = "0.1.0"
