from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from credalkit import (
    ContinuousCloud,
    IntervalUnion,
    PiecewiseLinear,
    alpha_focal,
    comonotonicity_continuous,
    discretize,
    lp_lower,
    pbox_focal,
    thin_cloud_cdfs,
)
from credalkit.continuous import (
    Interval,
    cdf_probability,
    focal_bel_pl,
    mixture,
    pseudo_inverse,
    upper_level_set,
)

Q = Fraction
PL = PiecewiseLinear
ZERO_ON_0_4 = PL([(0, 0), (4, 0)])
TRIANGLE = PL([(0, 0), (2, 1), (4, 0)])

ALIGNED = ContinuousCloud(PL([(0, 0), (1, 0), (2, "1/2"), (3, 0), (4, 0)]), TRIANGLE)
SHIFTED_IN_FLAT = ContinuousCloud(
    PL([(0, 0), ("1/2", 0), (1, "3/10"), ("3/2", 0), (4, 0)]),
    PL([(0, 0), (1, 1), (3, 1), (4, 0)]),
)
CROSSING = ContinuousCloud(PL([(0, 0), (1, 0), (3, "0.4"), (4, 0)]), TRIANGLE)
CUTS = [0, 1, Q(3, 2), 2, Q(5, 2), 3, Q(7, 2), 4]

thin_pi = PL([(0, 0), (1, 1), (2, 0)])
THIN = ContinuousCloud(thin_pi, thin_pi)
FUZZY = ContinuousCloud(PL([(0, 0), (2, 0)]), thin_pi)


def iv(lo, hi, lc=True, hc=True):
    return Interval(Q(lo), Q(hi), lc, hc)


# ------------------------------------------------------------ interval unions

def test_union_merges_and_sorts():
    u = IntervalUnion([iv(2, 3), iv(0, 1, True, False), iv(1, 2, True, False)])
    assert u.parts == (iv(0, 3),)
    assert str(u) == "[0, 3]"


def test_union_keeps_gaps_between_open_ends():
    u = IntervalUnion([iv(0, 1, True, False), iv(1, 2, False, True)])
    assert len(u.parts) == 2
    assert not u.contains(1) and u.contains(Q(1, 2))
    assert u.measure() == 2
    assert str(u) == "[0, 1) U (1, 2]"


def test_union_subset_and_points():
    point = IntervalUnion([iv(1, 1)])
    assert str(point) == "{1}"
    assert point.issubset(IntervalUnion([iv(0, 2)]))
    assert not point.issubset(IntervalUnion([iv(1, 2, False, True)]))
    assert str(IntervalUnion()) == "{}"
    assert IntervalUnion([iv(1, 1, False, True)]).parts == ()


# ------------------------------------------------------------ piecewise linear

def test_piecewise_validation():
    with pytest.raises(ValueError):
        PL([(0, 0)])
    with pytest.raises(ValueError):
        PL([(0, 0), (0, 1)])
    with pytest.raises(ValueError):
        PL([(0, 0), (1, 2)])
    with pytest.raises(ValueError, match="outside the support"):
        TRIANGLE(5)


def test_piecewise_evaluation_and_crossings():
    assert TRIANGLE(1) == Q(1, 2)
    assert TRIANGLE.crossings(Q(1, 4)) == [Q(1, 2), Q(7, 2)]
    assert TRIANGLE.slope_on(Q(0), Q(1)) == Q(1, 2)


def test_cloud_validation():
    with pytest.raises(ValueError, match="delta exceeds pi"):
        ContinuousCloud(TRIANGLE, ZERO_ON_0_4)
    with pytest.raises(ValueError, match="same support"):
        ContinuousCloud(PL([(0, 0), (2, 0)]), TRIANGLE)


# ------------------------------------------------------------ focal sets

def test_focal_on_fuzzy_triangle():
    assert alpha_focal(FUZZY, Q(1, 2)).parts == (iv(Q(1, 2), Q(3, 2)),)
    assert alpha_focal(FUZZY, 1).parts == (iv(1, 1),)


def test_focal_on_thin_cloud_is_empty():
    for a in (Q(1, 4), Q(1, 2), 1):
        assert not alpha_focal(THIN, a)


def test_focal_excludes_where_delta_reaches_alpha():
    e = alpha_focal(ALIGNED, Q(2, 5))
    assert e.parts == (iv(Q(4, 5), Q(9, 5), True, False), iv(Q(11, 5), Q(16, 5), False, True))
    # with a lower distribution the focal sets need not be nested
    assert not alpha_focal(ALIGNED, Q(3, 5)).issubset(e)


def test_focal_alpha_range():
    with pytest.raises(ValueError):
        alpha_focal(FUZZY, 0)


@st.composite
def fuzzy_shapes(draw):
    k = draw(st.integers(2, 5))
    ys = [Q(draw(st.integers(0, 8)), 8) for _ in range(k)]
    ys[draw(st.integers(0, k - 1))] = Q(1)
    xs = range(k)
    return ContinuousCloud(PL([(0, 0), (k - 1, 0)]), PL(list(zip(xs, ys))))


@given(fuzzy_shapes(), st.integers(1, 10), st.integers(1, 10))
def test_fuzzy_focal_sets_are_nested(cc, a, b):
    lo, hi = sorted((Q(a, 10), Q(b, 10)))
    assert alpha_focal(cc, hi).issubset(alpha_focal(cc, lo))
    assert alpha_focal(cc, lo).parts == upper_level_set(cc.pi, lo, strict=False).parts


@given(fuzzy_shapes(), st.integers(1, 10))
def test_focal_set_matches_pointwise_predicate(cc, a):
    alpha = Q(a, 10)
    e = alpha_focal(cc, alpha)
    lo, hi = cc.support
    for k in range(41):
        t = lo + (hi - lo) * Q(k, 40)
        assert e.contains(t) == (cc.pi(t) >= alpha and cc.delta(t) < alpha)


# ------------------------------------------------------------ discretization

def test_single_level_is_vacuous():
    for cc in (ALIGNED, CROSSING, THIN):
        out = discretize(cc, 1).outer_cloud()
        assert set(out.pi) == {1} and set(out.delta) == {0}


def test_discretize_rejects_bad_levels():
    for n in (0, -2, 1.5):
        with pytest.raises(ValueError):
            discretize(FUZZY, n)


def test_fuzzy_triangle_cells():
    d = discretize(FUZZY, 4)
    assert d.space.elements[:3] == ("[0;1/4)", "{1/4}", "(1/4;1/2)")
    assert d.outer_pi[:3] == (Q(1, 4), Q(1, 4), Q(1, 2))
    assert d.inner_pi[:3] == (0, Q(1, 4), Q(1, 4))
    mid = d.space.index("{1}")
    assert d.outer_pi[mid] == d.inner_pi[mid] == 1
    assert set(d.outer_delta) == set(d.inner_delta) == {0}


def test_event_must_align_with_cells():
    d = discretize(CROSSING, 4)
    with pytest.raises(ValueError, match="straddles"):
        d.event(IntervalUnion([iv(Q(1, 3), 1)]))
    with pytest.raises(ValueError, match="side"):
        d.constraints("middle")


def test_cells_partition_the_support():
    d = discretize(CROSSING, 8, CUTS)
    whole = IntervalUnion(d.cells)
    assert whole.parts == (iv(0, 4),)
    assert sum((c.hi - c.lo for c in d.cells), Q(0)) == 4
    assert d.event(whole) == d.space.full


@pytest.mark.parametrize(
    "event",
    [IntervalUnion([iv(1, 3)]), IntervalUnion([iv(Q(3, 2), Q(5, 2))]), IntervalUnion([iv(0, Q(3, 2))])],
    ids=str,
)
def test_inner_and_outer_bracket_and_tighten(event):
    inner, outer = [], []
    for n in (4, 8, 16):
        d = discretize(CROSSING, n, CUTS)
        inner.append(d.lower("inner", event))
        outer.append(d.lower("outer", event))
    assert all(o <= i for o, i in zip(outer, inner))
    assert all(a >= b for a, b in zip(inner, inner[1:]))
    assert all(a <= b for a, b in zip(outer, outer[1:]))
    gaps = [i - o for i, o in zip(inner, outer)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_outer_lower_probability_of_known_event():
    ev = IntervalUnion([iv(1, 3)])
    got = [discretize(CROSSING, n, CUTS).lower("inner", ev) for n in (4, 8, 16, 32)]
    assert got == [Q(3, 4), Q(5, 8), Q(9, 16), Q(17, 32)]
    assert discretize(CROSSING, 16, CUTS).lower("outer", ev) == Q(1, 2)


# ------------------------------------------------------------ p-boxes

UNIFORM_HIGH = PL([(0, Q(1, 4)), (Q(3, 4), 1), (Q(5, 4), 1)])
UNIFORM_LOW = PL([(0, 0), (Q(1, 4), 0), (Q(5, 4), 1)])


def test_pbox_focal_identity():
    ident = PL([(0, 0), (1, 1)])
    assert pbox_focal(ident, ident, Q(3, 10)) == iv(Q(3, 10), Q(3, 10))


def test_pbox_focal_uniform_band():
    assert pbox_focal(UNIFORM_LOW, UNIFORM_HIGH, Q(1, 2)) == iv(Q(1, 4), Q(3, 4))
    # below the first value of the upper bound the inverse sits at the support's start
    assert pbox_focal(UNIFORM_LOW, UNIFORM_HIGH, Q(1, 8)).lo == 0


def test_pseudo_inverse_on_flat_span():
    f = PL([(0, 0), (1, Q(1, 2)), (2, Q(1, 2)), (3, 1)])
    assert pseudo_inverse(f, Q(1, 2)) == 1
    assert pseudo_inverse(f, Q(3, 4)) == Q(5, 2)


def test_pbox_checks():
    with pytest.raises(ValueError, match="exceeds"):
        pbox_focal(UNIFORM_HIGH, UNIFORM_LOW, Q(1, 2))
    with pytest.raises(ValueError, match="nondecreasing"):
        pbox_focal(TRIANGLE, TRIANGLE, Q(1, 2))
    with pytest.raises(ValueError):
        pbox_focal(UNIFORM_LOW, UNIFORM_HIGH, 0)


def test_focal_belief_reproduces_bounds_at_breakpoints():
    for t in sorted(set(UNIFORM_LOW.xs) | set(UNIFORM_HIGH.xs)):
        assert focal_bel_pl(UNIFORM_LOW, UNIFORM_HIGH, t) == (UNIFORM_LOW(t), UNIFORM_HIGH(t))


@st.composite
def pboxes(draw):
    k = draw(st.integers(2, 5))
    low = sorted(Q(draw(st.integers(0, 12)), 12) for _ in range(k))
    high = sorted(Q(draw(st.integers(0, 12)), 12) for _ in range(k))
    low[-1] = high[-1] = Q(1)
    high = [max(a, b) for a, b in zip(low, high)]
    xs = [Q(x) for x in range(k)]
    return PL(list(zip(xs, low))), PL(list(zip(xs, high)))


@given(pboxes(), st.integers(0, 40))
def test_focal_belief_matches_bounds_everywhere(box, k):
    flow, fhigh = box
    t = flow.xs[-1] * Q(k, 40)
    assert focal_bel_pl(flow, fhigh, t) == (flow(t), fhigh(t))


@given(pboxes(), st.integers(1, 20))
def test_focal_interval_is_ordered(box, a):
    flow, fhigh = box
    f = pbox_focal(flow, fhigh, Q(a, 20))
    assert f.lo <= f.hi


# ------------------------------------------------------------ thin clouds

def test_thin_triangle_cdfs():
    plus, minus = thin_cloud_cdfs(thin_pi, unimodal=True)
    for k in range(11):
        t = Q(k, 10)
        assert plus(t) == thin_pi(t)
        assert minus(t) == 0
        assert plus(1 + t) == 1
        assert minus(1 + t) == 1 - thin_pi(1 + t)
    assert mixture(plus, minus, 0).points == minus.points


def test_unimodal_flag_rejects_two_bumps():
    two = PL([(0, 0), (1, 1), (2, 0), (3, 1), (4, 0)])
    with pytest.raises(ValueError, match="unimodal"):
        thin_cloud_cdfs(two, unimodal=True)
    plus, minus = thin_cloud_cdfs(two)
    assert plus(2) == 1 and minus(2) == 0


@given(st.integers(0, 8))
def test_mixture_meets_thin_constraints(w):
    plus, minus = thin_cloud_cdfs(thin_pi, unimodal=True)
    mix = mixture(plus, minus, Q(w, 8))
    for k in range(10):
        alpha = Q(k, 10)
        cut = upper_level_set(thin_pi, alpha)
        assert cdf_probability(mix, cut) == 1 - alpha
        weak = upper_level_set(thin_pi, alpha, strict=False)
        assert cdf_probability(mix, weak) == 1 - alpha


def test_non_unimodal_thin_cloud_still_feasible():
    two = PL([(0, 0), (1, 1), (2, Q(1, 2)), (3, Q(3, 4)), (4, 0)])
    plus, minus = thin_cloud_cdfs(two)
    for cdf in (plus, minus, mixture(plus, minus, Q(1, 3))):
        for k in range(10):
            alpha = Q(k, 10)
            assert cdf_probability(cdf, upper_level_set(two, alpha)) == 1 - alpha


# ------------------------------------------------------------ comonotonicity

def test_comonotonicity_classes():
    assert comonotonicity_continuous(ALIGNED) == "comonotonic"
    assert comonotonicity_continuous(SHIFTED_IN_FLAT) == "weakly_comonotonic"
    assert comonotonicity_continuous(CROSSING) == "neither"
    assert comonotonicity_continuous(ContinuousCloud(ZERO_ON_0_4, TRIANGLE)) == "comonotonic"


def test_thin_cloud_is_comonotonic():
    assert comonotonicity_continuous(THIN) == "comonotonic"


@given(fuzzy_shapes())
def test_fuzzy_clouds_are_comonotonic(cc):
    assert comonotonicity_continuous(cc) == "comonotonic"


def test_discretized_crossing_cloud_lower_is_feasible():
    d = discretize(CROSSING, 8, CUTS)
    assert lp_lower(d.constraints("outer"), 0) == 0
