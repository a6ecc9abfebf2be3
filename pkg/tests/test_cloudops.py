from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from credalkit import (
    INFEASIBLE,
    Cloud,
    GeneralizedPBox,
    PossibilityDistribution,
    bel,
    cloud_constraints,
    cloud_to_genpbox,
    cloud_to_randomset,
    cuts_nested,
    find_2monotone_violation,
    genpbox_constraints,
    genpbox_to_cloud,
    is_comonotonic,
    is_feasible,
    is_nonempty,
    lp_lower,
    lp_upper,
    outer_bounds,
    pair_nonempty,
    possibility_constraints,
    tightest_lower_distribution,
)
from credalkit.cloudops import overlapping_cut_pairs

from generators import (
    comonotonic_cloud,
    labels,
    near_thin_cloud,
    overlapping_cloud,
    random_cloud,
    random_possibility,
    thin_cloud,
)
from oracles import brute_nonempty, brute_two_monotone

Q = Fraction


def _lower_all(cons, n):
    return [lp_lower(cons, a) for a in range(1 << n)]


# ---------------------------------------------------------------- emptiness

def test_thin_cloud_is_empty():
    c = Cloud(("a", "b", "c"), (0, "1/2", 1), (0, "1/2", 1))
    assert not is_nonempty(c)
    assert not is_feasible(cloud_constraints(c))


def test_vacuous_and_six_cloud_nonempty(six_cloud):
    assert is_nonempty(Cloud.vacuous(("a", "b")))
    assert is_nonempty(six_cloud)


@given(st.randoms(use_true_random=False), st.integers(1, 6), st.sampled_from(["random", "thin", "near"]))
def test_prefix_scan_matches_lp_and_brute_force(rng, n, family):
    if family == "thin" or (family == "near" and n == 1):
        c = thin_cloud(rng, max(n, 2))
    elif family == "near":
        c = near_thin_cloud(rng, n)
    else:
        c = random_cloud(rng, n)
    ok = is_nonempty(c)
    assert ok == is_feasible(cloud_constraints(c))
    assert ok == brute_nonempty(c.pi, c.delta)


@given(st.randoms(use_true_random=False), st.integers(1, 5))
def test_pair_nonempty_matches_lp(rng, n):
    p1, p2 = random_possibility(rng, n), random_possibility(rng, n)
    cons = possibility_constraints(p1) + possibility_constraints(p2)
    assert pair_nonempty(p1, p2) == is_feasible(cons)
    normalised = [min(a, b) for a, b in zip(p1.pi, p2.pi)]
    if max(normalised) == 1:
        assert pair_nonempty(p1, p2)


def test_pair_nonempty_all_ones():
    ones = PossibilityDistribution(("a", "b"), (1, 1))
    assert pair_nonempty(ones, ones)


# ---------------------------------------------------------------- tightest lower distribution

def test_tightest_lower_distribution_unique_probability():
    d = PossibilityDistribution(("a", "b", "c"), ("1/4", "1/2", "1"))
    c = tightest_lower_distribution(d, ["a", "b", "c"])
    assert c.delta == (0, Q(1, 4), Q(1, 2))
    cons = cloud_constraints(c)
    assert [lp_lower(cons, 1 << i) for i in range(3)] == [Q(1, 4), Q(1, 4), Q(1, 2)]
    assert all(lp_lower(cons, a) == lp_upper(cons, a) for a in range(8))


def test_tightest_lower_distribution_rejects_bad_order():
    d = PossibilityDistribution(("a", "b"), ("1", "1/2"))
    with pytest.raises(ValueError):
        tightest_lower_distribution(d, ["a", "b"])
    with pytest.raises(ValueError):
        tightest_lower_distribution(d, ["a"])


def test_tightest_lower_distribution_flat():
    d = PossibilityDistribution(("a", "b", "c"), (1, 1, 1))
    c = tightest_lower_distribution(d, ["a", "b", "c"])
    assert c.delta == (0, 1, 1)
    # only the point mass on the first element survives
    cons = cloud_constraints(c)
    assert lp_lower(cons, 1) == 1


@given(st.randoms(use_true_random=False), st.integers(2, 5))
def test_delta_dominance(rng, n):
    values = sorted(rng.sample(range(1, 8), n - 1)) + [8]
    order = list(labels(n))
    rng.shuffle(order)
    d = PossibilityDistribution(labels(n), {x: Q(v, 8) for x, v in zip(order, values)})
    tight = tightest_lower_distribution(d, order)
    cons = cloud_constraints(tight)
    assert all(lp_lower(cons, a) == lp_upper(cons, a) for a in range(1 << n))
    k = rng.randrange(n)
    below = list(tight.delta)
    below[k] = Q(rng.randint(0, int(below[k] * 8)), 8)
    assert is_nonempty(Cloud(d.space, below, d.pi))
    above = list(tight.delta)
    bumpable = [i for i in range(n) if above[i] < d.pi[i]]
    if bumpable:
        i = rng.choice(bumpable)
        above[i] = min(d.pi[i], above[i] + Q(1, 16))
        if min(above) == 0:
            assert not is_nonempty(Cloud(d.space, above, d.pi))


# ---------------------------------------------------------------- comonotonicity

def test_comonotonic_examples(six_cloud, crossing_cloud):
    assert is_comonotonic(six_cloud) and cuts_nested(six_cloud)
    assert not is_comonotonic(crossing_cloud) and not cuts_nested(crossing_cloud)
    fuzzy = Cloud(("a", "b", "c"), (0, 0, 0), ("1/3", 1, "1/2"))
    assert is_comonotonic(fuzzy) and cuts_nested(fuzzy)


@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_comonotonic_iff_nested(rng, n):
    c = random_cloud(rng, n)
    assert is_comonotonic(c) == cuts_nested(c)


# ---------------------------------------------------------------- generalized p-boxes

def test_six_cloud_genpbox_table(six_cloud):
    g = cloud_to_genpbox(six_cloud)
    e = six_cloud.space.elements
    assert dict(zip(e, g.fhigh)) == {"u": Q(3, 4), "v": 1, "w": 1, "x": Q(3, 4), "y": Q(3, 4), "z": Q(1, 2)}
    assert dict(zip(e, g.flow)) == {"u": Q(1, 2), "v": Q(3, 4), "w": 1, "x": Q(1, 2), "y": Q(1, 2), "z": 0}


def test_genpbox_of_noncomonotonic_rejected(crossing_cloud):
    with pytest.raises(ValueError, match="not comonotonic"):
        cloud_to_genpbox(crossing_cloud)


def test_genpbox_validation():
    with pytest.raises(ValueError, match="flow exceeds fhigh"):
        GeneralizedPBox(("a", "b"), (1, 1), ("1/2", 1))
    with pytest.raises(ValueError, match="partition"):
        GeneralizedPBox(("a", "b"), (0, 1), (1, 1), preorder=[["a"]])
    with pytest.raises(ValueError, match="nondecreasing"):
        GeneralizedPBox(("a", "b"), (0, 1), (1, 1), preorder=[["b"], ["a"]])


def test_step_pbox_to_cloud():
    g = GeneralizedPBox(("a", "b", "c"), ("1/4", "1/2", 1), ("1/4", "1/2", 1))
    c = genpbox_to_cloud(g)
    assert c.delta == (0, Q(1, 4), Q(1, 2))
    assert c.pi == (Q(1, 4), Q(1, 2), 1)


def test_vacuous_cloud_genpbox_credal_equality():
    c = Cloud.vacuous(("a", "b", "c"))
    g = cloud_to_genpbox(c)
    assert g.fhigh == (1, 1, 1)
    cons, gcons = cloud_constraints(c), genpbox_constraints(g)
    assert _lower_all(cons, 3) == _lower_all(gcons, 3)


@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_genpbox_round_trip_preserves_credal_set(rng, n):
    c = comonotonic_cloud(rng, n)
    if not is_nonempty(c):
        with pytest.raises(ValueError, match="empty"):
            cloud_to_genpbox(c)
        return
    g = cloud_to_genpbox(c)
    back = genpbox_to_cloud(g)
    assert is_comonotonic(back)
    ref = _lower_all(cloud_constraints(c), n)
    assert _lower_all(genpbox_constraints(g), n) == ref
    assert _lower_all(cloud_constraints(back), n) == ref


# ---------------------------------------------------------------- random sets

def test_six_cloud_random_set(six_cloud):
    s = six_cloud.space
    m = cloud_to_randomset(six_cloud)
    assert dict(m.focal) == {
        s.event("y,z"): Q(1, 2),
        s.event("u,v,x,y"): Q(1, 4),
        s.event("v,w"): Q(1, 4),
    }


def test_vacuous_random_set():
    m = cloud_to_randomset(Cloud.vacuous(("a", "b")))
    assert dict(m.focal) == {0b11: 1}


def test_empty_cloud_random_set_signals():
    with pytest.raises(ValueError, match="empty"):
        cloud_to_randomset(Cloud(("a", "b", "c"), (0, "1/2", 1), (0, "1/2", 1)))


def test_crossing_cloud_random_set_is_strictly_inner(crossing_cloud):
    m = cloud_to_randomset(crossing_cloud)
    cons = cloud_constraints(crossing_cloud)
    gaps = [bel(m, a) - lp_lower(cons, a) for a in range(32)]
    assert min(gaps) >= 0 and max(gaps) > 0


@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_no_empty_focal_set_iff_nonempty(rng, n):
    c = random_cloud(rng, n)
    try:
        cloud_to_randomset(c)
        built = True
    except ValueError:
        built = False
    assert built == is_nonempty(c)


@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_comonotonic_random_set_is_exact(rng, n):
    c = comonotonic_cloud(rng, n)
    if not is_nonempty(c):
        return
    m = cloud_to_randomset(c)
    cons = cloud_constraints(c)
    assert all(bel(m, a) == lp_lower(cons, a) for a in range(1 << n))


@given(st.randoms(use_true_random=False), st.integers(2, 5))
def test_random_set_is_inner_approximation(rng, n):
    c = random_cloud(rng, n)
    if not is_nonempty(c):
        return
    m = cloud_to_randomset(c)
    cons = cloud_constraints(c)
    assert all(bel(m, a) >= lp_lower(cons, a) for a in range(1 << n))


# ---------------------------------------------------------------- outer bounds

def test_outer_bounds_whole_space(six_cloud):
    assert outer_bounds(six_cloud, six_cloud.space.full) == (1, 1)


@pytest.mark.parametrize("g1, g2", [(Q(1, 4), Q(1, 2)), (Q(1, 8), Q(3, 4)), (Q(1, 3), Q(2, 3))])
def test_outer_bound_can_be_trivial(g1, g2):
    c = Cloud(("a", "b", "c", "d"), (g2, 0, g1, 0), (1, 1, g2, g1))
    event = c.space.event("b,c")
    lo, _ = outer_bounds(c, event)
    assert lo == 0
    assert lp_lower(cloud_constraints(c), event) == g2 - g1


@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_outer_bounds_sandwich(rng, n):
    c = random_cloud(rng, n)
    cons = cloud_constraints(c)
    if not is_nonempty(c):
        return
    for a in range(1 << n):
        lo, hi = outer_bounds(c, a)
        assert lo <= lp_lower(cons, a) <= lp_upper(cons, a) <= hi


# ---------------------------------------------------------------- 2-monotonicity

def test_crossing_cloud_violation(crossing_cloud):
    s = crossing_cloud.space
    v = find_2monotone_violation(crossing_cloud)
    assert (v.a, v.b) == (s.event("v,w"), s.event("v,y,z"))
    assert (v.lhs, v.rhs) == (Q(3, 4), Q(1, 2))


def test_no_violation_for_vacuous_and_comonotonic(six_cloud):
    assert find_2monotone_violation(Cloud.vacuous(("a", "b", "c"))) is None
    assert find_2monotone_violation(six_cloud) is None


def test_violation_on_empty_cloud_raises():
    with pytest.raises(ValueError):
        find_2monotone_violation(Cloud(("a", "b", "c"), (0, "1/2", 1), (0, "1/2", 1)))


@given(st.randoms(use_true_random=False), st.integers(4, 5))
def test_violation_reported_iff_not_two_monotone(rng, n):
    c = overlapping_cloud(rng, n)
    cons = cloud_constraints(c)
    values = [lp_lower(cons, e) for e in range(1 << n)]
    v = find_2monotone_violation(c)
    assert (v is None) == brute_two_monotone(values)
    if v is not None:
        assert values[v.a] + values[v.b] == v.lhs > v.rhs == values[v.a | v.b] + values[v.a & v.b]


@given(st.randoms(use_true_random=False), st.integers(4, 6))
def test_overlapping_cuts_leave_strict_inner_gap(rng, n):
    c = overlapping_cloud(rng, n)
    cons = cloud_constraints(c)
    m = cloud_to_randomset(c)
    gaps = [bel(m, e) - lp_lower(cons, e) for e in range(1 << n)]
    assert min(gaps) >= 0 < max(gaps)


# overlapping, non-nested, non-covering cuts, yet a 2-monotone lower probability:
# forced mass on the intersection B & ~C keeps the constructive pair from failing
OVERLAP_BUT_MONOTONE = [
    (("1", "0", "1/2", "3/4"), ("1/2", "0", "1/4", "0")),
    (("3/4", "1", "1/4", "1/2"), ("1/4", "0", "0", "1/2")),
    (("1", "1/4", "1", "3/4"), ("0", "1/4", "1", "1/2")),
]


@pytest.mark.parametrize("pi, delta", OVERLAP_BUT_MONOTONE)
def test_overlap_alone_does_not_force_a_violation(pi, delta):
    c = Cloud("abcd", delta, pi)
    assert is_nonempty(c) and not is_comonotonic(c)
    assert overlapping_cut_pairs(c)
    cons = cloud_constraints(c)
    b, cut = overlapping_cut_pairs(c)[0]
    assert lp_lower(cons, b & ~cut) > 0
    assert brute_two_monotone([lp_lower(cons, e) for e in range(16)])
    assert find_2monotone_violation(c) is None


@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_comonotonic_clouds_never_violate(rng, n):
    c = comonotonic_cloud(rng, n)
    if is_nonempty(c):
        assert find_2monotone_violation(c) is None
