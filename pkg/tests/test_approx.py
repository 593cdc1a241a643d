import itertools

import pytest
from hypothesis import given, strategies as st

from adbinterp.approx import (
    ApproximationRegion,
    Side,
    approximation_degree,
    estimate_value,
    inverse_degree,
    vector_degree,
)
from adbinterp.errors import EmptyInput, ZeroRadiusSide

coords = st.floats(-1e3, 1e3, allow_nan=False)
radii = st.floats(1e-3, 1e2, allow_nan=False)


@st.composite
def regions(draw):
    return ApproximationRegion(draw(coords), draw(radii), draw(radii))


@st.composite
def region_and_point(draw):
    r = draw(regions())
    t = draw(st.floats(0, 1))
    return r, r.low + t * (r.high - r.low)


def test_degree_examples():
    assert approximation_degree(ApproximationRegion(-18, 2, 2), -17.8) == pytest.approx(0.9)
    one_sided = ApproximationRegion(-20, 0, 2)
    assert approximation_degree(one_sided, -20) == 1.0
    assert approximation_degree(one_sided, -18) == 0.0
    assert approximation_degree(one_sided, -19.5) == 0.75


def test_outside_region_is_not_approximate():
    r = ApproximationRegion(0, 1, 2)
    assert approximation_degree(r, -1.0001) is None
    assert approximation_degree(r, 2.0001) is None
    assert approximation_degree(r, -1) == 0.0
    assert approximation_degree(r, 2) == 0.0


def test_zero_radius_side_only_admits_center():
    r = ApproximationRegion(5, 0, 1)
    assert approximation_degree(r, 5) == 1.0
    assert approximation_degree(r, 4.999) is None


@pytest.mark.parametrize("left,right", [(-1, 1), (0, 0), (float("nan"), 1)])
def test_invalid_regions(left, right):
    with pytest.raises(ValueError):
        ApproximationRegion(0, left, right)


def test_from_bounds_keeps_exact_bounds():
    r = ApproximationRegion.from_bounds(0.1, 0.7, 1.3)
    assert r.low == 0.1 and r.high == 1.3
    assert approximation_degree(r, 0.1) == 0.0
    assert approximation_degree(r, 1.3) == 0.0


def test_inverse_examples():
    r = ApproximationRegion(0, 2, 2)
    assert inverse_degree(r, 1.0, Side.LEFT) == 0
    assert inverse_degree(r, 0.5, Side.RIGHT) == 1
    assert inverse_degree(r, 0.5, "left") == -1


def test_inverse_on_zero_radius_side():
    r = ApproximationRegion(0, 0, 2)
    assert inverse_degree(r, 1.0, Side.LEFT) == 0
    with pytest.raises(ZeroRadiusSide):
        inverse_degree(r, 0.5, Side.LEFT)


def test_inverse_rejects_out_of_range_degree():
    with pytest.raises(ValueError):
        inverse_degree(ApproximationRegion(0, 1, 1), 1.5, Side.LEFT)


@given(regions())
def test_center_and_boundaries(r):
    assert approximation_degree(r, r.center) == 1.0
    assert approximation_degree(r, r.low) == 0.0
    assert approximation_degree(r, r.high) == 0.0


@given(region_and_point())
def test_degree_in_unit_interval_and_round_trips(rp):
    r, x = rp
    d = approximation_degree(r, x)
    assert 0.0 <= d <= 1.0
    assert inverse_degree(r, d, r.side_of(x)) == pytest.approx(x, abs=1e-12)


@given(regions(), st.floats(0, 1), st.floats(0, 1))
def test_monotone_on_each_side(r, s, t):
    a, b = sorted((s, t))
    left_a, left_b = r.low + a * r.left_radius, r.low + b * r.left_radius
    assert approximation_degree(r, left_a) <= approximation_degree(r, left_b)
    right_a, right_b = r.center + a * r.right_radius, r.center + b * r.right_radius
    assert approximation_degree(r, right_a) >= approximation_degree(r, right_b)


def test_vector_degree_examples():
    assert vector_degree([1.0, 1.0]) == 1.0
    assert vector_degree([0.9, 0.75]) == 0.75
    assert vector_degree([0.9, None]) is None
    with pytest.raises(EmptyInput):
        vector_degree([])


@given(st.lists(st.floats(0, 1), min_size=1, max_size=6), st.integers(0, 5), st.floats(0, 1))
def test_vector_degree_permutation_invariant_and_monotone(ds, k, bump):
    base = vector_degree(ds)
    for perm in itertools.islice(itertools.permutations(ds), 24):
        assert vector_degree(perm) == base
    k %= len(ds)
    raised = list(ds)
    raised[k] = max(raised[k], bump)
    assert vector_degree(raised) >= base


class TestEstimateValue:
    x_region = ApproximationRegion(0.0, 2.0, 2.0)
    y_region = ApproximationRegion(10.0, 4.0, 4.0)

    def test_increasing_reference_picks_lower_branch_on_the_left(self):
        # x* < x' < x0 with y* < y0: rising trend, answer below y0
        y = estimate_value(self.x_region, self.y_region, -1.0, reference=(-2.0, 6.0))
        assert y == 8.0

    def test_decreasing_reference_picks_upper_branch(self):
        y = estimate_value(self.x_region, self.y_region, -1.0, reference=(-2.0, 14.0))
        assert y == 12.0

    def test_right_side_reference(self):
        y = estimate_value(self.x_region, self.y_region, 0.5, reference=(2.0, 6.0))
        assert y == pytest.approx(9.0)

    def test_flat_reference_returns_base(self):
        assert estimate_value(self.x_region, self.y_region, 1.0, reference=(2.0, 10.0)) == 10.0

    def test_fallbacks(self):
        assert estimate_value(self.x_region, self.y_region, 1.0) == 10.0
        assert estimate_value(self.x_region, self.y_region, 1.0, fallback="base") == 10.0
        lopsided = ApproximationRegion(10.0, 4.0, 0.0)
        assert estimate_value(self.x_region, lopsided, 1.0) == pytest.approx((8.0 + 10.0) / 2)

    def test_rejects_reference_on_wrong_side(self):
        with pytest.raises(ValueError):
            estimate_value(self.x_region, self.y_region, -1.0, reference=(1.0, 6.0))

    def test_rejects_non_approximate_query(self):
        with pytest.raises(ValueError):
            estimate_value(self.x_region, self.y_region, 3.0)
