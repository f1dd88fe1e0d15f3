import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgfp import (DimensionMismatch, DomainError, MetricKind, MetricSpec,
                  OrderKind, OrderSpec, Point, box_space, comparable,
                  distance, leq, point, product_distance, product_leq)
from fgfp.spaces import leq_batch, sample_points

INF = float("inf")

R1 = box_space((-INF,), (INF,))
R2 = box_space((-INF, -INF), (INF, INF))


# ---------------------------------------------------------------------------
# Point

def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        point(float("nan"))
    with pytest.raises(ValueError):
        point(1.0, INF)


def test_point_requires_a_coordinate():
    with pytest.raises(ValueError):
        Point(())


# ---------------------------------------------------------------------------
# distance

def test_distance_1d_l1():
    assert distance(R1, point(-1.0), point(0.0)) == 1.0


def test_distance_identical_points_is_zero():
    space = box_space((-1.0, -1.0), (1.0, 1.0))
    p = point(0.5, -0.5)
    assert distance(space, p, p) == 0.0


def test_distance_weighted_l1_hand_value():
    # weights (2, 3): 2*|0-1| + 3*|0-1| = 5
    space = box_space((-5.0, -5.0), (5.0, 5.0),
                      metric=MetricSpec(MetricKind.WEIGHTED_L1, (2.0, 3.0)))
    assert distance(space, point(0.0, 0.0), point(1.0, 1.0)) == 5.0


def test_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        distance(R1, point(0.0), point(0.0, 1.0))


def test_distance_outside_domain():
    space = box_space((0.0,), (1.0,))
    with pytest.raises(DomainError):
        distance(space, point(2.0), point(0.5))


# ---------------------------------------------------------------------------
# leq / comparable

def test_leq_componentwise_usual_order():
    assert leq(R1, point(-1.0), point(0.0))
    assert not leq(R1, point(0.0), point(-1.0))


def test_leq_discrete_plus_pairs_directional():
    order = OrderSpec(kind=OrderKind.DISCRETE_PLUS_PAIRS,
                      extra_pairs=((point(-1.0), point(0.0)),))
    space = box_space((-1.0,), (0.0,), order=order)
    assert leq(space, point(-1.0), point(0.0))
    assert not leq(space, point(0.0), point(-1.0))
    assert leq(space, point(-0.5), point(-0.5))
    assert not leq(space, point(-0.5), point(0.0))


def test_leq_reflexive_on_samples():
    rng = np.random.default_rng(0)
    for space in (R2, box_space((0.0,), (1.0,), order=OrderSpec(kind=OrderKind.DISCRETE))):
        pts = sample_points(space, 50, rng)
        assert leq_batch(space, pts, pts).all()


def test_comparable_total_order_1d():
    rng = np.random.default_rng(1)
    a, b = sample_points(R1, 2, rng)
    assert comparable(R1, Point(tuple(a)), Point(tuple(b)))


def test_comparable_discrete_distinct_points():
    space = box_space((0.0,), (1.0,), order=OrderSpec(kind=OrderKind.DISCRETE))
    assert not comparable(space, point(0.25), point(0.75))


def test_comparable_2d_antichain():
    assert not comparable(R2, point(0.0, 1.0), point(1.0, 0.0))


def test_transitive_closure_of_listed_pairs():
    order = OrderSpec(kind=OrderKind.DISCRETE_PLUS_PAIRS,
                      extra_pairs=((point(0.0), point(1.0)),
                                   (point(1.0), point(2.0))))
    space = box_space((0.0,), (2.0,), order=order)
    assert leq(space, point(0.0), point(2.0))


def test_listed_pair_cycle_rejected():
    with pytest.raises(ValueError):
        OrderSpec(kind=OrderKind.DISCRETE_PLUS_PAIRS,
                  extra_pairs=((point(0.0), point(1.0)),
                               (point(1.0), point(0.0))))


def test_extra_pairs_only_for_discrete_plus_pairs():
    with pytest.raises(ValueError):
        OrderSpec(kind=OrderKind.COMPONENTWISE,
                  extra_pairs=((point(0.0), point(1.0)),))


# ---------------------------------------------------------------------------
# product space

def test_product_distance_zero_on_equal_pairs():
    p = (point(-1.0), point(1.0))
    assert product_distance(R1, R1, p, p) == 0.0


def test_product_distance_hand_value():
    p = (point(-1.0), point(1.0))
    q = (point(0.0), point(0.0))
    assert product_distance(R1, R1, p, q) == 2.0


def test_product_leq_reverses_second_component():
    p = (point(-1.0), point(1.0))
    q = (point(0.0), point(0.0))
    assert product_leq(R1, R1, p, q)       # -1 <= 0 and 0 <= 1
    assert not product_leq(R1, R1, q, p)   # 0 <= -1 fails


def test_product_leq_reflexive():
    p = (point(0.3), point(-0.7))
    assert product_leq(R1, R1, p, p)


# ---------------------------------------------------------------------------
# sampled axioms

coords = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


@given(a=st.tuples(coords, coords), b=st.tuples(coords, coords),
       c=st.tuples(coords, coords))
@settings(max_examples=80, deadline=None)
def test_metric_axioms_sampled(a, b, c):
    space = box_space((-10.0, -10.0), (10.0, 10.0),
                      metric=MetricSpec(MetricKind.WEIGHTED_L1, (2.0, 0.5)))
    pa, pb, pc = Point(a), Point(b), Point(c)
    assert distance(space, pa, pa) == 0.0
    assert distance(space, pa, pb) == distance(space, pb, pa)
    assert distance(space, pa, pc) <= distance(space, pa, pb) + distance(space, pb, pc) + 1e-12


@given(a=st.tuples(coords, coords), b=st.tuples(coords, coords))
@settings(max_examples=80, deadline=None)
def test_reversed_order_mirrors_componentwise(a, b):
    rev = box_space((-10.0, -10.0), (10.0, 10.0),
                    order=OrderSpec(kind=OrderKind.COMPONENTWISE_REVERSED))
    pa, pb = Point(a), Point(b)
    assert leq(rev, pa, pb) == leq(R2, pb, pa)


@given(a=st.tuples(coords, coords), eps=st.tuples(
    st.floats(-1e-13, 1e-13), st.floats(-1e-13, 1e-13)))
@settings(max_examples=60, deadline=None)
def test_antisymmetry_up_to_slack(a, eps):
    space = box_space((-11.0, -11.0), (11.0, 11.0))
    pa = Point(a)
    pb = Point(tuple(x + e for x, e in zip(a, eps)))
    if leq(space, pa, pb) and leq(space, pb, pa):
        slack_bound = space.dim * space.order.slack
        assert distance(space, pa, pb) <= slack_bound + 1e-15


@given(a=st.tuples(coords, coords), b=st.tuples(coords, coords))
@settings(max_examples=60, deadline=None)
def test_product_ops_agree_with_components(a, b):
    pa, pb = Point(a), Point(b)
    qa, qb = Point(b), Point(a)
    assert product_distance(R2, R2, (pa, pb), (qa, qb)) == \
        distance(R2, pa, qa) + distance(R2, pb, qb)
    assert product_leq(R2, R2, (pa, pb), (qa, qb)) == \
        (leq(R2, pa, qa) and leq(R2, qb, pb))


# ---------------------------------------------------------------------------
# boxes and sampling boxes

def test_sampling_box_derived_for_half_lines():
    X = box_space((-INF,), (0.0,))
    assert X.sampling_box == ((-10.0,), (0.0,))
    Y = box_space((0.0,), (INF,))
    assert Y.sampling_box == ((0.0,), (10.0,))
    full = box_space((-INF,), (INF,))
    assert full.sampling_box == ((-10.0,), (10.0,))


def test_sampling_box_must_sit_inside_the_box():
    with pytest.raises(ValueError):
        box_space((0.0,), (1.0,), sampling_box=((-1.0,), (1.0,)))


def test_invalid_bounds_rejected():
    with pytest.raises(ValueError):
        box_space((1.0,), (0.0,))


def test_weights_must_match_dimension():
    with pytest.raises(DimensionMismatch):
        box_space((0.0, 0.0), (1.0, 1.0),
                  metric=MetricSpec(MetricKind.WEIGHTED_L1, (1.0,)))


def test_weights_must_be_positive():
    with pytest.raises(ValueError):
        MetricSpec(MetricKind.WEIGHTED_L1, (1.0, 0.0))


def test_samples_stay_in_sampling_box():
    space = box_space((-INF,), (0.0,))
    pts = sample_points(space, 200, np.random.default_rng(3))
    assert (pts >= -10.0).all() and (pts <= 0.0).all()
