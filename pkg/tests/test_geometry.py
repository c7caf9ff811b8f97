import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dividerset.curves import circle, ellipse, hypotrochoid, parabola, segment
from dividerset.errors import OutOfDomainError, SingularParameterizationError
from dividerset.geometry import (
    DEG,
    MAX,
    MIN,
    FootKind,
    MetricKind,
    all_feet,
    classify_stationary,
    curvature_derivative,
    find_self_intersections,
    foot_refine,
    metric_distance,
    signed_curvature,
)
from oracles import finite_difference, nearest_sample_distance

coords = st.floats(-1e3, 1e3, allow_nan=False)
points = st.tuples(coords, coords)


@pytest.mark.parametrize("m, expected", [(MetricKind.EUCLIDEAN, 5.0), (MetricKind.MAX_COORDINATE, 4.0),
                                         (MetricKind.ADDITION, 7.0)])
def test_metric_examples(m, expected):
    assert metric_distance((0, 0), (3, 4), m) == expected


def test_metric_parse_aliases():
    assert MetricKind.parse("euclid") is MetricKind.EUCLIDEAN
    assert MetricKind.parse("Chebyshev") is MetricKind.MAX_COORDINATE
    assert MetricKind.parse("add") is MetricKind.ADDITION
    with pytest.raises(ValueError):
        MetricKind.parse("cosine")


@settings(max_examples=150, deadline=None)
@given(a=points, b=points, c=points, m=st.sampled_from(list(MetricKind)))
def test_metric_axioms(a, b, c, m):
    dab = metric_distance(a, b, m)
    assert dab >= 0
    assert dab == metric_distance(b, a, m)
    assert metric_distance(a, a, m) == 0
    assert dab <= metric_distance(a, c, m) + metric_distance(c, b, m) + 1e-9 * (1 + dab)


@settings(max_examples=60, deadline=None)
@given(a=points, b=points)
def test_metric_ordering(a, b):
    # max-coordinate <= euclidean <= addition
    d_inf = metric_distance(a, b, MetricKind.MAX_COORDINATE)
    d_2 = metric_distance(a, b, MetricKind.EUCLIDEAN)
    d_1 = metric_distance(a, b, MetricKind.ADDITION)
    assert d_inf <= d_2 * (1 + 1e-12) and d_2 <= d_1 * (1 + 1e-12)


def test_metric_broadcasts():
    a = np.zeros((4, 2))
    b = np.array([[1, 0], [0, 2], [3, 4], [-1, -1]], dtype=float)
    assert metric_distance(a, b).tolist() == pytest.approx([1, 2, 5, math.sqrt(2)])


def test_curvature_values():
    assert signed_curvature(circle(2.0), 0.3) == pytest.approx(0.5)
    e = ellipse(2, 1)
    assert signed_curvature(e, 0.0) == pytest.approx(2.0)      # a / b^2
    assert signed_curvature(e, math.pi / 2) == pytest.approx(0.25)  # b / a^2
    assert signed_curvature(parabola(0.25), 0.0) == pytest.approx(2.0)
    assert signed_curvature(segment(), 0.4) == 0.0


def test_curvature_derivative_matches_difference(rng):
    h = hypotrochoid()
    t = rng.uniform(0, h.t_hi, 200)
    fd = finite_difference(lambda x: signed_curvature(h, x), t, 1e-4)
    assert np.allclose(curvature_derivative(h, t), fd, rtol=1e-6, atol=1e-8)


def test_singular_parameterization():
    def pos(t):
        t = np.asarray(t, dtype=float)
        return np.stack([t**2, t**3], axis=-1)

    def d1(t):
        t = np.asarray(t, dtype=float)
        return np.stack([2 * t, 3 * t**2], axis=-1)

    c = type(circle())(pos, (d1,), (-1.0, 1.0), False)
    with pytest.raises(SingularParameterizationError):
        signed_curvature(c, 0.0)


def test_ellipse_feet_from_center():
    feet = all_feet(ellipse(2, 1), (0.0, 0.0))
    assert [f.kind for f in feet] == [FootKind.LOCAL_MIN] * 2 + [FootKind.LOCAL_MAX] * 2
    assert [f.distance for f in feet] == pytest.approx([1.0, 1.0, 2.0, 2.0])
    assert sorted(f.t for f in feet[:2]) == pytest.approx([math.pi / 2, 3 * math.pi / 2])


def test_ellipse_feet_frozen():
    feet = all_feet(ellipse(2, 1), (0.5, 0.2))
    got = [(round(f.t, 10), round(f.distance, 10), f.kind) for f in feet]
    assert got == [
        (1.2540453312, 0.7602619863, FootKind.LOCAL_MIN),
        (5.0795573051, 1.1541135221, FootKind.LOCAL_MIN),
        (6.1827627806, 1.5198767232, FootKind.LOCAL_MAX),
        (3.1915978512, 2.5099797682, FootKind.LOCAL_MAX),
    ]


def test_nearest_foot_matches_sampling(preset, rng):
    pts = rng.uniform(-3, 3, size=(15, 2))
    for p in pts:
        feet = all_feet(preset, p)
        best = min(f.distance for f in feet)
        assert best == pytest.approx(nearest_sample_distance(preset, p), abs=1e-6 * preset.diameter)


def test_feet_are_perpendicular(rng):
    e = ellipse(2, 1)
    for p in rng.uniform(-2.5, 2.5, size=(20, 2)):
        for f in all_feet(e, p):
            s = np.asarray(f.point) - p
            tang = e.derivative(f.t, 1)
            assert abs(s @ tang) < 1e-10 * np.linalg.norm(tang) * max(np.linalg.norm(s), 1)


def test_circle_center_is_one_arc_foot():
    feet = all_feet(circle(1.5), (0.0, 0.0))
    assert len(feet) == 1
    assert feet[0].kind is FootKind.DEGENERATE
    assert feet[0].arc == (0.0, pytest.approx(2 * math.pi))
    assert feet[0].distance == pytest.approx(1.5)


def test_segment_endpoint_feet():
    feet = all_feet(segment(), (2.0, 0.0))
    assert len(feet) == 1
    assert feet[0].boundary and feet[0].t == 1.0 and feet[0].distance == pytest.approx(1.0)


def test_classify_stationary_orders():
    e = ellipse(2, 1)
    # at the centre of curvature of a vertex the second derivative vanishes
    kind, order = classify_stationary(e, np.array([0.0]), (1.5, 0.0))
    assert order[0] == 4 and kind[0] == MIN
    kind, order = classify_stationary(e, np.array([0.0, math.pi / 2]), (0.0, 0.0))
    assert kind.tolist() == [MAX, MIN] and order.tolist() == [2, 2]
    kind, order = classify_stationary(circle(), np.array([1.0]), (0.0, 0.0))
    assert kind[0] == DEG and order[0] == 0


def test_foot_refine():
    e = ellipse(2, 1)
    f = foot_refine(e, (0.0, 0.0), 1.4)
    assert f.t == pytest.approx(math.pi / 2, abs=1e-12)
    assert f.kind is FootKind.LOCAL_MIN
    with pytest.raises(OutOfDomainError):
        foot_refine(segment(), (3.0, 1.0), 0.9)


def test_hypotrochoid_self_intersections():
    h = hypotrochoid()
    pairs = find_self_intersections(h)
    assert len(pairs) == 5
    for ta, tb in pairs:
        assert np.linalg.norm(h(ta) - h(tb)) < 1e-12
    radii = sorted(float(np.linalg.norm(h(ta))) for ta, _ in pairs)
    assert radii == pytest.approx([2.773186611368429] * 5, rel=1e-10)


def test_simple_curves_have_no_self_intersections():
    for c in (ellipse(2, 1), circle(), parabola(), segment()):
        assert find_self_intersections(c) == []
