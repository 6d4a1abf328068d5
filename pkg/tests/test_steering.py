import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from viewprm import (
    Box,
    Configuration,
    InvalidConfigurationError,
    RobotModel,
    SteeringSpec,
    config_distance,
    discretize,
    motion_collision_free,
    steer,
)
from viewprm.steering import REEDS_SHEPP, STRAIGHT, car_like, straight_line

ROBOT = RobotModel()

xy = st.floats(-5.0, 5.0, allow_nan=False)
ang = st.floats(-math.pi, math.pi, allow_nan=False)
pans = st.floats(-2.9, 2.9, allow_nan=False)
tilts = st.floats(-1.4, 1.4, allow_nan=False)


def cfg(x=0.0, y=0.0, th=0.0, pan=0.0, tilt=0.0):
    return Configuration(x, y, th, pan, tilt)


def test_spec_validation_and_directedness():
    assert not SteeringSpec().directed
    assert SteeringSpec(kind=REEDS_SHEPP, turning_radius=0.5).directed
    with pytest.raises(InvalidConfigurationError):
        SteeringSpec(kind="teleport")
    with pytest.raises(InvalidConfigurationError):
        SteeringSpec(kind=REEDS_SHEPP, turning_radius=-1.0)


def test_straight_line_endpoints_are_exact():
    a = cfg(0.1, 0.2, 0.3, 0.4, 0.5)
    b = cfg(1.1, -0.7, -2.0, -0.3, 0.1)
    m = straight_line(a, b, ROBOT)
    assert m.sample(0.0) is a
    assert m.sample(1.0) is b
    assert m.sample(-0.2) is a
    assert m.sample(1.7) is b


def test_straight_line_cost_is_metric_distance():
    a = cfg(0, 0, 0)
    b = cfg(3, 4, 0)
    m = straight_line(a, b, ROBOT)
    assert m.motion_length == pytest.approx(5.0)
    assert m.base_length == pytest.approx(5.0)
    assert m.motion_length == pytest.approx(config_distance(a, b, ROBOT.metric_weights))


def test_straight_line_heading_takes_short_arc():
    a = cfg(th=math.pi - 0.1)
    b = cfg(th=-math.pi + 0.1)
    m = straight_line(a, b, ROBOT)
    mid = m.sample(0.5)
    # midpoint of the 0.2 rad short way crosses the pi seam
    assert abs(abs(mid.theta) - math.pi) < 0.11
    assert m.motion_length == pytest.approx(0.5 * 0.2)


@given(xy, xy, ang, pans, tilts, xy, xy, ang, pans, tilts)
def test_straight_midpoint_halves_the_cost(ax, ay, ath, ap, at, bx, by, bth, bp, bt):
    a = cfg(ax, ay, ath, ap, at)
    b = cfg(bx, by, bth, bp, bt)
    m = straight_line(a, b, ROBOT)
    mid = m.sample(0.5)
    d1 = config_distance(a, mid, ROBOT.metric_weights)
    d2 = config_distance(mid, b, ROBOT.metric_weights)
    assert d1 + d2 == pytest.approx(m.motion_length, abs=1e-9)
    assert d1 == pytest.approx(d2, abs=1e-9)


def test_discretize_includes_exact_endpoints():
    a = cfg(0, 0, 0)
    b = cfg(1, 2, 1.0, 0.5, -0.5)
    m = straight_line(a, b, ROBOT)
    pts = discretize(m, 4)
    assert len(pts) == 5
    assert pts[0] == (0.0, a)
    assert pts[-1] == (1.0, b)
    with pytest.raises(ValueError):
        discretize(m, 0)


def test_discretize_refinement_is_bitwise_nested():
    # the k/n parameter grid of n is a subset of the grid of 2n, and the
    # sampler is deterministic, so coarse waypoints reappear exactly
    a = cfg(0.3, -1.2, 0.7, 0.2, -0.1)
    b = cfg(2.9, 1.4, -2.2, -0.8, 0.6)
    m = straight_line(a, b, ROBOT)
    coarse = discretize(m, 5)
    fine = discretize(m, 10)
    for i, (t, q) in enumerate(coarse):
        assert fine[2 * i][1] == q


def test_car_like_base_length_is_rs_length():
    from viewprm.reeds_shepp import path_between

    a = cfg(0, 0, 0)
    b = cfg(2, 1, 1.2)
    m = car_like(a, b, ROBOT, 0.5)
    rs = path_between((0, 0, 0), (2, 1, 1.2), 0.5)
    assert m.base_length == pytest.approx(rs.length)
    assert m.motion_length == pytest.approx(rs.length)  # no pan/tilt change
    c = cfg(2, 1, 1.2, 0.4, -0.2)
    m2 = car_like(a, c, ROBOT, 0.5)
    w = ROBOT.metric_weights
    assert m2.motion_length == pytest.approx(rs.length + w[3] * 0.4 + w[4] * 0.2)


def test_car_like_is_directional():
    a = cfg(0, 0, 0)
    c = cfg(1.0, 1.0, math.pi / 2)
    fwd = car_like(a, c, ROBOT, 0.5)
    rev = car_like(c, a, ROBOT, 0.5)
    # equal length by time reversal symmetry of the RS family, but the
    # sampled sweeps differ: each starts at its own tail
    assert fwd.motion_length == pytest.approx(rev.motion_length, abs=1e-9)
    assert fwd.sample(0.0) == a
    assert rev.sample(0.0) == c
    assert fwd.sample(0.25) != rev.sample(0.75)


def test_car_like_samples_trace_bounded_steps():
    a = cfg(0, 0, 0)
    b = cfg(1.4, -0.8, 2.0, 0.6, -0.3)
    m = car_like(a, b, ROBOT, 0.5)
    n = 300
    prev = m.sample(0.0)
    for k in range(1, n + 1):
        q = m.sample(k / n)
        step = math.hypot(q.x - prev.x, q.y - prev.y)
        assert step <= m.base_length / n + 1e-9
        prev = q
    endq = m.sample(1.0)
    assert (endq.x, endq.y) == (b.x, b.y)


def test_car_like_zero_base_motion_keeps_pose():
    a = cfg(1, 1, 0.5, 0.0, 0.0)
    b = cfg(1, 1, 0.5, 1.0, -0.5)
    m = car_like(a, b, ROBOT, 0.5)
    assert m.base_length == pytest.approx(0.0, abs=1e-12)
    mid = m.sample(0.5)
    assert (mid.x, mid.y) == pytest.approx((1.0, 1.0), abs=1e-9)
    assert mid.pan == pytest.approx(0.5)
    assert mid.tilt == pytest.approx(-0.25)


def test_steer_dispatches_on_spec():
    a, b = cfg(0, 0, 0), cfg(1, 0, 0)
    assert steer(a, b, ROBOT, SteeringSpec()).kind == STRAIGHT
    assert steer(a, b, ROBOT, SteeringSpec(kind=REEDS_SHEPP)).kind == REEDS_SHEPP


def test_motion_collision_free_catches_mid_edge_obstacle():
    # obstacle sits strictly between the endpoints
    wall = Box((0.9, -0.2, 0.0), (1.1, 0.2, 1.0))
    a = cfg(0, 0, 0)
    b = cfg(2, 0, 0)
    m = straight_line(a, b, ROBOT)
    assert not motion_collision_free(m, (wall,), ROBOT, 0.05)
    # coarse enough resolution can step over it; the fine pass must not
    assert motion_collision_free(m, (), ROBOT, 0.05)


def test_motion_collision_resolution_bounds_spacing():
    # a thin wall whose clearance window is smaller than the coarse spacing:
    # the wall plus the base disc blocks x in (0.65, 1.35); steps at 0.05
    # resolution must sample inside that window
    thin = Box((0.99, -5.0, 0.0), (1.01, 5.0, 1.0))
    a = cfg(0, 0, 0)
    b = cfg(2, 0, 0)
    m = straight_line(a, b, ROBOT)
    assert not motion_collision_free(m, (thin,), ROBOT, 0.05)
    with pytest.raises(ValueError):
        motion_collision_free(m, (thin,), ROBOT, 0.0)


def test_zero_length_motion_checks_endpoint_only():
    a = cfg(0.0, 0.0, 0.0, 0.2, 0.1)
    m = straight_line(a, a, ROBOT)
    assert m.base_length == 0.0
    assert motion_collision_free(m, (), ROBOT, 0.05)
    box = Box((-0.1, -0.1, 0.0), (0.1, 0.1, 1.0))
    assert not motion_collision_free(m, (box,), ROBOT, 0.05)


@given(xy, xy, ang, xy, xy, ang)
def test_car_like_endpoints_exact_under_property(ax, ay, ath, bx, by, bth):
    a = cfg(ax, ay, ath)
    b = cfg(bx, by, bth)
    m = car_like(a, b, ROBOT, 0.5)
    assert m.sample(0.0) is a
    assert m.sample(1.0) is b
    assert m.base_length >= math.hypot(bx - ax, by - ay) - 1e-6
