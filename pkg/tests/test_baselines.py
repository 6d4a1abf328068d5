import math

import numpy as np
import pytest

from viewprm import (
    Box,
    Configuration,
    ObjectNode,
    OracleCostmap,
    RobotModel,
    SamplingError,
    SceneError,
    SceneGraph,
    SteeringSpec,
)
from viewprm import baselines as bl
from viewprm.geometry import config_in_collision, forward_kinematics
from viewprm.steering import steer

ROBOT = RobotModel()


def two_targets(wa=1.0, wb=0.5):
    return SceneGraph(
        workspace_bounds=Box((-4.0, -4.0, 0.0), (4.0, 4.0, 3.0)),
        obstacles=(),
        objects=(
            ObjectNode(id="alpha", class_name="monitor", centroid=(2.0, 0.0, 1.2),
                       face_normal=(-1.0, 0.0, 0.0), extent=(0.4, 0.1, 0.3),
                       weight=wa),
            ObjectNode(id="bravo", class_name="monitor", centroid=(-2.0, 0.0, 1.2),
                       face_normal=(1.0, 0.0, 0.0), extent=(0.4, 0.1, 0.3),
                       weight=wb),
        ),
        class_vocabulary=("monitor",))


def test_closest_object_target_by_distance_then_id():
    scene = two_targets()
    q_near_alpha = Configuration(1.0, 0.0, 0.0, 0.0, 0.0)
    assert bl.closest_object_target(q_near_alpha, scene, ROBOT).id == "alpha"
    # camera centered between the two: exact distance tie, id wins
    q_mid = Configuration(0.0, 0.0, 0.0, 0.0, 0.0)
    assert bl.closest_object_target(q_mid, scene, ROBOT).id == "alpha"
    empty = SceneGraph(workspace_bounds=scene.workspace_bounds, obstacles=(),
                       objects=(), class_vocabulary=("monitor",))
    with pytest.raises(SceneError):
        bl.closest_object_target(q_mid, empty, ROBOT)


def test_lowest_cost_target_prefers_visible_object():
    scene = two_targets()
    backend = OracleCostmap(scene, ROBOT)
    # looking straight at alpha: alpha is cheap, bravo is behind the camera
    q = Configuration(0.0, 0.0, 0.0, 0.0, 0.0)
    assert bl.lowest_cost_target(q, scene, backend).id == "alpha"
    # looking at bravo instead flips the choice
    q_flip = Configuration(0.0, 0.0, math.pi, 0.0, 0.0)
    assert bl.lowest_cost_target(q_flip, scene, backend).id == "bravo"
    # camera aimed at neither: both at max cost, tie falls to the lower id
    q_up = Configuration(0.0, 0.0, math.pi / 2.0, 0.0, math.pi / 2.0 - 0.01)
    assert bl.lowest_cost_target(q_up, scene, backend).id == "alpha"


def test_low_dof_sample_freezes_camera_joints():
    scene = two_targets()
    rng = np.random.default_rng(3)
    for _ in range(25):
        q = bl.low_dof_sample(scene, ROBOT, rng)
        assert q.pan == 0.0
        assert q.tilt == 0.0
        assert not config_in_collision(q, scene.obstacles, ROBOT)
        lo, hi = scene.workspace_bounds.min_corner, scene.workspace_bounds.max_corner
        assert lo[0] <= q.x <= hi[0] and lo[1] <= q.y <= hi[1]


def test_low_dof_sample_blocked_workspace():
    scene = SceneGraph(
        workspace_bounds=Box((-1.0, -1.0, 0.0), (1.0, 1.0, 3.0)),
        obstacles=(Box((-2.0, -2.0, 0.0), (2.0, 2.0, 3.0)),),
        objects=(ObjectNode(id="alpha", class_name="monitor",
                            centroid=(0.5, 0.0, 1.2), face_normal=(-1.0, 0.0, 0.0),
                            extent=(0.4, 0.1, 0.3), weight=1.0),),
        class_vocabulary=("monitor",))
    with pytest.raises(SamplingError):
        bl.low_dof_sample(scene, ROBOT, np.random.default_rng(0), max_attempts=20)


def test_baseline_sample_kinds():
    scene = two_targets()
    backend = OracleCostmap(scene, ROBOT)
    rng = np.random.default_rng(21)
    q_low = bl.baseline_sample(bl.CLOSEST_LOW_DOF, scene, ROBOT, backend, rng)
    assert (q_low.pan, q_low.tilt) == (0.0, 0.0)
    q_closest = bl.baseline_sample(bl.CLOSEST, scene, ROBOT, backend,
                                   np.random.default_rng(21))
    assert ROBOT.within_limits(q_closest)
    # same seed, same node
    again = bl.baseline_sample(bl.CLOSEST, scene, ROBOT, backend,
                               np.random.default_rng(21))
    assert q_closest == again
    with pytest.raises(SamplingError):
        bl.baseline_sample("teleport", scene, ROBOT, backend, rng)


def test_distance_channel_known_value():
    scene = two_targets()
    # camera parked at the origin: nearest centroid sits exactly 2 m away
    q = Configuration(0.0, 0.0, 0.0, 0.0, 0.0)
    motion = steer(q, q, ROBOT, SteeringSpec())
    val = bl.distance_channel_value(motion, scene, ROBOT, samples=6)
    assert val == pytest.approx(2.0, abs=1e-12)
    no_objects = SceneGraph(workspace_bounds=scene.workspace_bounds, obstacles=(),
                            objects=(), class_vocabulary=("monitor",))
    with pytest.raises(SceneError):
        bl.distance_channel_value(motion, no_objects, ROBOT, samples=6)


def test_min_cost_channel_bounded_by_weighted_aggregate():
    scene = two_targets()  # weights 1.0 and 0.5 sum above 1
    backend = OracleCostmap(scene, ROBOT)
    rng = np.random.default_rng(8)
    from viewprm.roadmap import edge_perception_cost
    for _ in range(10):
        a = Configuration(rng.uniform(-3, 3), rng.uniform(-3, 3),
                          rng.uniform(-math.pi, math.pi), 0.0, 0.0)
        b = Configuration(rng.uniform(-3, 3), rng.uniform(-3, 3),
                          rng.uniform(-math.pi, math.pi), 0.0, 0.0)
        motion = steer(a, b, ROBOT, SteeringSpec())
        mn = bl.min_cost_channel_value(motion, scene, backend, samples=4)
        agg = edge_perception_cost(motion, scene, backend, samples=4)
        assert 0.0 <= mn <= agg + 1e-12


def test_make_method_routes_to_the_right_sampler_and_channel(monkeypatch):
    scene = two_targets()
    backend = OracleCostmap(scene, ROBOT)
    calls = {"mops": 0, "baseline": 0, "agg": 0, "dist": 0, "min": 0}

    real_pas = bl.perception_aware_sample
    real_bs = bl.baseline_sample
    real_agg = bl.edge_perception_cost
    real_dist = bl.distance_channel_value
    real_min = bl.min_cost_channel_value

    def wrap(key, fn):
        def inner(*a, **kw):
            calls[key] += 1
            return fn(*a, **kw)
        return inner

    monkeypatch.setattr(bl, "perception_aware_sample", wrap("mops", real_pas))
    monkeypatch.setattr(bl, "baseline_sample", wrap("baseline", real_bs))
    monkeypatch.setattr(bl, "edge_perception_cost", wrap("agg", real_agg))
    monkeypatch.setattr(bl, "distance_channel_value", wrap("dist", real_dist))
    monkeypatch.setattr(bl, "min_cost_channel_value", wrap("min", real_min))

    q = Configuration(0.0, 0.0, 0.0, 0.0, 0.0)
    motion = steer(q, q, ROBOT, SteeringSpec())

    expected = {
        bl.MOPS: ("mops", "agg"),
        bl.UNIFORM: (None, "agg"),
        bl.CLOSEST: ("baseline", "dist"),
        bl.CLOSEST_LOW_DOF: ("baseline", "dist"),
        bl.LOWEST_COST: ("baseline", "min"),
    }
    for kind, (sampler_key, channel_key) in expected.items():
        before = dict(calls)
        setup = bl.make_method(kind, scene, ROBOT, backend, samples=3)
        assert setup.kind == kind
        setup.sampler(np.random.default_rng(5))
        setup.channel(motion)
        if sampler_key is not None:
            assert calls[sampler_key] == before[sampler_key] + 1, kind
        assert calls[channel_key] == before[channel_key] + 1, kind

    with pytest.raises(SamplingError):
        bl.make_method("rrt", scene, ROBOT, backend, samples=3)


def test_method_constants():
    assert bl.METHODS == (bl.MOPS, bl.CLOSEST_LOW_DOF, bl.CLOSEST, bl.LOWEST_COST)
    assert set(bl.BASELINE_KINDS) == {bl.CLOSEST_LOW_DOF, bl.CLOSEST, bl.LOWEST_COST}
    assert bl.UNIFORM not in bl.METHODS
