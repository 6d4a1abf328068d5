"""Comparison planners expressed as sampler / perception-channel strategies.

Every method builds its roadmap and searches it through the exact same
machinery as the perception-aware planner; only two ingredients vary:
how nodes are sampled, and what scalar the edge perception channel
integrates. That keeps benchmark differences attributable to the method,
not to incidental implementation drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SamplingError, SceneError
from .geometry import (
    Configuration,
    RobotModel,
    config_in_collision,
    forward_kinematics,
    sub3,
)
from .perception import PerceptionBackend
from .roadmap import ChannelFn, SamplerFn, edge_perception_cost
from .sampling import (
    LocalSamplingParams,
    ProjectionParams,
    perception_aware_sample,
    project_to_centroid,
    sample_free,
)
from .scenegraph import ObjectNode, SceneGraph
from .steering import LocalMotion

MOPS = "mops_prm"
CLOSEST_LOW_DOF = "closest_object_low_dof"
CLOSEST = "closest_object"
LOWEST_COST = "lowest_cost_object"
UNIFORM = "uniform"

METHODS = (MOPS, CLOSEST_LOW_DOF, CLOSEST, LOWEST_COST)
BASELINE_KINDS = (CLOSEST_LOW_DOF, CLOSEST, LOWEST_COST)

REST_PAN = 0.0
REST_TILT = 0.0


def closest_object_target(q: Configuration, scene: SceneGraph,
                          robot: RobotModel) -> ObjectNode:
    """Monitored object whose centroid is nearest the camera center; ties by id."""
    monitored = scene.monitored()
    if not monitored:
        raise SceneError("target selection needs at least one monitored object")
    cam = forward_kinematics(q, robot)

    def key(obj: ObjectNode):
        d = sub3(obj.centroid, cam.center)
        return (d[0] * d[0] + d[1] * d[1] + d[2] * d[2], obj.id)

    return min(monitored, key=key)


def lowest_cost_target(q: Configuration, scene: SceneGraph,
                       backend: PerceptionBackend) -> ObjectNode:
    """Monitored object with the lowest perception cost at q; ties by id."""
    monitored = scene.monitored()
    if not monitored:
        raise SceneError("target selection needs at least one monitored object")
    cam = forward_kinematics(q, backend.robot)
    return min(monitored, key=lambda obj: (backend.pose_cost(cam, obj), obj.id))


def low_dof_sample(scene: SceneGraph, robot: RobotModel, rng,
                   max_attempts: int = 10000) -> Configuration:
    """Collision-free (x, y, theta) sample with the camera frozen at rest."""
    lo = scene.workspace_bounds.min_corner
    hi = scene.workspace_bounds.max_corner
    for _ in range(max_attempts):
        q = Configuration(
            rng.uniform(lo[0], hi[0]),
            rng.uniform(lo[1], hi[1]),
            rng.uniform(-math.pi, math.pi),
            REST_PAN, REST_TILT)
        if not config_in_collision(q, scene.obstacles, robot):
            return q
    raise SamplingError(f"no collision-free base pose in {max_attempts} attempts")


def baseline_sample(kind: str, scene: SceneGraph, robot: RobotModel,
                    backend: PerceptionBackend, rng,
                    projection: ProjectionParams | None = None,
                    max_retries: int = 100) -> Configuration:
    """One roadmap node for a baseline method.

    The single-object baselines project a uniform seed toward exactly one
    selected centroid: no pair or collective aim points and no local
    refinement stage. The low-DoF baseline only places the base.
    """
    if kind == CLOSEST_LOW_DOF:
        return low_dof_sample(scene, robot, rng)
    if kind not in (CLOSEST, LOWEST_COST):
        raise SamplingError(f"unknown baseline kind {kind!r}")
    projection = projection or ProjectionParams()
    for _ in range(max_retries):
        q0 = sample_free(scene.workspace_bounds, scene.obstacles, robot, rng)
        if kind == CLOSEST:
            target = closest_object_target(q0, scene, robot)
        else:
            target = lowest_cost_target(q0, scene, backend)
        result = project_to_centroid(q0, target.centroid, scene, robot, projection)
        if result.success:
            return result.q
    raise SamplingError(f"projection failed {max_retries} times for {kind}")


def distance_channel_value(motion: LocalMotion, scene: SceneGraph,
                           robot: RobotModel, samples: int) -> float:
    """Quadrature of the camera-to-nearest-centroid distance along a motion."""
    monitored = scene.monitored()
    if not monitored:
        raise SceneError("distance channel needs monitored objects")
    total = 0.0
    for k in range(samples):
        cam = forward_kinematics(motion.sample(k / samples), robot)
        best = math.inf
        for obj in monitored:
            d = sub3(obj.centroid, cam.center)
            best = min(best, math.sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]))
        total += best
    return total / samples


def min_cost_channel_value(motion: LocalMotion, scene: SceneGraph,
                           backend: PerceptionBackend, samples: int) -> float:
    """Quadrature of the single lowest per-object cost along a motion."""
    monitored = scene.monitored()
    if not monitored:
        raise SceneError("cost channel needs monitored objects")
    total = 0.0
    for k in range(samples):
        cam = forward_kinematics(motion.sample(k / samples), backend.robot)
        total += min(backend.pose_cost(cam, obj) for obj in monitored)
    return total / samples


@dataclass(frozen=True)
class MethodSetup:
    """Sampler + edge channel pair defining one benchmarked method."""

    kind: str
    sampler: SamplerFn
    channel: ChannelFn


def make_method(kind: str, scene: SceneGraph, robot: RobotModel,
                backend: PerceptionBackend, samples: int,
                projection: ProjectionParams | None = None,
                local: LocalSamplingParams | None = None) -> MethodSetup:
    """Bind a method name to its sampling and channel strategies."""
    projection = projection or ProjectionParams()
    local = local or LocalSamplingParams()

    if kind == MOPS:
        sampler = lambda rng: perception_aware_sample(
            scene, robot, backend, rng, projection, local)
        channel = lambda motion: edge_perception_cost(
            motion, scene, backend, samples)
    elif kind == UNIFORM:
        sampler = lambda rng: sample_free(
            scene.workspace_bounds, scene.obstacles, robot, rng)
        channel = lambda motion: edge_perception_cost(
            motion, scene, backend, samples)
    elif kind in (CLOSEST, CLOSEST_LOW_DOF):
        sampler = lambda rng: baseline_sample(
            kind, scene, robot, backend, rng, projection)
        channel = lambda motion: distance_channel_value(
            motion, scene, robot, samples)
    elif kind == LOWEST_COST:
        sampler = lambda rng: baseline_sample(
            kind, scene, robot, backend, rng, projection)
        channel = lambda motion: min_cost_channel_value(
            motion, scene, backend, samples)
    else:
        raise SamplingError(f"unknown method kind {kind!r}")
    return MethodSetup(kind=kind, sampler=sampler, channel=channel)
