"""Local motions between configurations: straight-line and car-like steering.

A LocalMotion is a deterministic curve q(t), t in [0, 1], with a scalar
motion cost. Straight-line steering interpolates every DoF linearly (heading
along the shortest circular arc). Car-like steering drives the base along a
shortest bidirectional bounded-curvature path and carries pan/tilt linearly
along it; its cost adds the angular-weighted pan/tilt displacement to the
base path length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import reeds_shepp
from .errors import InvalidConfigurationError
from .geometry import (
    Configuration,
    RobotModel,
    config_distance,
    config_in_collision,
    wrap_angle,
)

STRAIGHT = "straight"
REEDS_SHEPP = "reeds_shepp"


@dataclass(frozen=True)
class SteeringSpec:
    kind: str = STRAIGHT
    turning_radius: float = 0.5

    def __post_init__(self):
        if self.kind not in (STRAIGHT, REEDS_SHEPP):
            raise InvalidConfigurationError(f"unknown steering kind {self.kind!r}")
        if self.turning_radius <= 0.0:
            raise InvalidConfigurationError("turning_radius must be positive")

    @property
    def directed(self) -> bool:
        """Car-like motions are direction dependent; straight lines are not."""
        return self.kind == REEDS_SHEPP


@dataclass(frozen=True)
class LocalMotion:
    """A parameterized local path from start to end with its motion cost."""

    kind: str
    start: Configuration
    end: Configuration
    motion_length: float
    base_length: float  # planar arc length of the base path, for collision spacing
    _sampler: Callable[[float], Configuration]

    def sample(self, t: float) -> Configuration:
        if t <= 0.0:
            return self.start
        if t >= 1.0:
            return self.end
        return self._sampler(t)


def straight_line(q_u: Configuration, q_v: Configuration,
                  robot: RobotModel) -> LocalMotion:
    """Per-DoF linear interpolation; cost equals the configuration distance."""
    dx = q_v.x - q_u.x
    dy = q_v.y - q_u.y
    dth = wrap_angle(q_v.theta - q_u.theta)
    dpan = q_v.pan - q_u.pan
    dtilt = q_v.tilt - q_u.tilt

    def _sample(t: float) -> Configuration:
        return Configuration(
            q_u.x + t * dx,
            q_u.y + t * dy,
            wrap_angle(q_u.theta + t * dth),
            q_u.pan + t * dpan,
            q_u.tilt + t * dtilt,
        )

    return LocalMotion(
        kind=STRAIGHT,
        start=q_u,
        end=q_v,
        motion_length=config_distance(q_u, q_v, robot.metric_weights),
        base_length=math.hypot(dx, dy),
        _sampler=_sample,
    )


def car_like(q_u: Configuration, q_v: Configuration, robot: RobotModel,
             turning_radius: float) -> LocalMotion:
    """Bounded-curvature base motion with pan/tilt carried along arc length."""
    path = reeds_shepp.path_between(
        (q_u.x, q_u.y, q_u.theta), (q_v.x, q_v.y, q_v.theta), turning_radius)
    base_len = path.length
    dpan = q_v.pan - q_u.pan
    dtilt = q_v.tilt - q_u.tilt
    w = robot.metric_weights
    start_pose = (q_u.x, q_u.y, q_u.theta)

    def _sample(t: float) -> Configuration:
        x, y, th = reeds_shepp.sample_pose(path, start_pose, turning_radius, t)
        return Configuration(x, y, wrap_angle(th),
                             q_u.pan + t * dpan, q_u.tilt + t * dtilt)

    return LocalMotion(
        kind=REEDS_SHEPP,
        start=q_u,
        end=q_v,
        motion_length=base_len + w[3] * abs(dpan) + w[4] * abs(dtilt),
        base_length=base_len,
        _sampler=_sample,
    )


def steer(q_u: Configuration, q_v: Configuration, robot: RobotModel,
          spec: SteeringSpec) -> LocalMotion:
    if spec.kind == STRAIGHT:
        return straight_line(q_u, q_v, robot)
    return car_like(q_u, q_v, robot, spec.turning_radius)


def discretize(motion: LocalMotion, n: int) -> list[tuple[float, Configuration]]:
    """n+1 waypoints at t = k/n, including both endpoints exactly."""
    if n < 1:
        raise ValueError("discretization needs at least one interval")
    return [(k / n, motion.sample(k / n)) for k in range(n + 1)]


def motion_collision_free(motion: LocalMotion, obstacles, robot: RobotModel,
                          resolution: float) -> bool:
    """Collision check with waypoints spaced at most `resolution` apart in
    base arc length. Motions that do not move the base check only endpoints."""
    if resolution <= 0.0:
        raise ValueError("resolution must be positive")
    n = max(1, math.ceil(motion.base_length / resolution))
    for k in range(n + 1):
        if config_in_collision(motion.sample(k / n), obstacles, robot):
            return False
    return True
