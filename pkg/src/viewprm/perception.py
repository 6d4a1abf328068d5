"""Detection scores, perception costs, and training-data generation.

The analytic detector stands in for a real recognizer: its score prefers a
characteristic viewing distance, on-axis framing, and a frontal look at the
object's face, and drops to zero when the object leaves the field of view or
is occluded. Costs are (1 - score)^2, so a perfect viewpoint costs 0 and an
invisible object costs 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Protocol

import numpy as np

from .errors import FileFormatError, PerceptionError, SceneError
from .geometry import (
    CameraPose,
    Configuration,
    RobotModel,
    Vec3,
    cross3,
    dot3,
    forward_kinematics,
    in_fov,
    norm3,
    occluded,
    pose_to_quaternion,
    quaternion_to_pose,
    rotate_about,
    scale3,
    sub3,
    unit3,
)
from .scenegraph import ObjectNode, SceneGraph


@dataclass(frozen=True)
class OracleParams:
    """Shape of the analytic detector response."""

    optimal_distance: float = 2.0
    distance_sigma: float = 1.0
    axis_exponent: float = 4.0

    def __post_init__(self):
        if self.optimal_distance <= 0.0 or self.distance_sigma <= 0.0:
            raise PerceptionError("optimal_distance and distance_sigma must be positive")
        if self.axis_exponent <= 0.0:
            raise PerceptionError("axis_exponent must be positive")


def oracle_score(cam: CameraPose, obj: ObjectNode, obstacles,
                 params: OracleParams, robot: RobotModel) -> float:
    """Detection confidence in [0, 1] for one object from one camera pose."""
    c = obj.centroid
    if not in_fov(cam, c, robot):
        return 0.0
    if occluded(cam.center, c, obstacles):
        return 0.0
    d_vec = sub3(c, cam.center)
    d = norm3(d_vec)
    if d == 0.0:
        return 0.0
    inv = 1.0 / d
    cos_beta = dot3(cam.optical_axis, d_vec) * inv  # > 0, guaranteed by in_fov
    cos_gamma = -(obj.face_normal[0] * d_vec[0]
                  + obj.face_normal[1] * d_vec[1]
                  + obj.face_normal[2] * d_vec[2]) * inv
    if cos_gamma <= 0.0:
        return 0.0
    dd = d - params.optimal_distance
    g = math.exp(-dd * dd / (2.0 * params.distance_sigma ** 2))
    s = g * (cos_beta ** params.axis_exponent) * cos_gamma
    return min(max(s, 0.0), 1.0)


def score_to_label(score: float) -> float:
    """Perception cost label for a detection score."""
    r = 1.0 - score
    return r * r


class PerceptionBackend(Protocol):
    """Anything that prices how badly a configuration sees one object."""

    robot: RobotModel

    def object_cost(self, q: Configuration, obj: ObjectNode) -> float: ...

    def pose_cost(self, cam: CameraPose, obj: ObjectNode) -> float: ...


class OracleCostmap:
    """Ground-truth backend: the analytic detector run through the camera model."""

    def __init__(self, scene: SceneGraph, robot: RobotModel,
                 params: OracleParams | None = None):
        self.scene = scene
        self.robot = robot
        self.params = params or OracleParams()

    def pose_cost(self, cam: CameraPose, obj: ObjectNode) -> float:
        return score_to_label(
            oracle_score(cam, obj, self.scene.obstacles, self.params, self.robot))

    def object_cost(self, q: Configuration, obj: ObjectNode) -> float:
        return self.pose_cost(forward_kinematics(q, self.robot), obj)

    def pose_costs_matrix(self, cams, objects) -> np.ndarray:
        """Cost matrix of shape (len(cams), len(objects))."""
        out = np.empty((len(cams), len(objects)))
        for i, cam in enumerate(cams):
            for j, obj in enumerate(objects):
                out[i, j] = self.pose_cost(cam, obj)
        return out


def aggregate_cost(q: Configuration, scene: SceneGraph,
                   backend: PerceptionBackend) -> float:
    """Weighted sum of per-object costs over the monitored objects."""
    monitored = scene.monitored()
    if not monitored:
        raise SceneError("aggregate cost needs at least one monitored object")
    cam = forward_kinematics(q, backend.robot)
    total = 0.0
    for obj in monitored:
        total += obj.weight * backend.pose_cost(cam, obj)
    return total


def batch_cost(qs: Iterable[Configuration], scene: SceneGraph,
               backend: PerceptionBackend) -> np.ndarray:
    """Aggregate cost for each configuration; matches scalar calls elementwise."""
    return np.array([aggregate_cost(q, scene, backend) for q in qs], dtype=float)


# ---------------------------------------------------------------------------
# training data


@dataclass(frozen=True)
class PerceptionSample:
    """One (camera pose, object) pair with its detector score and cost label."""

    camera: CameraPose
    object_id: str
    score: float
    label: float

    def __post_init__(self):
        if not (0.0 <= self.score <= 1.0):
            raise PerceptionError(f"score {self.score} outside [0, 1]")
        if abs(self.label - score_to_label(self.score)) > 1e-9:
            raise PerceptionError("label inconsistent with score")


_VERTICAL: Vec3 = (0.0, 0.0, 1.0)


def _roll_free_frame(forward: Vec3) -> tuple[Vec3, Vec3]:
    """(left, up) completing a roll-free camera frame around `forward`."""
    proj = dot3(_VERTICAL, forward)
    up = sub3(_VERTICAL, scale3(forward, proj))
    n = norm3(up)
    if n < 1e-9:
        # looking straight up or down; any horizontal up works, pick +x based
        up = sub3((1.0, 0.0, 0.0), scale3(forward, forward[0]))
        n = norm3(up)
    up = scale3(up, 1.0 / n)
    left = cross3(up, forward)
    return left, up


def sample_camera_pose(obj: ObjectNode, robot: RobotModel, params: OracleParams,
                       rng: np.random.Generator) -> CameraPose:
    """Random shell pose around the object that keeps its centroid in view.

    Radius spans [0.3, 2 d* + 3 sigma], azimuth is free, and elevation stays
    inside the band a tilt-limited camera could aim from. The aim is jittered
    inside the field of view by rejection, falling back to an exact aim.
    """
    r_hi = 2.0 * params.optimal_distance + 3.0 * params.distance_sigma
    el_lo = -robot.tilt_limits[1]
    el_hi = -robot.tilt_limits[0]

    r = rng.uniform(0.3, r_hi)
    az = rng.uniform(-math.pi, math.pi)
    el = rng.uniform(max(el_lo, -0.49 * math.pi), min(el_hi, 0.49 * math.pi))
    ce = math.cos(el)
    pos = (
        obj.centroid[0] + r * ce * math.cos(az),
        obj.centroid[1] + r * ce * math.sin(az),
        obj.centroid[2] + r * math.sin(el),
    )
    f0 = unit3(sub3(obj.centroid, pos))
    left0, up0 = _roll_free_frame(f0)

    for _ in range(64):
        dh = rng.uniform(-1.0, 1.0) * robot.fov_half_angle_h * 0.9
        dv = rng.uniform(-1.0, 1.0) * robot.fov_half_angle_v * 0.9
        f1 = rotate_about(f0, up0, dh)
        left1 = unit3(cross3(up0, f1))
        f2 = unit3(rotate_about(f1, left1, dv))
        up2 = unit3(cross3(f2, left1))
        cam = CameraPose(pos, f2, up2)
        if in_fov(cam, obj.centroid, robot):
            return cam
    return CameraPose(pos, f0, unit3(up0))


def generate_dataset(scene: SceneGraph, robot: RobotModel, count: int, seed: int,
                     params: OracleParams | None = None) -> list[PerceptionSample]:
    """Labeled shell samples around the scene's monitored objects."""
    if count < 1:
        raise PerceptionError("dataset count must be >= 1")
    monitored = scene.monitored()
    if not monitored:
        raise PerceptionError("dataset generation needs at least one monitored object")
    params = params or OracleParams()
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(2,)))
    samples = []
    for i in range(count):
        obj = monitored[int(rng.integers(len(monitored)))]
        cam = sample_camera_pose(obj, robot, params, rng)
        s = oracle_score(cam, obj, scene.obstacles, params, robot)
        samples.append(PerceptionSample(cam, obj.id, s, score_to_label(s)))
    return samples


def save_samples(samples: Iterable[PerceptionSample], path) -> None:
    """JSON-lines dataset: camera position + orientation quaternion per row."""
    with open(path, "w") as fh:
        for s in samples:
            row = {
                "position": list(s.camera.center),
                "quaternion": list(pose_to_quaternion(s.camera)),
                "object_id": s.object_id,
                "score": s.score,
                "label": s.label,
            }
            fh.write(json.dumps(row, sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def load_samples(path) -> list[PerceptionSample]:
    samples = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                cam = quaternion_to_pose(tuple(row["position"]),
                                         tuple(row["quaternion"]))
                samples.append(PerceptionSample(
                    cam, str(row["object_id"]), float(row["score"]),
                    float(row["label"])))
            except (ValueError, KeyError, TypeError) as exc:
                raise FileFormatError(
                    f"dataset {path} line {lineno}: {exc}") from exc
    return samples
