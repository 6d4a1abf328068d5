"""Node sampling: uniform draws, aim projection, and perception-aware selection.

New roadmap nodes come from a two-stage pipeline: a uniform collision-free
draw is nudged toward each aim target by a small trust-region projection that
minimizes the squared lateral aim residual, then each projected configuration
seeds a handful of Gaussian local perturbations filtered to keep the target
in view. The cheapest candidate under the perception backend becomes the
node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SamplingError
from .geometry import (
    Box,
    Configuration,
    RobotModel,
    Vec3,
    camera_jacobians,
    config_in_collision,
    forward_kinematics,
    in_fov,
    wrap_angle,
)
from .perception import PerceptionBackend, aggregate_cost
from .scenegraph import SceneGraph, extract_centroids


@dataclass(frozen=True)
class ProjectionParams:
    """Trust-region aim refinement knobs.

    rho is measured in the scaled configuration norm, so the projection is a
    small local nudge, not a full re-aim; regularization pulls the iterate
    back toward its seed in the same norm.
    """

    regularization: float = 0.3
    trust_radius: float = 0.05
    max_iterations: int = 100
    residual_tolerance: float = 1e-3

    def __post_init__(self):
        if self.regularization < 0.0 or self.trust_radius <= 0.0:
            raise SamplingError("regularization must be >= 0 and trust_radius > 0")
        if self.max_iterations < 1:
            raise SamplingError("max_iterations must be >= 1")


@dataclass(frozen=True)
class LocalSamplingParams:
    """Gaussian spread around a projected node, per DoF."""

    num_samples: int = 5
    noise_scales: tuple[float, float, float, float, float] = (1.0, 1.0, 0.5, 0.25, 0.25)

    def __post_init__(self):
        if self.num_samples < 0:
            raise SamplingError("num_samples must be >= 0")
        if any(s < 0.0 for s in self.noise_scales):
            raise SamplingError("noise_scales must be nonnegative")


@dataclass(frozen=True)
class ProjectionResult:
    success: bool
    q: Configuration
    iterations: int
    initial_residual: float
    final_residual: float
    reason: str


def sample_free(bounds: Box, obstacles, robot: RobotModel,
                rng: np.random.Generator, max_attempts: int = 10000) -> Configuration:
    """Uniform draw over the workspace box and joint intervals, rejecting collisions."""
    lo = bounds.min_corner
    hi = bounds.max_corner
    for _ in range(max_attempts):
        q = Configuration(
            rng.uniform(lo[0], hi[0]),
            rng.uniform(lo[1], hi[1]),
            rng.uniform(-math.pi, math.pi),
            rng.uniform(robot.pan_limits[0], robot.pan_limits[1]),
            rng.uniform(robot.tilt_limits[0], robot.tilt_limits[1]),
        )
        if not config_in_collision(q, obstacles, robot):
            return q
    raise SamplingError(f"no collision-free sample after {max_attempts} attempts")


# ---------------------------------------------------------------------------
# trust-region aim projection


def _wrapped_delta(q: Configuration, q0: Configuration) -> tuple[float, ...]:
    return (q.x - q0.x, q.y - q0.y, wrap_angle(q.theta - q0.theta),
            q.pan - q0.pan, q.tilt - q0.tilt)


def projection_objective(q: Configuration, q0: Configuration, target: Vec3,
                         robot: RobotModel, params: ProjectionParams) -> float:
    """Squared lateral residual plus scaled-norm regularization toward q0."""
    m, z, _, _ = camera_jacobians(q, robot)
    rx = target[0] - m[0]
    ry = target[1] - m[1]
    rz = target[2] - m[2]
    zr = z[0] * rx + z[1] * ry + z[2] * rz
    phi_sq = rx * rx + ry * ry + rz * rz - zr * zr
    w = robot.metric_weights
    d = _wrapped_delta(q, q0)
    reg = sum((wi * di) ** 2 for wi, di in zip(w, d))
    return phi_sq + params.regularization * reg


def projection_gradient(q: Configuration, q0: Configuration, target: Vec3,
                        robot: RobotModel, params: ProjectionParams
                        ) -> tuple[float, ...]:
    m, z, jm, jz = camera_jacobians(q, robot)
    rx = target[0] - m[0]
    ry = target[1] - m[1]
    rz = target[2] - m[2]
    zr = z[0] * rx + z[1] * ry + z[2] * rz
    w = robot.metric_weights
    d = _wrapped_delta(q, q0)
    grad = []
    for i in range(5):
        jm_i = jm[i]
        jz_i = jz[i]
        # d/dq_i of |r|^2 with r = target - m(q)
        g = -2.0 * (rx * jm_i[0] + ry * jm_i[1] + rz * jm_i[2])
        # d/dq_i of -(z . r)^2
        dzr = (jz_i[0] * rx + jz_i[1] * ry + jz_i[2] * rz
               - (z[0] * jm_i[0] + z[1] * jm_i[1] + z[2] * jm_i[2]))
        g -= 2.0 * zr * dzr
        g += 2.0 * params.regularization * (w[i] ** 2) * d[i]
        grad.append(g)
    return tuple(grad)


def _clamp_to_feasible(raw: tuple[float, ...], q0: Configuration,
                       robot: RobotModel, rho: float) -> Configuration:
    """Clamp joints to limits, then pull the step back into the trust ball."""
    x, y, th, pan, tilt = raw
    pan = min(max(pan, robot.pan_limits[0]), robot.pan_limits[1])
    tilt = min(max(tilt, robot.tilt_limits[0]), robot.tilt_limits[1])
    d = (x - q0.x, y - q0.y, wrap_angle(th - q0.theta), pan - q0.pan, tilt - q0.tilt)
    w = robot.metric_weights
    norm = math.sqrt(sum((wi * di) ** 2 for wi, di in zip(w, d)))
    if norm > rho:
        s = rho / norm
        d = tuple(di * s for di in d)
    return Configuration(q0.x + d[0], q0.y + d[1], wrap_angle(q0.theta + d[2]),
                         q0.pan + d[3], q0.tilt + d[4])


def _residual_norm(q: Configuration, target: Vec3, robot: RobotModel) -> float:
    m, z, _, _ = camera_jacobians(q, robot)
    rx = target[0] - m[0]
    ry = target[1] - m[1]
    rz = target[2] - m[2]
    zr = z[0] * rx + z[1] * ry + z[2] * rz
    return math.sqrt(max(rx * rx + ry * ry + rz * rz - zr * zr, 0.0))


def project_to_centroid(q0: Configuration, target: Vec3, scene: SceneGraph,
                        robot: RobotModel,
                        params: ProjectionParams | None = None) -> ProjectionResult:
    """Projected gradient descent on the aim objective inside the trust ball.

    Iterates stay within joint limits and the trust region by construction
    and must be collision-free to be accepted; backtracking line search
    enforces monotone decrease. Failure (budget exhausted before the step or
    the residual gets small) is reported as a value so callers can discard
    the seed.
    """
    params = params or ProjectionParams()
    initial_residual = _residual_norm(q0, target, robot)
    q = q0
    f = projection_objective(q, q0, target, robot, params)
    step = 1.0
    converged = False
    reason = "iteration budget exhausted"
    iterations = 0
    for iterations in range(1, params.max_iterations + 1):
        if _residual_norm(q, target, robot) <= params.residual_tolerance:
            converged = True
            reason = "residual below tolerance"
            break
        g = projection_gradient(q, q0, target, robot, params)
        gnorm_sq = sum(gi * gi for gi in g)
        if gnorm_sq <= 1e-24:
            converged = True
            reason = "stationary"
            break
        # step in the scaled configuration space (divide by w_i^2): there the
        # ball projection is orthogonal, so small enough steps always descend
        w = robot.metric_weights
        raw = q.as_tuple()
        # cap the raw step at ~2 trust radii in the scaled norm: far overshoot
        # saturates the joint clamp and turns the projection into a constant
        gu_norm = math.sqrt(sum((gi / wi) ** 2 for gi, wi in zip(g, w)))
        alpha = min(step, 2.0 * params.trust_radius / gu_norm)

        accepted = None
        for _ in range(40):
            trial = _clamp_to_feasible(
                tuple(raw[i] - alpha * g[i] / (w[i] * w[i]) for i in range(5)),
                q0, robot, params.trust_radius)
            d = _wrapped_delta(trial, q)
            decrease = sum(gi * (-di) for gi, di in zip(g, d))
            f_trial = projection_objective(trial, q0, target, robot, params)
            if (f_trial <= f - 1e-4 * decrease
                    and not config_in_collision(trial, scene.obstacles, robot)):
                accepted = (trial, f_trial)
                break
            alpha *= 0.5
        if accepted is None:
            converged = True
            reason = "no feasible descent step"
            break
        trial, f_trial = accepted
        move = math.sqrt(sum(
            (wi * di) ** 2 for wi, di in zip(
                robot.metric_weights, _wrapped_delta(trial, q))))
        q, f = trial, f_trial
        step = min(alpha * 2.0, 1.0e3)
        if move <= 1e-7:
            converged = True
            reason = "step collapsed"
            break

    final_residual = _residual_norm(q, target, robot)
    success = converged and f <= projection_objective(q0, q0, target, robot, params)
    return ProjectionResult(success, q if success else q0, iterations,
                            initial_residual, final_residual, reason)


# ---------------------------------------------------------------------------
# local spread and node selection


def local_sample(q_proj: Configuration, target: Vec3, scene: SceneGraph,
                 robot: RobotModel, params: LocalSamplingParams,
                 rng: np.random.Generator) -> list[Configuration]:
    """q_proj plus up to num_samples Gaussian perturbations that stay feasible
    and keep the target in the field of view. Exact duplicates collapse."""
    out = [q_proj]
    seen = {q_proj.as_tuple()}
    scales = params.noise_scales
    for _ in range(params.num_samples):
        n = rng.standard_normal(5)
        q = Configuration(
            q_proj.x + scales[0] * n[0],
            q_proj.y + scales[1] * n[1],
            wrap_angle(q_proj.theta + scales[2] * n[2]),
            q_proj.pan + scales[3] * n[3],
            q_proj.tilt + scales[4] * n[4],
        )
        if not robot.within_limits(q):
            continue
        if config_in_collision(q, scene.obstacles, robot):
            continue
        if not in_fov(forward_kinematics(q, robot), target, robot):
            continue
        key = q.as_tuple()
        if key not in seen:
            seen.add(key)
            out.append(q)
    return out


def select_node(candidates: list[Configuration], scene: SceneGraph,
                backend: PerceptionBackend) -> Configuration:
    """Candidate with the lowest aggregate cost; ties keep the earliest."""
    if not candidates:
        raise SamplingError("select_node needs a non-empty candidate list")
    best = candidates[0]
    best_cost = aggregate_cost(best, scene, backend)
    for q in candidates[1:]:
        c = aggregate_cost(q, scene, backend)
        if c < best_cost:
            best, best_cost = q, c
    return best


def perception_aware_sample(scene: SceneGraph, robot: RobotModel,
                            backend: PerceptionBackend, rng: np.random.Generator,
                            projection: ProjectionParams | None = None,
                            local: LocalSamplingParams | None = None,
                            max_retries: int = 100) -> Configuration:
    """Draw one perception-aware roadmap node.

    A uniform seed is projected toward every aim target (object centroids,
    pair midpoints, the collective mean); each success spawns local samples;
    the best candidate under the backend wins. Seeds whose projections all
    fail are discarded and redrawn.
    """
    projection = projection or ProjectionParams()
    local = local or LocalSamplingParams()
    monitored = scene.monitored()
    if not monitored:
        raise SamplingError("perception-aware sampling needs monitored objects")
    centroids = extract_centroids(monitored)
    for _ in range(max_retries):
        q0 = sample_free(scene.workspace_bounds, scene.obstacles, robot, rng)
        candidates: list[Configuration] = []
        for _, target in centroids.entries:
            result = project_to_centroid(q0, target, scene, robot, projection)
            if not result.success:
                continue
            candidates.extend(
                local_sample(result.q, target, scene, robot, local, rng))
        if candidates:
            return select_node(candidates, scene, backend)
    raise SamplingError(f"no projectable seed after {max_retries} retries")
