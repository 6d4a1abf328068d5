"""Benchmark harness: problems, per-frame path evaluation, method comparison.

Paths are scored by replaying them as a fixed number of frames spaced
evenly in base arc length. Each frame runs the analytic detector against
every monitored object; detections feed coverage and confidence metrics
plus a gap-tolerant continuity tracker standing in for an image-space
tracking pipeline.

Wall-clock timings never enter the primary metrics files (those must be
byte-reproducible); they ship in a sidecar table instead.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .baselines import METHODS, MOPS, make_method
from .errors import PlanningError, SamplingError
from .geometry import Configuration, RobotModel, config_in_collision, forward_kinematics
from .perception import OracleCostmap, OracleParams, PerceptionBackend, oracle_score
from .roadmap import GoalSpec, PlannerParams, Roadmap, build_roadmap
from .scenegraph import SceneGraph
from .scenes import make_sweep_scene
from .search import plan
from .steering import SteeringSpec, steer

METRICS_COLUMNS = (
    "method", "scenario", "problem_index", "solved", "seed",
    "avg_detected_objects", "track_rate", "avg_confidence",
    "scaled_avg_confidence", "path_length", "build_time_s", "plan_time_s",
    "solve_rate", "failure_reason",
)


# ---------------------------------------------------------------------------
# problem generation


def _sample_in_half(scene: SceneGraph, robot: RobotModel, rng,
                    axis: int, lo: float, hi: float,
                    max_attempts: int = 10000) -> Configuration:
    wlo = list(scene.workspace_bounds.min_corner)
    whi = list(scene.workspace_bounds.max_corner)
    wlo[axis], whi[axis] = lo, hi
    for _ in range(max_attempts):
        x = rng.uniform(wlo[0], whi[0])
        y = rng.uniform(wlo[1], whi[1])
        theta = rng.uniform(-math.pi, math.pi)
        q = Configuration(x, y, theta, 0.0, 0.0)
        if not config_in_collision(q, scene.obstacles, robot):
            return q
    raise SamplingError(f"no free pose in workspace half after {max_attempts} tries")


def generate_problems(scene: SceneGraph, robot: RobotModel, n: int,
                      seed: int) -> list[tuple[Configuration, Configuration]]:
    """Seeded start/goal pairs on opposite sides of the room's longest axis.

    Both endpoints are aim-neutral (pan and tilt zero); which side hosts the
    start flips randomly per problem.
    """
    lo = scene.workspace_bounds.min_corner
    hi = scene.workspace_bounds.max_corner
    spans = (hi[0] - lo[0], hi[1] - lo[1])
    axis = 0 if spans[0] >= spans[1] else 1
    mid = 0.5 * (lo[axis] + hi[axis])
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(4,)))
    problems = []
    for _ in range(n):
        a = _sample_in_half(scene, robot, rng, axis, lo[axis], mid)
        b = _sample_in_half(scene, robot, rng, axis, mid, hi[axis])
        if rng.random() < 0.5:
            a, b = b, a
        problems.append((a, b))
    return problems


# ---------------------------------------------------------------------------
# path evaluation


@dataclass(frozen=True)
class FrameRecord:
    index: int
    config: Configuration
    scores: dict[str, float]
    detected: dict[str, bool]


@dataclass(frozen=True)
class PathEvaluation:
    frames: tuple[FrameRecord, ...]
    avg_detected_objects: float
    track_rate: float
    avg_confidence: float
    scaled_avg_confidence: float
    path_length: float


def _frame_configs(path_nodes: Sequence[Configuration], robot: RobotModel,
                   steering: SteeringSpec, frames: int):
    """Equally spaced (base arc length) samples along the re-steered path."""
    motions = [steer(u, v, robot, steering)
               for u, v in zip(path_nodes, path_nodes[1:])]
    lengths = [m.base_length for m in motions]
    total = math.fsum(lengths)
    if not motions or total <= 0.0:
        anchor = path_nodes[0]
        return [anchor] * frames, total
    configs = []
    starts = np.concatenate([[0.0], np.cumsum(lengths)])
    for i in range(frames):
        s = total * i / (frames - 1)
        j = int(np.searchsorted(starts[1:-1], s, side="right"))
        span = lengths[j]
        t = (s - starts[j]) / span if span > 0.0 else 1.0
        configs.append(motions[j].sample(min(t, 1.0)))
    return configs, total


def _tracked_fraction(detected: list[bool], gap_tolerance: int) -> float:
    """Share of frames with a live track, from first detection to the end.

    A track survives a run of missed frames no longer than gap_tolerance and
    revives on any later detection.
    """
    if True not in detected:
        return 0.0
    first = detected.index(True)
    window = detected[first:]
    alive_count = 0
    alive = False
    gap = 0
    for hit in window:
        if hit:
            alive = True
            gap = 0
        else:
            gap += 1
            alive = alive and gap <= gap_tolerance
        alive_count += 1 if alive else 0
    return alive_count / len(window)


def evaluate_path(path_nodes: Sequence[Configuration], scene: SceneGraph,
                  robot: RobotModel, steering: SteeringSpec,
                  oracle: OracleParams | None = None, frames: int = 50,
                  detection_threshold: float = 0.25,
                  gap_tolerance: int = 3) -> PathEvaluation:
    if frames < 2:
        raise ValueError("evaluation needs at least 2 frames")
    oracle = oracle or OracleParams()
    monitored = scene.monitored()
    configs, path_length = _frame_configs(path_nodes, robot, steering, frames)

    records = []
    for i, q in enumerate(configs):
        cam = forward_kinematics(q, robot)
        scores = {}
        hits = {}
        for obj in monitored:
            s = oracle_score(cam, obj, scene.obstacles, oracle, robot)
            scores[obj.id] = s
            hits[obj.id] = s >= detection_threshold
        records.append(FrameRecord(i, q, scores, hits))

    detections = [r.scores[o.id] for r in records for o in monitored
                  if r.detected[o.id]]
    avg_detected = math.fsum(
        sum(r.detected[o.id] for o in monitored) for r in records) / frames
    avg_conf = math.fsum(detections) / len(detections) if detections else 0.0

    total_weight = math.fsum(o.weight for o in monitored)
    tracked = 0.0
    for o in monitored:
        frac = _tracked_fraction([r.detected[o.id] for r in records],
                                 gap_tolerance)
        tracked += o.weight * frac
    track_rate = tracked / total_weight if total_weight > 0.0 else 0.0

    return PathEvaluation(
        frames=tuple(records),
        avg_detected_objects=avg_detected,
        track_rate=track_rate,
        avg_confidence=avg_conf,
        scaled_avg_confidence=avg_detected * avg_conf,
        path_length=path_length,
    )


# ---------------------------------------------------------------------------
# benchmark runner


@dataclass(frozen=True)
class ScenarioSpec:
    scene: SceneGraph
    robot: RobotModel
    planner: PlannerParams
    scenario: str = "office"
    methods: tuple[str, ...] = METHODS
    num_problems: int = 20
    master_seed: int = 0
    frames: int = 50
    detection_threshold: float = 0.25
    gap_tolerance: int = 3
    steering: SteeringSpec = field(default_factory=SteeringSpec)
    oracle: OracleParams = field(default_factory=OracleParams)

    def __post_init__(self):
        if self.num_problems < 0:
            raise ValueError("num_problems must be >= 0")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")


@dataclass
class MetricsRow:
    method: str
    scenario: str
    problem_index: object  # int for problems, "all" for the aggregate
    solved: bool | int
    seed: int
    avg_detected_objects: float | None = None
    track_rate: float | None = None
    avg_confidence: float | None = None
    scaled_avg_confidence: float | None = None
    path_length: float | None = None
    build_time_s: float | None = None
    plan_time_s: float | None = None
    solve_rate: float | None = None
    failure_reason: str = ""


@dataclass
class BenchmarkResult:
    rows: list[MetricsRow]
    roadmaps: dict[str, Roadmap]

    def aggregate(self, method: str) -> MetricsRow:
        for row in self.rows:
            if row.method == method and row.problem_index == "all":
                return row
        raise KeyError(method)


def method_seed(master_seed: int, method_index: int) -> int:
    state = np.random.SeedSequence(
        master_seed, spawn_key=(1, method_index)).generate_state(1)
    return int(state[0])


def _solve_and_score(spec: ScenarioSpec, roadmap: Roadmap,
                     backend: PerceptionBackend, setup, problem):
    q_start, q_goal = problem
    t0 = time.perf_counter()
    try:
        result = plan(roadmap, spec.scene, spec.robot, backend, q_start,
                      GoalSpec.at(q_goal), spec.steering, spec.planner,
                      channel=setup.channel)
    except PlanningError as exc:
        return None, None, time.perf_counter() - t0, str(exc)
    k = spec.planner.quadrature_samples
    nodes = result.waypoints[::k]
    ev = evaluate_path(nodes, spec.scene, spec.robot, spec.steering,
                       spec.oracle, spec.frames, spec.detection_threshold,
                       spec.gap_tolerance)
    return result, ev, time.perf_counter() - t0, ""


def _mean(values) -> float | None:
    vals = list(values)
    return math.fsum(vals) / len(vals) if vals else None


def run_benchmark(spec: ScenarioSpec,
                  backend: PerceptionBackend | None = None) -> BenchmarkResult:
    """Build one roadmap per method, solve the shared problems, score paths.

    Aggregate confidence is reported as the product of the aggregated
    coverage and confidence means so the scaled-confidence identity holds on
    every row.
    """
    backend = backend or OracleCostmap(spec.scene, spec.robot, spec.oracle)
    problems = generate_problems(spec.scene, spec.robot, spec.num_problems,
                                 spec.master_seed)
    rows: list[MetricsRow] = []
    roadmaps: dict[str, Roadmap] = {}

    for mi, method in enumerate(spec.methods):
        setup = make_method(method, spec.scene, spec.robot, backend,
                            spec.planner.quadrature_samples)
        seed = method_seed(spec.master_seed, mi)
        roadmap = build_roadmap(spec.scene, spec.robot, setup.sampler,
                                setup.channel, spec.steering, spec.planner,
                                seed, method=method)
        roadmaps[method] = roadmap
        build_time = roadmap.metadata.build_time_s

        if spec.planner.workers > 1 and problems:
            with ThreadPoolExecutor(spec.planner.workers) as pool:
                outcomes = list(pool.map(
                    lambda p: _solve_and_score(spec, roadmap, backend, setup, p),
                    problems))
        else:
            outcomes = [_solve_and_score(spec, roadmap, backend, setup, p)
                        for p in problems]

        solved_rows = []
        for pi, (result, ev, plan_time, reason) in enumerate(outcomes):
            if result is None:
                rows.append(MetricsRow(
                    method=method, scenario=spec.scenario, problem_index=pi,
                    solved=False, seed=seed, build_time_s=build_time,
                    plan_time_s=plan_time, failure_reason=reason))
                continue
            row = MetricsRow(
                method=method, scenario=spec.scenario, problem_index=pi,
                solved=True, seed=seed,
                avg_detected_objects=ev.avg_detected_objects,
                track_rate=ev.track_rate,
                avg_confidence=ev.avg_confidence,
                scaled_avg_confidence=ev.scaled_avg_confidence,
                path_length=ev.path_length,
                build_time_s=build_time, plan_time_s=plan_time)
            rows.append(row)
            solved_rows.append(row)

        agg_d = _mean(r.avg_detected_objects for r in solved_rows)
        agg_c = _mean(r.avg_confidence for r in solved_rows)
        rows.append(MetricsRow(
            method=method, scenario=spec.scenario, problem_index="all",
            solved=len(solved_rows), seed=seed,
            avg_detected_objects=agg_d,
            track_rate=_mean(r.track_rate for r in solved_rows),
            avg_confidence=agg_c,
            scaled_avg_confidence=(agg_d * agg_c
                                   if agg_d is not None and agg_c is not None
                                   else None),
            path_length=_mean(r.path_length for r in solved_rows),
            build_time_s=build_time,
            plan_time_s=_mean(r.plan_time_s for r in solved_rows),
            solve_rate=(len(solved_rows) / len(problems) if problems else None),
        ))
    return BenchmarkResult(rows=rows, roadmaps=roadmaps)


# ---------------------------------------------------------------------------
# metrics files


def _cell(value, deterministic: bool, timing: bool) -> str:
    if value is None or (timing and deterministic):
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_metrics_csv(rows: list[MetricsRow], path,
                      deterministic: bool = True) -> None:
    """Primary metrics table. With deterministic=True (the default) the
    wall-clock columns are left blank so reruns are byte-identical."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METRICS_COLUMNS)
        for r in rows:
            writer.writerow([
                r.method, r.scenario, r.problem_index,
                _cell(r.solved, deterministic, False),
                r.seed,
                _cell(r.avg_detected_objects, deterministic, False),
                _cell(r.track_rate, deterministic, False),
                _cell(r.avg_confidence, deterministic, False),
                _cell(r.scaled_avg_confidence, deterministic, False),
                _cell(r.path_length, deterministic, False),
                _cell(r.build_time_s, deterministic, True),
                _cell(r.plan_time_s, deterministic, True),
                _cell(r.solve_rate, deterministic, False),
                r.failure_reason,
            ])


def write_metrics_json(rows: list[MetricsRow], path,
                       deterministic: bool = True) -> None:
    payload = []
    for r in rows:
        doc = {
            "method": r.method, "scenario": r.scenario,
            "problem_index": r.problem_index, "solved": r.solved,
            "seed": r.seed,
            "avg_detected_objects": r.avg_detected_objects,
            "track_rate": r.track_rate,
            "avg_confidence": r.avg_confidence,
            "scaled_avg_confidence": r.scaled_avg_confidence,
            "path_length": r.path_length,
            "build_time_s": None if deterministic else r.build_time_s,
            "plan_time_s": None if deterministic else r.plan_time_s,
            "solve_rate": r.solve_rate,
            "failure_reason": r.failure_reason,
        }
        payload.append(doc)
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def write_timings_csv(rows: list[MetricsRow], path) -> None:
    """Sidecar with the real wall-clock numbers; varies run to run."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "scenario", "problem_index",
                         "build_time_s", "plan_time_s"])
        for r in rows:
            writer.writerow([
                r.method, r.scenario, r.problem_index,
                "" if r.build_time_s is None else repr(r.build_time_s),
                "" if r.plan_time_s is None else repr(r.plan_time_s),
            ])


# ---------------------------------------------------------------------------
# scaling sweep


@dataclass
class SweepRow:
    axis: str
    prm_size: int
    num_objects: int
    seed: int
    solved: bool
    build_time_s: float
    plan_time_s: float
    avg_detected_objects: float | None


def _sweep_cell(prm_size: int, num_objects: int, robot: RobotModel,
                planner: PlannerParams, steering: SteeringSpec,
                oracle: OracleParams, seed: int, axis: str,
                frames: int) -> SweepRow:
    scene = make_sweep_scene(num_objects)
    backend = OracleCostmap(scene, robot, oracle)
    setup = make_method(MOPS, scene, robot, backend,
                        planner.quadrature_samples)
    params = replace(planner, node_budget=prm_size)
    roadmap = build_roadmap(scene, robot, setup.sampler, setup.channel,
                            steering, params, seed, method=MOPS)
    problem = generate_problems(scene, robot, 1, seed)[0]
    t0 = time.perf_counter()
    try:
        result = plan(roadmap, scene, robot, backend, problem[0],
                      GoalSpec.at(problem[1]), steering, params,
                      channel=setup.channel)
    except PlanningError:
        return SweepRow(axis, prm_size, num_objects, seed, False,
                        roadmap.metadata.build_time_s,
                        time.perf_counter() - t0, None)
    plan_time = time.perf_counter() - t0
    nodes = result.waypoints[::params.quadrature_samples]
    ev = evaluate_path(nodes, scene, robot, steering, oracle, frames)
    return SweepRow(axis, prm_size, num_objects, seed, True,
                    roadmap.metadata.build_time_s, plan_time,
                    ev.avg_detected_objects)


def run_scaling_sweep(robot: RobotModel, planner: PlannerParams,
                      steering: SteeringSpec | None = None,
                      oracle: OracleParams | None = None,
                      prm_sizes: Sequence[int] = (50, 150, 300),
                      object_counts: Sequence[int] = (2, 5, 8),
                      fixed_objects: int = 5, fixed_size: int = 300,
                      seeds: int = 5, master_seed: int = 0,
                      frames: int = 50) -> list[SweepRow]:
    """Two sweep axes mirroring the roadmap-size / object-count study:
    vary the node budget at a fixed object count, then vary the number of
    monitored objects at a fixed budget."""
    steering = steering or SteeringSpec()
    oracle = oracle or OracleParams()
    rows = []
    for p in prm_sizes:
        for s in range(seeds):
            rows.append(_sweep_cell(p, fixed_objects, robot, planner,
                                    steering, oracle,
                                    method_seed(master_seed, 100 + s), "prm_size",
                                    frames))
    for n in object_counts:
        for s in range(seeds):
            rows.append(_sweep_cell(fixed_size, n, robot, planner, steering,
                                    oracle, method_seed(master_seed, 200 + s),
                                    "num_objects", frames))
    return rows


def write_sweep_csv(rows: list[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["axis", "prm_size", "num_objects", "seed", "solved",
                         "build_time_s", "plan_time_s",
                         "avg_detected_objects"])
        for r in rows:
            writer.writerow([
                r.axis, r.prm_size, r.num_objects, r.seed,
                "true" if r.solved else "false",
                repr(r.build_time_s), repr(r.plan_time_s),
                "" if r.avg_detected_objects is None
                else repr(r.avg_detected_objects),
            ])
