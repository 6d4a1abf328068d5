"""Roadmap construction over sampled configurations.

Nodes arrive one at a time from a sampler callable; each connects to its k
nearest existing nodes through the steering function, and surviving edges
carry two raw cost channels: motion length and a left-Riemann quadrature of
the perception cost along the motion. Channel normalization to [0, 1]
happens at query time so one roadmap serves any cost trade-off.

Each node index gets its own deterministic random stream, so builds are
reproducible regardless of worker count.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import FileFormatError, RoadmapError
from .geometry import Configuration, RobotModel, config_distance, forward_kinematics
from .perception import PerceptionBackend, aggregate_cost
from .scenegraph import SceneGraph
from .steering import LocalMotion, SteeringSpec, motion_collision_free, steer

ROADMAP_FORMAT_VERSION = 1

SamplerFn = Callable[[np.random.Generator], Configuration]
ChannelFn = Callable[[LocalMotion], float]


@dataclass(frozen=True)
class PlannerParams:
    node_budget: int = 300
    k_neighbors: int = 5
    alpha: float = 1.0
    quadrature_samples: int = 10
    collision_resolution: float = 0.05
    fine_resolution: float = 0.01
    time_limit_s: float | None = None
    workers: int = 1

    def __post_init__(self):
        if self.node_budget < 1:
            raise RoadmapError("node_budget must be >= 1")
        if self.k_neighbors < 1:
            raise RoadmapError("k_neighbors must be >= 1")
        if self.alpha < 0.0:
            raise RoadmapError("alpha must be >= 0")
        if self.quadrature_samples < 2:
            raise RoadmapError("quadrature_samples must be >= 2")
        if self.collision_resolution <= 0.0 or self.fine_resolution <= 0.0:
            raise RoadmapError("collision resolutions must be positive")
        if self.workers < 1:
            raise RoadmapError("workers must be >= 1")


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    motion_cost: float
    perception_cost: float


@dataclass
class RoadmapMetadata:
    seed: int = 0
    method: str = "uniform"
    steering_kind: str = "straight"
    turning_radius: float = 0.5
    node_budget: int = 0
    k_neighbors: int = 5
    alpha: float = 1.0
    quadrature_samples: int = 10
    collision_resolution: float = 0.05
    build_time_s: float = 0.0  # diagnostic only; never serialized


@dataclass(frozen=True)
class NormBounds:
    motion_min: float
    motion_max: float
    perception_min: float
    perception_max: float

    @classmethod
    def over(cls, motion_costs, perception_costs) -> "NormBounds":
        m = list(motion_costs)
        p = list(perception_costs)
        if not m:
            raise RoadmapError("cost normalization needs at least one edge")
        return cls(min(m), max(m), min(p), max(p))


def normalize_value(value: float, hi: float) -> float:
    """Scale by the channel maximum; a flat-zero channel maps to 0.

    Dividing by the max (rather than min-max shifting) keeps each channel a
    positive multiple of its raw total, so the alpha sweep's raw-cost
    monotonicity carries over from the normalized objective. A min shift
    would add a per-edge offset, letting paths with different edge counts
    reorder between the raw and normalized scales.
    """
    if hi <= 0.0:
        return 0.0
    return value / hi


class Roadmap:
    def __init__(self, nodes: list[Configuration], edges: list[Edge],
                 directed: bool, metadata: RoadmapMetadata):
        self.nodes = nodes
        self.edges = edges
        self.directed = directed
        self.metadata = metadata

    def norm_bounds(self) -> NormBounds:
        return NormBounds.over((e.motion_cost for e in self.edges),
                               (e.perception_cost for e in self.edges))

    def node_array(self) -> np.ndarray:
        return np.array([q.as_tuple() for q in self.nodes], dtype=float)


def knn_indices(points: np.ndarray, q: Configuration, k: int,
                weights) -> list[int]:
    """Indices of the k nearest rows under the scaled configuration metric.

    Exact vectorized scan: the wrapped heading coordinate rules out
    axis-split spatial trees, and at roadmap scale a full scan is both exact
    and fast. Ties break on the lower index.
    """
    if len(points) == 0:
        return []
    t = q.as_tuple()
    dx = (points[:, 0] - t[0]) * weights[0]
    dy = (points[:, 1] - t[1]) * weights[1]
    dth = points[:, 2] - t[2]
    dth = (dth + math.pi) % (2.0 * math.pi) - math.pi
    dth *= weights[2]
    dp = (points[:, 3] - t[3]) * weights[3]
    dt = (points[:, 4] - t[4]) * weights[4]
    dist = dx * dx + dy * dy + dth * dth + dp * dp + dt * dt
    order = np.lexsort((np.arange(len(points)), dist))
    return [int(i) for i in order[:k]]


def edge_perception_cost(motion: LocalMotion, scene: SceneGraph,
                         backend: PerceptionBackend, samples: int) -> float:
    """Left-Riemann quadrature of the aggregate perception cost along a motion."""
    if samples < 2:
        raise RoadmapError("quadrature needs at least 2 samples")
    monitored = scene.monitored()
    cams = [forward_kinematics(motion.sample(k / samples), backend.robot)
            for k in range(samples)]
    matrix = getattr(backend, "pose_costs_matrix", None)
    if matrix is not None:
        costs = matrix(cams, monitored)
        weights = np.array([o.weight for o in monitored])
        return float(np.sum(costs @ weights) / samples)
    total = 0.0
    for cam in cams:
        for obj in monitored:
            total += obj.weight * backend.pose_cost(cam, obj)
    return total / samples


def make_quadrature_channel(scene: SceneGraph, backend: PerceptionBackend,
                            samples: int) -> ChannelFn:
    return lambda motion: edge_perception_cost(motion, scene, backend, samples)


def node_stream(seed: int, index: int) -> np.random.Generator:
    """Independent, order-free random stream for one node index."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, index)))


def build_roadmap(scene: SceneGraph, robot: RobotModel, sampler: SamplerFn,
                  channel: ChannelFn, steering: SteeringSpec,
                  params: PlannerParams, seed: int,
                  method: str = "uniform") -> Roadmap:
    """Grow a roadmap to the node budget (or a wall-clock limit).

    Every new node connects to its k nearest existing nodes; candidate edges
    must pass the collision check before costing. Car-like steering stores
    each direction separately since its motions are asymmetric.
    """
    start_time = time.monotonic()
    nodes: list[Configuration] = []
    points = np.empty((0, 5))
    edges: list[Edge] = []
    directed = steering.directed
    weights = robot.metric_weights

    def evaluate(args):
        u, v, motion = args
        if not motion_collision_free(motion, scene.obstacles, robot,
                                     params.collision_resolution):
            return None
        return Edge(u, v, motion.motion_length, channel(motion))

    pool = ThreadPoolExecutor(params.workers) if params.workers > 1 else None
    try:
        for index in range(params.node_budget):
            if (params.time_limit_s is not None
                    and time.monotonic() - start_time > params.time_limit_s):
                break
            rng = node_stream(seed, index)
            q = sampler(rng)
            new_idx = len(nodes)
            neighbors = knn_indices(points, q, params.k_neighbors, weights)

            jobs = []
            for j in neighbors:
                jobs.append((new_idx, j, steer(q, nodes[j], robot, steering)))
                if directed:
                    jobs.append((j, new_idx, steer(nodes[j], q, robot, steering)))
            results = pool.map(evaluate, jobs) if pool else map(evaluate, jobs)
            for edge in results:
                if edge is not None:
                    edges.append(edge)

            nodes.append(q)
            points = np.vstack([points, np.array([q.as_tuple()])])
    finally:
        if pool:
            pool.shutdown()

    metadata = RoadmapMetadata(
        seed=seed, method=method, steering_kind=steering.kind,
        turning_radius=steering.turning_radius, node_budget=params.node_budget,
        k_neighbors=params.k_neighbors, alpha=params.alpha,
        quadrature_samples=params.quadrature_samples,
        collision_resolution=params.collision_resolution,
        build_time_s=time.monotonic() - start_time)
    return Roadmap(nodes, edges, directed, metadata)


# ---------------------------------------------------------------------------
# query attachment


@dataclass(frozen=True)
class GoalSpec:
    """Either an explicit goal configuration or a ball of roadmap nodes."""

    config: Configuration | None = None
    center: Configuration | None = None
    radius: float | None = None

    @classmethod
    def at(cls, q: Configuration) -> "GoalSpec":
        return cls(config=q)

    @classmethod
    def ball(cls, center: Configuration, radius: float) -> "GoalSpec":
        if radius <= 0.0:
            raise RoadmapError("goal ball radius must be positive")
        return cls(center=center, radius=radius)

    def __post_init__(self):
        explicit = self.config is not None
        ball = self.center is not None and self.radius is not None
        if explicit == ball:
            raise RoadmapError("goal must be exactly one of: configuration, ball")


@dataclass
class QueryView:
    """A roadmap plus start/goal attachment, flattened to directed edge arrays."""

    nodes: list[Configuration]
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_motion: np.ndarray
    edge_perception: np.ndarray
    out_adj: list[list[tuple[int, int]]]  # node -> [(edge_id, neighbor)]
    in_adj: list[list[tuple[int, int]]]
    start_index: int
    goal_indices: frozenset[int]
    bounds: NormBounds = field(init=False)

    def __post_init__(self):
        self.bounds = NormBounds.over(self.edge_motion, self.edge_perception)

    def combined_costs(self, alpha: float) -> np.ndarray:
        """Normalized motion plus alpha times normalized perception, per edge.

        Channels are scaled by their max over the attached view (see
        normalize_value for why there is no min shift)."""
        b = self.bounds
        cm = (self.edge_motion / b.motion_max if b.motion_max > 0.0
              else np.zeros_like(self.edge_motion))
        cp = (self.edge_perception / b.perception_max if b.perception_max > 0.0
              else np.zeros_like(self.edge_perception))
        return cm + alpha * cp


def attach_query(roadmap: Roadmap, q_start: Configuration, goal: GoalSpec,
                 scene: SceneGraph, robot: RobotModel, channel: ChannelFn,
                 steering: SteeringSpec, params: PlannerParams) -> QueryView:
    """Connect the start (and an explicit goal) to the roadmap and rescan bounds."""
    if not roadmap.edges:
        raise RoadmapError("cannot attach a query to a roadmap with no edges")
    base_n = len(roadmap.nodes)
    nodes = list(roadmap.nodes)
    points = roadmap.node_array()
    weights = robot.metric_weights

    dir_u: list[int] = []
    dir_v: list[int] = []
    dir_m: list[float] = []
    dir_p: list[float] = []
    for e in roadmap.edges:
        dir_u.append(e.u)
        dir_v.append(e.v)
        dir_m.append(e.motion_cost)
        dir_p.append(e.perception_cost)
        if not roadmap.directed:
            dir_u.append(e.v)
            dir_v.append(e.u)
            dir_m.append(e.motion_cost)
            dir_p.append(e.perception_cost)

    def try_attach(u_cfg: Configuration, v_cfg: Configuration, u: int, v: int) -> bool:
        motion = steer(u_cfg, v_cfg, robot, steering)
        if not motion_collision_free(motion, scene.obstacles, robot,
                                     params.collision_resolution):
            return False
        dir_u.append(u)
        dir_v.append(v)
        dir_m.append(motion.motion_length)
        dir_p.append(channel(motion))
        return True

    start_index = len(nodes)
    nodes.append(q_start)
    attached = 0
    for j in knn_indices(points, q_start, params.k_neighbors, weights):
        if try_attach(q_start, roadmap.nodes[j], start_index, j):
            attached += 1
    if attached == 0:
        raise RoadmapError("start configuration could not be connected to the roadmap")

    if goal.config is not None:
        goal_index = len(nodes)
        nodes.append(goal.config)
        attached = 0
        for j in knn_indices(points, goal.config, params.k_neighbors, weights):
            if try_attach(roadmap.nodes[j], goal.config, j, goal_index):
                attached += 1
        if attached == 0:
            raise RoadmapError("goal configuration could not be connected to the roadmap")
        goal_indices = frozenset([goal_index])
    else:
        members = [i for i in range(base_n)
                   if config_distance(roadmap.nodes[i], goal.center, weights)
                   <= goal.radius]
        if not members:
            raise RoadmapError("no roadmap node lies inside the goal ball")
        goal_indices = frozenset(members)

    out_adj: list[list[tuple[int, int]]] = [[] for _ in nodes]
    in_adj: list[list[tuple[int, int]]] = [[] for _ in nodes]
    for eid, (u, v) in enumerate(zip(dir_u, dir_v)):
        out_adj[u].append((eid, v))
        in_adj[v].append((eid, u))

    return QueryView(
        nodes=nodes,
        edge_u=np.array(dir_u, dtype=int),
        edge_v=np.array(dir_v, dtype=int),
        edge_motion=np.array(dir_m, dtype=float),
        edge_perception=np.array(dir_p, dtype=float),
        out_adj=out_adj,
        in_adj=in_adj,
        start_index=start_index,
        goal_indices=goal_indices,
    )


# ---------------------------------------------------------------------------
# serialization (deterministic: no wall-clock values go into the file)


def roadmap_to_dict(roadmap: Roadmap) -> dict:
    md = roadmap.metadata
    return {
        "format": ROADMAP_FORMAT_VERSION,
        "directed": roadmap.directed,
        "nodes": [list(q.as_tuple()) for q in roadmap.nodes],
        "edges": [[e.u, e.v, e.motion_cost, e.perception_cost]
                  for e in roadmap.edges],
        "metadata": {
            "seed": md.seed,
            "method": md.method,
            "steering_kind": md.steering_kind,
            "turning_radius": md.turning_radius,
            "node_budget": md.node_budget,
            "k_neighbors": md.k_neighbors,
            "alpha": md.alpha,
            "quadrature_samples": md.quadrature_samples,
            "collision_resolution": md.collision_resolution,
        },
    }


def roadmap_from_dict(doc: dict) -> Roadmap:
    if doc.get("format") != ROADMAP_FORMAT_VERSION:
        raise FileFormatError(f"unsupported roadmap format {doc.get('format')!r}")
    nodes = [Configuration(*row) for row in doc["nodes"]]
    edges = [Edge(int(u), int(v), float(m), float(p))
             for u, v, m, p in doc["edges"]]
    md = doc.get("metadata", {})
    metadata = RoadmapMetadata(
        seed=int(md.get("seed", 0)),
        method=str(md.get("method", "uniform")),
        steering_kind=str(md.get("steering_kind", "straight")),
        turning_radius=float(md.get("turning_radius", 0.5)),
        node_budget=int(md.get("node_budget", len(nodes))),
        k_neighbors=int(md.get("k_neighbors", 5)),
        alpha=float(md.get("alpha", 1.0)),
        quadrature_samples=int(md.get("quadrature_samples", 10)),
        collision_resolution=float(md.get("collision_resolution", 0.05)),
    )
    return Roadmap(nodes, edges, bool(doc["directed"]), metadata)


def roadmap_hash(roadmap: Roadmap) -> str:
    """Stable content digest, used to tie path files back to their roadmap."""
    blob = json.dumps(roadmap_to_dict(roadmap), sort_keys=True,
                      separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def save_roadmap(roadmap: Roadmap, path) -> None:
    with open(path, "w") as fh:
        json.dump(roadmap_to_dict(roadmap), fh, sort_keys=True,
                  separators=(",", ":"))
        fh.write("\n")


def load_roadmap(path) -> Roadmap:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"roadmap file {path}: invalid JSON ({exc})") from exc
    return roadmap_from_dict(doc)
