"""Shortest-path search over an attached roadmap query.

The default heuristic is hop-based: h(n) = H_min(n) * c_min, where H_min
counts the fewest edges from n to any goal node and c_min is the smallest
combined normalized edge cost anywhere in the view. Any path out of n uses
at least H_min(n) edges and each edge costs at least c_min, so h never
overestimates; H_min(u) <= 1 + H_min(v) across an edge gives consistency.
"""

from __future__ import annotations

import heapq
import json
import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FileFormatError, NoPathError, RoadmapError
from .geometry import Configuration, RobotModel, config_distance
from .perception import PerceptionBackend
from .roadmap import (
    GoalSpec,
    PlannerParams,
    QueryView,
    Roadmap,
    attach_query,
    make_quadrature_channel,
)
from .scenegraph import SceneGraph
from .steering import SteeringSpec, discretize, motion_collision_free, steer

PATH_FORMAT_VERSION = 1

HOP = "hop"
ZERO = "zero"
# Straight-line distance to the goal region. Not proven consistent under
# normalized composite edge costs; kept selectable for comparison only.
EUCLIDEAN = "euclidean"

HeuristicFn = Callable[[int], float]


@dataclass(frozen=True)
class HopField:
    hops: np.ndarray  # per-node minimum edge count to the goal set, inf if cut off
    c_min: float

    def heuristic(self, node: int) -> float:
        h = self.hops[node]
        if math.isinf(h):
            return math.inf
        return h * self.c_min


def compute_hop_field(view: QueryView, combined: np.ndarray) -> HopField:
    """Multi-source BFS backward from the goal set over reversed edges."""
    if not view.goal_indices:
        raise RoadmapError("hop field needs a nonempty goal set")
    n = len(view.nodes)
    hops = np.full(n, math.inf)
    frontier = deque()
    for g in sorted(view.goal_indices):
        hops[g] = 0.0
        frontier.append(g)
    while frontier:
        v = frontier.popleft()
        for _, u in view.in_adj[v]:
            if math.isinf(hops[u]):
                hops[u] = hops[v] + 1.0
                frontier.append(u)
    c_min = float(np.min(combined)) if len(combined) else 0.0
    return HopField(hops=hops, c_min=c_min)


def make_heuristic(view: QueryView, combined: np.ndarray, kind: str,
                   robot: RobotModel) -> HeuristicFn:
    if kind == ZERO:
        return lambda node: 0.0
    if kind == HOP:
        return compute_hop_field(view, combined).heuristic
    if kind == EUCLIDEAN:
        goals = [view.nodes[g] for g in sorted(view.goal_indices)]
        scale = view.bounds.motion_max
        if scale <= 0.0:
            return lambda node: 0.0
        w = robot.metric_weights

        def h(node: int) -> float:
            q = view.nodes[node]
            return min(config_distance(q, g, w) for g in goals) / scale

        return h
    raise RoadmapError(f"unknown heuristic kind {kind!r}")


@dataclass
class SearchOutcome:
    node_indices: list[int]
    edge_ids: list[int]
    total_combined_cost: float
    expanded_nodes: int


def astar(view: QueryView, combined: np.ndarray, start: int,
          goal_indices: frozenset[int], heuristic: HeuristicFn) -> SearchOutcome:
    """A* with (f, h, node index) ordering; equal f breaks toward lower h.

    With a consistent heuristic every node is expanded at most once; stale
    heap entries are dropped against the closed set.
    """
    g_score = {start: 0.0}
    parent: dict[int, tuple[int, int]] = {}
    closed: set[int] = set()
    h0 = heuristic(start)
    heap = [(h0, h0, start)]
    expanded = 0
    while heap:
        _, _, u = heapq.heappop(heap)
        if u in closed:
            continue
        closed.add(u)
        expanded += 1
        if u in goal_indices:
            nodes = [u]
            edge_ids = []
            while nodes[-1] in parent:
                prev, eid = parent[nodes[-1]]
                nodes.append(prev)
                edge_ids.append(eid)
            nodes.reverse()
            edge_ids.reverse()
            return SearchOutcome(nodes, edge_ids, g_score[u], expanded)
        gu = g_score[u]
        for eid, v in view.out_adj[u]:
            if v in closed:
                continue
            tentative = gu + float(combined[eid])
            if tentative < g_score.get(v, math.inf):
                g_score[v] = tentative
                parent[v] = (u, eid)
                hv = heuristic(v)
                if not math.isinf(hv):
                    heapq.heappush(heap, (tentative + hv, hv, v))
    raise NoPathError("no path reaches the goal set", expanded_nodes=expanded)


@dataclass
class PathResult:
    node_indices: list[int]
    waypoints: list[Configuration]
    edge_motion_costs: list[float]
    edge_perception_costs: list[float]
    edge_combined_costs: list[float]
    total_motion_cost: float
    total_perception_cost: float
    total_combined_cost: float
    # per-channel sums after min-max normalization; these are the quantities
    # the alpha trade-off is defined over
    normalized_motion_total: float
    normalized_perception_total: float
    expanded_nodes: int
    plan_time_s: float
    revalidation_ok: bool


def plan(roadmap: Roadmap, scene: SceneGraph, robot: RobotModel,
         backend: PerceptionBackend, q_start: Configuration, goal: GoalSpec,
         steering: SteeringSpec, params: PlannerParams,
         heuristic_kind: str = HOP,
         channel=None) -> PathResult:
    """Attach, normalize, search, then expand and re-validate the path.

    The attachment channel defaults to the same perception quadrature used
    during the build; baselines pass their own so attached edges stay
    consistent with their roadmap's cost semantics.
    """
    t0 = time.perf_counter()
    if channel is None:
        channel = make_quadrature_channel(scene, backend,
                                          params.quadrature_samples)
    view = attach_query(roadmap, q_start, goal, scene, robot, channel,
                        steering, params)
    combined = view.combined_costs(params.alpha)
    heuristic = make_heuristic(view, combined, heuristic_kind, robot)
    outcome = astar(view, combined, view.start_index, view.goal_indices,
                    heuristic)

    waypoints: list[Configuration] = [view.nodes[outcome.node_indices[0]]]
    revalidation_ok = True
    k = params.quadrature_samples
    for u, v in zip(outcome.node_indices, outcome.node_indices[1:]):
        motion = steer(view.nodes[u], view.nodes[v], robot, steering)
        if not motion_collision_free(motion, scene.obstacles, robot,
                                     params.fine_resolution):
            revalidation_ok = False
        waypoints.extend(q for _, q in discretize(motion, k)[1:])

    edge_m = [float(view.edge_motion[e]) for e in outcome.edge_ids]
    edge_p = [float(view.edge_perception[e]) for e in outcome.edge_ids]
    edge_c = [float(combined[e]) for e in outcome.edge_ids]
    b = view.bounds
    norm_m = math.fsum(edge_m) / b.motion_max if b.motion_max > 0.0 else 0.0
    norm_p = math.fsum(edge_p) / b.perception_max \
        if b.perception_max > 0.0 else 0.0
    return PathResult(
        node_indices=outcome.node_indices,
        waypoints=waypoints,
        edge_motion_costs=edge_m,
        edge_perception_costs=edge_p,
        edge_combined_costs=edge_c,
        total_motion_cost=math.fsum(edge_m),
        total_perception_cost=math.fsum(edge_p),
        total_combined_cost=outcome.total_combined_cost,
        normalized_motion_total=norm_m,
        normalized_perception_total=norm_p,
        expanded_nodes=outcome.expanded_nodes,
        plan_time_s=time.perf_counter() - t0,
        revalidation_ok=revalidation_ok,
    )


# ---------------------------------------------------------------------------
# path files (timings stay out so identical seeds give identical bytes)


def path_to_dict(result: PathResult, alpha: float, seed: int,
                 roadmap_digest: str, heuristic_kind: str = HOP) -> dict:
    return {
        "format": PATH_FORMAT_VERSION,
        "metadata": {
            "alpha": alpha,
            "seed": seed,
            "roadmap_hash": roadmap_digest,
            "heuristic": heuristic_kind,
        },
        "node_indices": list(result.node_indices),
        "waypoints": [list(q.as_tuple()) for q in result.waypoints],
        "edge_costs": {
            "motion": result.edge_motion_costs,
            "perception": result.edge_perception_costs,
            "combined": result.edge_combined_costs,
        },
        "totals": {
            "motion": result.total_motion_cost,
            "perception": result.total_perception_cost,
            "combined": result.total_combined_cost,
        },
        "expanded_nodes": result.expanded_nodes,
        "revalidation_ok": result.revalidation_ok,
    }


def save_path(result: PathResult, path, alpha: float, seed: int,
              roadmap_digest: str, heuristic_kind: str = HOP) -> None:
    with open(path, "w") as fh:
        json.dump(path_to_dict(result, alpha, seed, roadmap_digest,
                               heuristic_kind), fh, sort_keys=True,
                  separators=(",", ":"))
        fh.write("\n")


def load_path_waypoints(path) -> list[Configuration]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"path file {path}: invalid JSON ({exc})") from exc
    if doc.get("format") != PATH_FORMAT_VERSION:
        raise FileFormatError(f"unsupported path format {doc.get('format')!r}")
    return [Configuration(*row) for row in doc["waypoints"]]
