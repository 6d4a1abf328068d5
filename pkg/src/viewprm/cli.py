"""Command-line entry points.

Subcommands: gen-dataset, train-costmap, build-prm, plan, eval-path,
benchmark, sweep. Each writes its results to files and prints a single
summary line. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .baselines import METHODS, MOPS, UNIFORM, make_method
from .bench import (
    ScenarioSpec,
    evaluate_path,
    run_benchmark,
    run_scaling_sweep,
    write_metrics_csv,
    write_metrics_json,
    write_sweep_csv,
    write_timings_csv,
)
from .costmap import TrainingConfig, load_model, train_costmap
from .errors import PlanningError
from .geometry import Configuration, RobotModel
from .perception import (
    OracleCostmap,
    OracleParams,
    generate_dataset,
    load_samples,
    save_samples,
)
from .roadmap import (
    GoalSpec,
    PlannerParams,
    build_roadmap,
    load_roadmap,
    roadmap_hash,
    save_roadmap,
)
from .scenegraph import load_scene
from .scenes import make_gallery_scene, make_office_scene
from .search import HOP, load_path_waypoints, plan, save_path
from .steering import REEDS_SHEPP, STRAIGHT, SteeringSpec

STOCK_SCENES = {
    "office": lambda: make_office_scene(),
    "office8": lambda: make_office_scene(8),
    "gallery": lambda: make_gallery_scene(),
    "gallery_flipped": lambda: make_gallery_scene(0.2, 1.0),
}


def resolve_scene(name: str):
    """A path to a scene file, or one of the stock scene names."""
    if os.path.exists(name):
        return load_scene(name)
    if name in STOCK_SCENES:
        return STOCK_SCENES[name]()
    raise PlanningError(
        f"scene {name!r} is neither a file nor one of {sorted(STOCK_SCENES)}")


def parse_config(text: str) -> Configuration:
    parts = text.split(",")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError(
            "configuration needs 5 comma-separated values: x,y,theta,pan,tilt")
    try:
        return Configuration(*(float(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def make_backend(spec: str, scene, robot: RobotModel):
    if spec == "oracle":
        return OracleCostmap(scene, robot)
    return load_model(spec, robot)


def add_common(p: argparse.ArgumentParser, scene_required: bool = True):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scene", required=scene_required,
                   help="scene JSON file or stock scene name")
    p.add_argument("--out", required=True)


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(prog="viewprm")
    sub = root.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dataset", help="sample labeled camera poses")
    add_common(p)
    p.add_argument("--count", type=int, default=10000)

    p = sub.add_parser("train-costmap", help="fit the perception cost model")
    add_common(p)
    p.add_argument("--data", required=True, help="JSONL dataset file")
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--hidden", type=parse_int_list, default=(64, 64, 64),
                   help="comma-separated hidden layer sizes")

    p = sub.add_parser("build-prm", help="construct a roadmap")
    add_common(p)
    p.add_argument("--method", choices=METHODS + (UNIFORM,), default=MOPS)
    p.add_argument("--nodes", type=int, default=300)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--quadrature", type=int, default=10)
    p.add_argument("--steering", choices=(STRAIGHT, REEDS_SHEPP),
                   default=STRAIGHT)
    p.add_argument("--turning-radius", type=float, default=0.5)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--backend", default="oracle",
                   help="'oracle' or a trained model file")

    p = sub.add_parser("plan", help="query a roadmap")
    add_common(p)
    p.add_argument("--roadmap", required=True)
    p.add_argument("--start", type=parse_config, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--goal", type=parse_config,
                       help="goal configuration x,y,theta,pan,tilt")
    group.add_argument("--goal-ball",
                       help="x,y,theta,pan,tilt,radius goal region")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--heuristic", default=HOP)
    p.add_argument("--backend", default="oracle")

    p = sub.add_parser("eval-path", help="score a planned path frame by frame")
    add_common(p)
    p.add_argument("--path", required=True)
    p.add_argument("--frames", type=int, default=50)
    p.add_argument("--tau", type=float, default=0.25)
    p.add_argument("--gap-tolerance", type=int, default=3)
    p.add_argument("--steering", choices=(STRAIGHT, REEDS_SHEPP),
                   default=STRAIGHT)
    p.add_argument("--turning-radius", type=float, default=0.5)

    p = sub.add_parser("benchmark", help="compare all methods on one scene")
    add_common(p)
    p.add_argument("--problems", type=int, default=20)
    p.add_argument("--nodes", type=int, default=300)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--frames", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--scenario", default="office")
    p.add_argument("--backend", default="oracle")

    p = sub.add_parser("sweep", help="roadmap-size and object-count scaling")
    add_common(p, scene_required=False)
    p.add_argument("--prm-sizes", type=parse_int_list, default=(50, 150, 300))
    p.add_argument("--object-counts", type=parse_int_list, default=(2, 5, 8))
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--nodes", type=int, default=300)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--fixed-size", type=int, default=300,
                   help="node budget for the object-count axis")
    p.add_argument("--fixed-objects", type=int, default=5,
                   help="object count for the roadmap-size axis")
    p.add_argument("--frames", type=int, default=50)

    return root


def cmd_gen_dataset(args) -> str:
    scene = resolve_scene(args.scene)
    samples = generate_dataset(scene, RobotModel(), args.count, args.seed)
    save_samples(samples, args.out)
    return f"gen-dataset: wrote {len(samples)} samples to {args.out}"


def cmd_train_costmap(args) -> str:
    scene = resolve_scene(args.scene)
    samples = load_samples(args.data)
    config = TrainingConfig(epochs=args.epochs, batch_size=args.batch_size,
                            learning_rate=args.learning_rate,
                            hidden_sizes=args.hidden, seed=args.seed)
    model, report = train_costmap(samples, scene, RobotModel(), config)
    model.save(args.out)
    return (f"train-costmap: {len(samples)} samples, "
            f"holdout mse {report.final_holdout_mse:.5f}, saved {args.out}")


def cmd_build_prm(args) -> str:
    scene = resolve_scene(args.scene)
    robot = RobotModel()
    backend = make_backend(args.backend, scene, robot)
    params = PlannerParams(node_budget=args.nodes, k_neighbors=args.k,
                           quadrature_samples=args.quadrature,
                           workers=args.workers)
    steering = SteeringSpec(kind=args.steering,
                            turning_radius=args.turning_radius)
    setup = make_method(args.method, scene, robot, backend, args.quadrature)
    roadmap = build_roadmap(scene, robot, setup.sampler, setup.channel,
                            steering, params, args.seed, method=args.method)
    save_roadmap(roadmap, args.out)
    return (f"build-prm: {len(roadmap.nodes)} nodes, {len(roadmap.edges)} "
            f"edges ({args.method}) -> {args.out}")


def cmd_plan(args) -> str:
    scene = resolve_scene(args.scene)
    robot = RobotModel()
    backend = make_backend(args.backend, scene, robot)
    roadmap = load_roadmap(args.roadmap)
    steering = SteeringSpec(kind=roadmap.metadata.steering_kind,
                            turning_radius=roadmap.metadata.turning_radius)
    params = PlannerParams(node_budget=roadmap.metadata.node_budget,
                           k_neighbors=roadmap.metadata.k_neighbors,
                           alpha=args.alpha,
                           quadrature_samples=roadmap.metadata.quadrature_samples)
    if args.goal is not None:
        goal = GoalSpec.at(args.goal)
    else:
        parts = args.goal_ball.split(",")
        if len(parts) != 6:
            raise PlanningError("--goal-ball needs x,y,theta,pan,tilt,radius")
        goal = GoalSpec.ball(Configuration(*(float(v) for v in parts[:5])),
                             float(parts[5]))
    result = plan(roadmap, scene, robot, backend, args.start, goal, steering,
                  params, heuristic_kind=args.heuristic)
    save_path(result, args.out, args.alpha, args.seed, roadmap_hash(roadmap),
              args.heuristic)
    return (f"plan: {len(result.node_indices)} nodes, combined cost "
            f"{result.total_combined_cost:.4f}, {result.expanded_nodes} "
            f"expansions -> {args.out}")


def cmd_eval_path(args) -> str:
    import json

    scene = resolve_scene(args.scene)
    robot = RobotModel()
    waypoints = load_path_waypoints(args.path)
    steering = SteeringSpec(kind=args.steering,
                            turning_radius=args.turning_radius)
    ev = evaluate_path(waypoints, scene, robot, steering,
                       frames=args.frames,
                       detection_threshold=args.tau,
                       gap_tolerance=args.gap_tolerance)
    doc = {
        "avg_detected_objects": ev.avg_detected_objects,
        "track_rate": ev.track_rate,
        "avg_confidence": ev.avg_confidence,
        "scaled_avg_confidence": ev.scaled_avg_confidence,
        "path_length": ev.path_length,
        "frames": args.frames,
        "detection_threshold": args.tau,
        "gap_tolerance": args.gap_tolerance,
        "seed": args.seed,
    }
    with open(args.out, "w") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    return (f"eval-path: detections/frame {ev.avg_detected_objects:.3f}, "
            f"track rate {ev.track_rate:.3f} -> {args.out}")


def _sibling(out: str, tag: str) -> Path:
    p = Path(out)
    return p.with_name(p.stem + tag)


def cmd_benchmark(args) -> str:
    scene = resolve_scene(args.scene)
    robot = RobotModel()
    backend = make_backend(args.backend, scene, robot)
    params = PlannerParams(node_budget=args.nodes, k_neighbors=args.k,
                           alpha=args.alpha, workers=args.workers)
    spec = ScenarioSpec(scene=scene, robot=robot, planner=params,
                        scenario=args.scenario, num_problems=args.problems,
                        master_seed=args.seed, frames=args.frames)
    result = run_benchmark(spec, backend)
    write_metrics_csv(result.rows, args.out)
    write_metrics_json(result.rows, _sibling(args.out, ".json"))
    write_timings_csv(result.rows, _sibling(args.out, ".timings.csv"))
    solved = sum(1 for r in result.rows
                 if r.problem_index != "all" and r.solved)
    total = sum(1 for r in result.rows if r.problem_index != "all")
    return (f"benchmark: {len(spec.methods)} methods x {args.problems} "
            f"problems, {solved}/{total} solved -> {args.out}")


def cmd_sweep(args) -> str:
    robot = RobotModel()
    params = PlannerParams(node_budget=args.nodes, k_neighbors=args.k)
    rows = run_scaling_sweep(robot, params, prm_sizes=args.prm_sizes,
                             object_counts=args.object_counts,
                             fixed_objects=args.fixed_objects,
                             fixed_size=args.fixed_size,
                             seeds=args.seeds, master_seed=args.seed,
                             frames=args.frames)
    write_sweep_csv(rows, args.out)
    return f"sweep: {len(rows)} cells -> {args.out}"


COMMANDS = {
    "gen-dataset": cmd_gen_dataset,
    "train-costmap": cmd_train_costmap,
    "build-prm": cmd_build_prm,
    "plan": cmd_plan,
    "eval-path": cmd_eval_path,
    "benchmark": cmd_benchmark,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        summary = COMMANDS[args.command](args)
    except PlanningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
