"""Method comparison on one scene: build a roadmap per method, solve the
shared problem set, write metrics (plus the wall-clock sidecar).

    python3 scripts/run_benchmark.py --scene office --out results/office
"""

import argparse
import time
from pathlib import Path

from viewprm import (
    OracleCostmap,
    PlannerParams,
    RobotModel,
    ScenarioSpec,
    run_benchmark,
    save_roadmap,
    write_metrics_csv,
    write_metrics_json,
    write_timings_csv,
)
from viewprm.cli import resolve_scene


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scene", default="office")
    ap.add_argument("--out", default="results/office")
    ap.add_argument("--problems", type=int, default=20)
    ap.add_argument("--nodes", type=int, default=300)
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--save-roadmaps", action="store_true")
    args = ap.parse_args()

    scene = resolve_scene(args.scene)
    robot = RobotModel()
    spec = ScenarioSpec(
        scene=scene, robot=robot,
        planner=PlannerParams(node_budget=args.nodes, k_neighbors=args.k,
                              alpha=args.alpha, workers=args.workers),
        scenario=args.scene, num_problems=args.problems,
        master_seed=args.seed)

    t0 = time.time()
    result = run_benchmark(spec, OracleCostmap(scene, robot))
    elapsed = time.time() - t0

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(result.rows, out.with_suffix(".csv"))
    write_metrics_json(result.rows, out.with_suffix(".json"))
    write_timings_csv(result.rows, out.with_name(out.name + ".timings.csv"))
    if args.save_roadmaps:
        for method, rm in result.roadmaps.items():
            save_roadmap(rm, out.with_name(f"{out.name}.{method}.roadmap.json"))

    print(f"{args.scene}: {args.problems} problems, {elapsed:.1f}s wall")
    header = f"{'method':26s} {'solve':>6s} {'avg_det':>8s} {'track':>6s} {'conf':>6s} {'length':>7s}"
    print(header)
    for m in spec.methods:
        agg = result.aggregate(m)
        print(f"{m:26s} {agg.solve_rate:6.2f} {agg.avg_detected_objects:8.3f} "
              f"{agg.track_rate:6.3f} {agg.avg_confidence:6.3f} "
              f"{agg.path_length:7.2f}")


if __name__ == "__main__":
    main()
