"""Cost trade-off curve: sweep the perception weight alpha over one roadmap
and report how the chosen path's raw cost channels move.

Raising alpha should never increase the perception total and never decrease
the motion total, since every query optimizes over the same edge set.

    python3 scripts/alpha_tradeoff.py --scene office --seeds 10
"""

import argparse
from dataclasses import replace

from viewprm import (
    GoalSpec,
    OracleCostmap,
    PlannerParams,
    RobotModel,
    build_roadmap,
    generate_problems,
    plan,
)
from viewprm.baselines import MOPS, make_method
from viewprm.cli import resolve_scene
from viewprm.errors import PlanningError
from viewprm.steering import SteeringSpec

ALPHAS = (0.0, 0.5, 1.0, 2.0, 4.0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scene", default="office")
    ap.add_argument("--nodes", type=int, default=300)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    scene = resolve_scene(args.scene)
    robot = RobotModel()
    backend = OracleCostmap(scene, robot)
    params = PlannerParams(node_budget=args.nodes, workers=4)
    steering = SteeringSpec()

    violations = 0
    print(f"{'seed':>4s}  " + "  ".join(f"a={a:<11g}" for a in ALPHAS)
          + "  (c_p / c_m per alpha)")
    for s in range(args.seeds):
        setup = make_method(MOPS, scene, robot, backend,
                            params.quadrature_samples)
        roadmap = build_roadmap(scene, robot, setup.sampler, setup.channel,
                                steering, params, seed=args.seed + s,
                                method=MOPS)
        q_start, q_goal = generate_problems(scene, robot, 1, args.seed + s)[0]
        curve = []
        for alpha in ALPHAS:
            try:
                r = plan(roadmap, scene, robot, backend, q_start,
                         GoalSpec.at(q_goal), steering,
                         replace(params, alpha=alpha), channel=setup.channel)
            except PlanningError:
                curve.append(None)
                continue
            curve.append((r.total_perception_cost, r.total_motion_cost,
                          r.normalized_perception_total,
                          r.normalized_motion_total))
        ok = [c for c in curve if c is not None]
        for c1, c2 in zip(ok, ok[1:]):
            if c2[0] > c1[0] + 1e-9 or c2[1] < c1[1] - 1e-9:
                violations += 1
                print(f"  raw violation seed {s}: {c1} -> {c2}")
            if c2[2] > c1[2] + 1e-9 or c2[3] < c1[3] - 1e-9:
                print(f"  normalized violation seed {s}: {c1} -> {c2}")
        print(f"{s:4d}  " + "  ".join(
            "     -      " if c is None else f"{c[0]:5.2f}/{c[1]:5.2f} "
            for c in curve))
    print(f"raw monotonicity violations: {violations}")


if __name__ == "__main__":
    main()
