"""Scaling study: build time and coverage versus roadmap size and versus
the number of monitored objects.

    python3 scripts/run_sweep.py --out results/sweep.csv
"""

import argparse
from pathlib import Path

from viewprm import PlannerParams, RobotModel
from viewprm.bench import run_scaling_sweep, write_sweep_csv


def int_list(text):
    return tuple(int(v) for v in text.split(","))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/sweep.csv")
    ap.add_argument("--prm-sizes", type=int_list, default=(50, 150, 300))
    ap.add_argument("--object-counts", type=int_list, default=(2, 5, 8))
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rows = run_scaling_sweep(RobotModel(), PlannerParams(),
                             prm_sizes=args.prm_sizes,
                             object_counts=args.object_counts,
                             seeds=args.seeds, master_seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(rows, out)

    def med(vals):
        vals = sorted(vals)
        return vals[len(vals) // 2]

    print(f"wrote {out} ({len(rows)} cells)")
    for size in args.prm_sizes:
        cell = [r for r in rows if r.axis == "prm_size" and r.prm_size == size]
        print(f"  P={size:4d}  median build {med([r.build_time_s for r in cell]):7.2f}s  "
              f"avg_det {med([r.avg_detected_objects or 0.0 for r in cell]):.3f}")
    for n in args.object_counts:
        cell = [r for r in rows if r.axis == "num_objects" and r.num_objects == n]
        print(f"  N={n:4d}  median build {med([r.build_time_s for r in cell]):7.2f}s")


if __name__ == "__main__":
    main()
