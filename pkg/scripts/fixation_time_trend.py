#!/usr/bin/env python3
"""Fixation-time growth on the stars-on-a-cycle-plus-line family.

Runs the effective-step process from a uniform single fitness-r node
(everyone else fitness 1) and prints how the mean number of effective
steps to fixation grows with the degree parameter.

Example:
    python scripts/fixation_time_trend.py --deltas 4 8 16 --trials 500 --seed 1
"""

import argparse
import sys

from moransim import UniformSingle, T1, fixation_time_stats, lower_bound_graph, spawn_rng


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--deltas", type=int, nargs="+", default=[4, 8, 16])
    parser.add_argument("--n", type=int, help="node count (default: 4*delta + 8)")
    parser.add_argument("--r", type=float, default=2.0)
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    prev = None
    print("delta,n,mean_effective_steps,ratio_to_previous")
    for delta in args.deltas:
        n = args.n if args.n is not None else 4 * delta + 8
        graph = lower_bound_graph(delta, n)
        stats = fixation_time_stats(
            graph, args.r, UniformSingle(T1), args.trials,
            spawn_rng(args.seed, delta, "trend"),
        )
        ratio = "" if prev is None else f"{stats.mean / prev:.2f}"
        print(f"{delta},{n},{stats.mean:.1f},{ratio}")
        prev = stats.mean
    return 0


if __name__ == "__main__":
    sys.exit(main())
