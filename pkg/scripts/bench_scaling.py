#!/usr/bin/env python3
"""Step-count and wall-time scaling of the two simulation backends.

Example:
    python scripts/bench_scaling.py --family star --sizes 50 100 200 400 \
        --r 2 --trials 20 --seed 1 --out star_scaling.csv
"""

import argparse
import sys

from moransim.bench import bench_family, rows_to_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", default="star",
                        choices=("complete", "star", "line", "cycle", "lower_bound"))
    parser.add_argument("--sizes", type=int, nargs="+", required=True)
    parser.add_argument("--delta", type=int, help="max degree (lower_bound family)")
    parser.add_argument("--r", type=float, default=2.0)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", help="CSV output path (default: stdout)")
    args = parser.parse_args()

    rows, total = bench_family(
        args.family, args.sizes, args.r, args.trials, args.seed, delta=args.delta
    )
    csv_text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"wrote {args.out} ({total} steps sampled)", file=sys.stderr)
    else:
        print(csv_text, end="")

    for n in sorted(set(row.n for row in rows)):
        pair = {row.backend: row.mean_steps for row in rows if row.n == n}
        ratio = pair["all_steps"] / pair["effective"]
        print(f"n={n}: all/effective step ratio {ratio:.1f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
