"""Command-line front end.

Every run prints exactly one JSON report object on stdout and a short
human summary on stderr.  Exit codes: 0 success, 2 usage or input error,
3 simulation took too long.  Seeds are mandatory for the stochastic
subcommands so every published number can be reproduced bit-exactly
(wall-time fields excepted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional

from . import bench as bench_mod
from .errors import MoranError
from .estimate import (
    estimate_extinction_t1,
    estimate_extinction_t2,
    estimate_fixation_t1,
    estimate_generalized,
    fixation_time_stats,
)
from .exact import averaged_problem, solve_chain
from .graphs import (
    Configuration,
    Explicit,
    Graph,
    T1,
    T2,
    UniformSingle,
    gen_family,
    read_edge_list,
)
from .seeding import spawn_rng

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOO_LONG = 3

PROBLEMS = ("fixation-t1", "extinction-t1", "extinction-t2", "generalized")


def _add_graph_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", metavar="FILE", help="edge-list file ('n m' header)")
    parser.add_argument("--family",
                        choices=("complete", "star", "line", "cycle", "lower_bound"))
    parser.add_argument("--n", type=int, help="node count for --family")
    parser.add_argument("--delta", type=int, help="max degree (lower_bound family)")


def _resolve_graph(args: argparse.Namespace) -> tuple[Graph, str]:
    if args.graph and args.family:
        raise MoranError("give either --graph or --family, not both")
    if args.graph:
        return read_edge_list(args.graph), f"file:{args.graph}"
    if args.family:
        if args.n is None:
            raise MoranError("--family needs --n")
        graph = gen_family(args.family, n=args.n, delta=args.delta)
        return graph, f"family:{args.family}"
    raise MoranError("a graph is required: --graph FILE or --family NAME --n N")


def _parse_mask(text: str, n: int) -> int:
    try:
        mask = int(text, 16)
    except ValueError as exc:
        raise MoranError(f"--init mask must be hexadecimal, got {text!r}") from exc
    if mask < 0 or mask >> n:
        raise MoranError(f"mask {text!r} does not fit a {n}-node graph")
    return mask


def _parse_init_dist(text: str, n: int):
    if text == "uniform-t1":
        return UniformSingle(T1)
    if text == "uniform-t2":
        return UniformSingle(T2)
    return Explicit(Configuration.from_mask(_parse_mask(text, n), n))


def _parse_n_range(text: str) -> list[int]:
    """Sizes as '200', '100,200,400', or 'start:stop:step' (stop inclusive)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise MoranError(f"--n-range must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (int(p) for p in parts)
        except ValueError as exc:
            raise MoranError(f"non-integer --n-range {text!r}") from exc
        if step <= 0 or stop < start:
            raise MoranError(f"empty --n-range {text!r}")
        return list(range(start, stop + 1, step))
    try:
        values = [int(p) for p in text.split(",") if p]
    except ValueError as exc:
        raise MoranError(f"non-integer --n-range {text!r}") from exc
    if not values:
        raise MoranError("--n-range is empty")
    return values


def _threads(args: argparse.Namespace) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("MORAN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise MoranError(f"MORAN_THREADS must be an integer, got {env!r}") from exc
    return 1


def _report(args, graph_summary, r, params, result, t0, steps_total) -> dict:
    return {
        "command": list(args.command_echo),
        "graph": graph_summary,
        "r": r,
        "params": params,
        "result": result,
        "wall_time_ms": (time.perf_counter() - t0) * 1000.0,
        "steps_total": steps_total,
    }


def _graph_summary(graph: Graph, source: str) -> dict:
    return {"n": graph.n, "m": graph.m, "max_degree": graph.max_degree, "source": source}


def _emit(report: dict, summary: str) -> None:
    print(json.dumps(report))
    print(summary, file=sys.stderr)


def _binomial_ci95(value: float, z: int) -> Optional[list[float]]:
    if z <= 0:
        return None
    half = 1.96 * (value * (1.0 - value) / z) ** 0.5
    return [max(0.0, value - half), min(1.0, value + half)]


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_estimate(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    graph, source = _resolve_graph(args)
    r = args.r
    threads = _threads(args)
    if r <= 0:
        raise MoranError(f"--r must be positive, got {r}")

    params = {
        "problem": args.problem,
        "epsilon": args.epsilon,
        "z": args.z,
        "u": args.u,
        "seed": args.seed,
        "threads": threads,
        "init": args.init,
        "type": args.type,
        "trials": None,
    }

    if r == 1.0:
        # Neutral case: the estimators refuse, the answers are closed forms.
        if args.problem == "fixation-t1":
            value = 1.0 / graph.n
        elif args.problem in ("extinction-t1", "extinction-t2"):
            value = 1.0 - 1.0 / graph.n
        else:
            raise MoranError("generalized problem has no closed form at r = 1")
        result = {
            "kind": "estimate",
            "value": value,
            "took_too_long": False,
            "z": 0,
            "u": 0,
            "ci95": None,
            "closed_form": True,
        }
        report = _report(args, _graph_summary(graph, source), r, params, result, t0, 0)
        _emit(report, f"{args.problem} at r=1 (closed form): {value}")
        return EXIT_OK

    common = dict(threads=threads, z=args.z, budget=args.u)
    if args.problem == "fixation-t1":
        est = estimate_fixation_t1(graph, r, args.epsilon, args.seed, **common)
    elif args.problem == "extinction-t1":
        est = estimate_extinction_t1(graph, r, args.epsilon, args.seed, **common)
    elif args.problem == "extinction-t2":
        est = estimate_extinction_t2(graph, r, args.epsilon, args.seed, **common)
    else:
        if args.init is None or args.type is None:
            raise MoranError("generalized problem needs --init MASK and --type")
        config = Configuration.from_mask(_parse_mask(args.init, graph.n), graph.n)
        target = T1 if args.type == "t1" else T2
        est = estimate_generalized(
            graph, r, config, target, args.epsilon, args.seed, **common
        )

    result = {
        "kind": "estimate",
        "value": est.value,
        "took_too_long": est.took_too_long,
        "z": est.z_used,
        "u": est.u_used,
        "ci95": _binomial_ci95(est.value, est.z_used) if est.value is not None else None,
        "closed_form": est.z_used == 0,
    }
    report = _report(
        args, _graph_summary(graph, source), r, params, result, t0, est.steps_total
    )
    if est.took_too_long:
        _emit(report, f"{args.problem}: simulation took too long (u={est.u_used})")
        return EXIT_TOO_LONG
    _emit(
        report,
        f"{args.problem}: {est.value} (z={est.z_used}, u={est.u_used}, "
        f"steps={est.steps_total})",
    )
    return EXIT_OK


def _cmd_exact(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    graph, source = _resolve_graph(args)
    r = args.r
    if r <= 0:
        raise MoranError(f"--r must be positive, got {r}")
    params = {
        "problem": args.problem,
        "epsilon": None,
        "z": None,
        "u": None,
        "seed": None,
        "threads": 1,
        "init": args.init,
        "type": args.type,
        "trials": None,
    }
    want_steps = args.expected_steps
    result: dict = {"kind": "exact"}
    if args.problem == "generalized":
        if args.init is None or args.type is None:
            raise MoranError("generalized problem needs --init MASK and --type")
        mask = _parse_mask(args.init, graph.n)
        solution = solve_chain(graph, r, want_steps=want_steps)
        h = float(solution.fixation_prob[mask])
        result["value"] = h if args.type == "t1" else 1.0 - h
        if want_steps:
            result["expected_steps"] = float(solution.expected_steps[mask])
    else:
        problem = args.problem.replace("-", "_")
        result["value"] = averaged_problem(graph, r, problem)
        if want_steps:
            solution = solve_chain(graph, r, want_steps=True)
            n = graph.n
            full = (1 << n) - 1
            if args.problem == "extinction-t1":
                starts = [full ^ (1 << v) for v in range(n)]
            else:
                starts = [1 << v for v in range(n)]
            result["expected_steps"] = float(
                sum(solution.expected_steps[s] for s in starts) / n
            )
    report = _report(args, _graph_summary(graph, source), r, params, result, t0, 0)
    _emit(report, f"exact {args.problem}: {result['value']}")
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    graph, source = _resolve_graph(args)
    r = args.r
    if r <= 0:
        raise MoranError(f"--r must be positive, got {r}")
    if args.trials < 1:
        raise MoranError(f"--trials must be >= 1, got {args.trials}")
    dist = _parse_init_dist(args.init, graph.n)
    n, delta = graph.n, graph.max_degree
    if r > 1:
        thresholds = [int(6 * x * n * delta / min(r - 1, 1)) for x in (1, 2, 3)]
    else:
        thresholds = [4 * x * n * n * delta * delta for x in (1, 2, 3)]
    rng = spawn_rng(args.seed, 0, "simulate")
    stats = fixation_time_stats(graph, r, dist, args.trials, rng, thresholds)
    ordered = sorted(stats.samples)
    quantiles = {
        "p50": ordered[int(0.50 * (len(ordered) - 1))],
        "p90": ordered[int(0.90 * (len(ordered) - 1))],
        "p99": ordered[int(0.99 * (len(ordered) - 1))],
    }
    result = {
        "kind": "simulate",
        "mean": stats.mean,
        "min": ordered[0],
        "max": ordered[-1],
        "quantiles": quantiles,
        "tail": [
            {"threshold": t, "exceedances": c, "fraction": c / args.trials}
            for t, c in sorted(stats.tail_counts.items())
        ],
    }
    params = {
        "problem": None,
        "epsilon": None,
        "z": None,
        "u": None,
        "seed": args.seed,
        "threads": 1,
        "init": args.init,
        "type": None,
        "trials": args.trials,
    }
    steps_total = sum(stats.samples)
    report = _report(args, _graph_summary(graph, source), r, params, result, t0, steps_total)
    _emit(report, f"simulate: mean {stats.mean} effective steps over {args.trials} trials")
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    ns = _parse_n_range(args.n_range)
    r = args.r
    if r <= 0:
        raise MoranError(f"--r must be positive, got {r}")
    if args.trials < 1:
        raise MoranError(f"--trials must be >= 1, got {args.trials}")
    dist = None
    if args.init is not None:
        dist = _parse_init_dist(args.init, min(ns))
        if not isinstance(dist, UniformSingle):
            raise MoranError("bench --init must be uniform-t1 or uniform-t2")
    rows, steps_total = bench_mod.bench_family(
        args.family, ns, r, args.trials, args.seed, delta=args.delta, dist=dist
    )
    csv_text = bench_mod.rows_to_csv(rows)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    largest = gen_family(args.family, n=max(ns), delta=args.delta)
    result = {
        "kind": "bench",
        "rows": [
            {
                "n": row.n,
                "backend": row.backend,
                "mean_steps": row.mean_steps,
                "mean_ms": row.mean_ms,
            }
            for row in rows
        ],
        "csv": csv_text,
    }
    params = {
        "problem": None,
        "epsilon": None,
        "z": None,
        "u": None,
        "seed": args.seed,
        "threads": 1,
        "init": args.init,
        "type": None,
        "trials": args.trials,
    }
    report = _report(
        args, _graph_summary(largest, f"family:{args.family}"), r, params, result,
        t0, steps_total,
    )
    _emit(report, csv_text.rstrip("\n"))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moransim",
        description="Moran birth-death simulation and fixation-probability "
        "estimation on undirected graphs",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_est = sub.add_parser("estimate", help="Monte-Carlo probability estimate")
    _add_graph_args(p_est)
    p_est.add_argument("--problem", choices=PROBLEMS, required=True)
    p_est.add_argument("--r", type=float, required=True, help="relative fitness of t1")
    p_est.add_argument("--epsilon", type=float, required=True)
    p_est.add_argument("--seed", type=int, required=True)
    p_est.add_argument("--z", type=int, help="override replicate count")
    p_est.add_argument("--u", type=int, help="override per-replicate step budget")
    p_est.add_argument("--init", help="hex mask, bit v = 1 means node v is t1 "
                       "(generalized only)")
    p_est.add_argument("--type", choices=("t1", "t2"), help="target type "
                       "(generalized only)")
    p_est.add_argument("--threads", type=int,
                       help="parallel replicates (default: MORAN_THREADS or 1)")
    p_est.set_defaults(func=_cmd_estimate)

    p_exact = sub.add_parser("exact", help="exact absorbing-chain solve (n <= 14)")
    _add_graph_args(p_exact)
    p_exact.add_argument("--problem", choices=PROBLEMS, required=True)
    p_exact.add_argument("--r", type=float, required=True)
    p_exact.add_argument("--init", help="hex mask (generalized only)")
    p_exact.add_argument("--type", choices=("t1", "t2"), help="target type "
                         "(generalized only)")
    p_exact.add_argument("--expected-steps", action="store_true",
                         help="also report expected effective steps to fixation")
    p_exact.set_defaults(func=_cmd_exact)

    p_sim = sub.add_parser("simulate", help="fixation-time statistics")
    _add_graph_args(p_sim)
    p_sim.add_argument("--r", type=float, required=True)
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--init", default="uniform-t1",
                       help="uniform-t1 | uniform-t2 | hex mask")
    p_sim.set_defaults(func=_cmd_simulate)

    p_bench = sub.add_parser("bench", help="all-steps vs effective-steps comparison")
    p_bench.add_argument("--family", required=True,
                         choices=("complete", "star", "line", "cycle", "lower_bound"))
    p_bench.add_argument("--n-range", required=True,
                         help="'200' | '100,200,400' | 'start:stop:step'")
    p_bench.add_argument("--delta", type=int, help="max degree (lower_bound family)")
    p_bench.add_argument("--r", type=float, required=True)
    p_bench.add_argument("--trials", type=int, required=True)
    p_bench.add_argument("--seed", type=int, required=True)
    p_bench.add_argument("--init", help="uniform-t1 | uniform-t2 "
                         "(default: uniform-t2, a single fitness-1 node)")
    p_bench.add_argument("--csv", metavar="PATH", help="also write the CSV here")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    args.command_echo = list(argv)
    try:
        return args.func(args)
    except MoranError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
