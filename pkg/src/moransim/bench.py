"""Step-count and wall-time comparison of the two simulation backends.

For each requested size the same seeded trials are run twice: once on the
classical all-steps chain (every birth-death event sampled individually)
and once on the rejection-free effective-step chain.  The default start
puts a single fitness-1 node among fitness-r nodes, the regime where the
classical chain wastes the largest share of its steps on events that
change nothing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .dynamics import AllStepsSimulator
from .graphs import Graph, InitialDistribution, T2, UniformSingle, draw_initial, gen_family
from .sampler import SamplerState
from .seeding import spawn_rng

BACKENDS = ("all_steps", "effective")


@dataclass
class BenchRow:
    n: int
    backend: str
    mean_steps: float
    mean_ms: float


def bench_graph(
    graph: Graph,
    r: float,
    trials: int,
    seed: int,
    dist: Optional[InitialDistribution] = None,
) -> tuple[list[BenchRow], int]:
    """Run both backends on one graph; returns (rows, total steps sampled)."""
    if dist is None:
        dist = UniformSingle(T2)
    rows = []
    grand_total = 0
    for backend in BACKENDS:
        total_steps = 0
        total_s = 0.0
        for i in range(trials):
            rng = spawn_rng(seed, i, f"bench:{backend}:{graph.n}")
            config = draw_initial(graph, dist, rng)
            if backend == "all_steps":
                sim = AllStepsSimulator(graph, config, r)
                t0 = time.perf_counter()
                steps, _eff = sim.run_to_fixation(rng)
                total_s += time.perf_counter() - t0
            else:
                state = SamplerState(graph, config, r)
                t0 = time.perf_counter()
                steps = state.run_to_fixation(rng)
                total_s += time.perf_counter() - t0
            total_steps += steps
        rows.append(
            BenchRow(
                n=graph.n,
                backend=backend,
                mean_steps=total_steps / trials,
                mean_ms=total_s / trials * 1000.0,
            )
        )
        grand_total += total_steps
    return rows, grand_total


def bench_family(
    family: str,
    ns: list[int],
    r: float,
    trials: int,
    seed: int,
    delta: Optional[int] = None,
    dist: Optional[InitialDistribution] = None,
) -> tuple[list[BenchRow], int]:
    """Benchmark one family across sizes; rows come out sorted by n."""
    rows: list[BenchRow] = []
    total = 0
    for n in sorted(ns):
        graph = gen_family(family, n=n, delta=delta)
        graph_rows, steps = bench_graph(graph, r, trials, seed, dist)
        rows.extend(graph_rows)
        total += steps
    return rows, total


def rows_to_csv(rows: list[BenchRow]) -> str:
    lines = ["n,backend,mean_steps,mean_ms"]
    for row in rows:
        lines.append(f"{row.n},{row.backend},{row.mean_steps!r},{row.mean_ms!r}")
    return "\n".join(lines) + "\n"
