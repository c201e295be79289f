"""Monte-Carlo estimators for fixation and extinction probabilities.

The batch driver runs z budgeted replicates of the effective-step process;
if any replicate fails to fixate within its step budget, the whole call
reports took_too_long instead of a number.  The four front-end estimators
wire in the replicate counts and budgets that give a multiplicative
(1 +- eps) guarantee with probability at least 3/4 (additive for the
generalized single-configuration problem).
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidEpsilon, InvalidFitness
from .graphs import (
    Configuration,
    Explicit,
    Graph,
    InitialDistribution,
    T1,
    T2,
    UniformSingle,
    draw_initial,
)
from .sampler import SamplerState
from .seeding import derive_seed


@dataclass
class EstimateResult:
    """Outcome of one batched estimate.

    value is y/z, or None when took_too_long is set.  per_replicate_seeds
    records the derived seed of every replicate for reproducibility.
    """

    value: Optional[float]
    z_used: int
    u_used: int
    took_too_long: bool
    per_replicate_seeds: list[int]
    steps_total: int


@dataclass
class FixationTimeStats:
    """Empirical effective-step counts over independent runs to fixation."""

    samples: list[int]
    mean: float
    tail_counts: dict[int, int]


def step_budget(z: int, r: float, n: int, max_degree: int, epsilon: float) -> int:
    """Per-replicate effective-step budget making budget-exhaustion
    negligibly likely over z replicates.

    Piecewise in r, scaled by M = max(log2 z, log2 1/eps):
      r >= 2*max_degree:            ceil(30 n M)
      1 + 1/(n*max_degree) <= r:    ceil(30 n max_degree / min(r-1, 1) * M)
      otherwise:                    ceil(20 n^2 max_degree^2 M)
    """
    if r <= 1:
        raise InvalidFitness(f"step budget needs r > 1, got {r}")
    if z < 2:
        raise InvalidFitness(f"step budget needs z >= 2, got {z}")
    if not 0.0 < epsilon < 1.0:
        raise InvalidEpsilon(f"epsilon must be in (0, 1), got {epsilon}")
    scale = max(math.log2(z), math.log2(1.0 / epsilon))
    if r >= 2 * max_degree:
        return math.ceil(30 * n * scale)
    if r >= 1 + 1.0 / (n * max_degree):
        return math.ceil(30 * n * max_degree / min(r - 1, 1.0) * scale)
    return math.ceil(20 * n * n * max_degree * max_degree * scale)


def _run_replicate_range(
    graph: Graph,
    r: float,
    target: int,
    budget: int,
    dist: InitialDistribution,
    master_seed: int,
    start: int,
    stop: int,
) -> tuple[Optional[int], list[int], list[int]]:
    """Run replicates [start, stop); stop early at the first over-budget one.

    Returns (index of the aborting replicate or None, fixation flags,
    per-replicate step counts) for the replicates actually completed.
    """
    flags: list[int] = []
    steps: list[int] = []
    rng = random.Random()
    single = dist.node_type if isinstance(dist, UniformSingle) else None
    state = SamplerState(graph, Configuration.uniform_type(T1, graph.n), r)
    for i in range(start, stop):
        rng.seed(derive_seed(master_seed, i))
        if single is not None:
            state.reset_single(rng.randrange(graph.n), single)
        else:
            state.reset(draw_initial(graph, dist, rng))
        taken = state.run_to_fixation(rng, budget=budget)
        if taken is None:
            return i, flags, steps
        fixated_for_target = (
            state.count_t2 == 0 if target == T1 else state.count_t1 == 0
        )
        flags.append(1 if fixated_for_target else 0)
        steps.append(taken)
    return None, flags, steps


def monte_carlo_estimate(
    graph: Graph,
    r: float,
    target: int,
    z: int,
    budget: int,
    dist: InitialDistribution,
    seed: int,
    threads: int = 1,
) -> EstimateResult:
    """Run z independent replicates and return the fraction that fixate
    for `target`, or a took_too_long result if any replicate would need
    more than `budget` effective steps.

    Replicate i is driven by a stream derived from (seed, i) only, so the
    result is identical for every `threads` value.
    """
    if z < 1:
        raise InvalidFitness(f"need z >= 1 replicates, got {z}")
    if r <= 0:
        raise InvalidFitness(f"fitness must be positive, got {r}")
    seeds = [derive_seed(seed, i) for i in range(z)]

    if threads <= 1 or z < 2 * threads:
        abort, flags, steps = _run_replicate_range(
            graph, r, target, budget, dist, seed, 0, z
        )
        chunk_results = [(0, abort, flags, steps)]
    else:
        bounds = [round(i * z / threads) for i in range(threads + 1)]
        chunks = [(bounds[i], bounds[i + 1]) for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(
                    _run_replicate_range,
                    graph, r, target, budget, dist, seed, lo, hi,
                )
                for lo, hi in chunks
            ]
            chunk_results = [
                (chunks[i][0], *futures[i].result()) for i in range(threads)
            ]

    # Deterministic aggregation: behave as if replicates ran in index order
    # and the call stopped at the first over-budget replicate.
    first_abort = min(
        (abort for _lo, abort, _f, _s in chunk_results if abort is not None),
        default=None,
    )
    if first_abort is not None:
        steps_total = budget  # the aborting replicate burned its full budget
        for lo, _abort, _flags, steps in chunk_results:
            for offset, taken in enumerate(steps):
                if lo + offset < first_abort:
                    steps_total += taken
        return EstimateResult(
            value=None,
            z_used=z,
            u_used=budget,
            took_too_long=True,
            per_replicate_seeds=seeds,
            steps_total=steps_total,
        )

    y = sum(sum(flags) for _lo, _abort, flags, _s in chunk_results)
    steps_total = sum(sum(steps) for _lo, _abort, _f, steps in chunk_results)
    return EstimateResult(
        value=y / z,
        z_used=z,
        u_used=budget,
        took_too_long=False,
        per_replicate_seeds=seeds,
        steps_total=steps_total,
    )


def _check_estimator_params(r: float, epsilon: float) -> None:
    if r <= 1:
        raise InvalidFitness(
            f"estimators need r > 1, got {r}; at r = 1 the fixation problem "
            "has answer 1/n and the extinction problems 1 - 1/n"
        )
    if not 0.0 < epsilon < 0.5:
        raise InvalidEpsilon(f"epsilon must be in (0, 1/2), got {epsilon}")


def estimate_fixation_t1(
    graph: Graph,
    r: float,
    epsilon: float,
    seed: int,
    threads: int = 1,
    z: Optional[int] = None,
    budget: Optional[int] = None,
) -> EstimateResult:
    """Fixation probability of t1 from a uniform single-t1 start, within
    (1 +- eps) multiplicatively with probability at least 3/4."""
    _check_estimator_params(r, epsilon)
    z = z if z is not None else math.ceil(48 * graph.n / epsilon**2)
    if budget is None:
        budget = step_budget(z, r, graph.n, graph.max_degree, epsilon)
    return monte_carlo_estimate(
        graph, r, T1, z, budget, UniformSingle(T1), seed, threads
    )


def estimate_extinction_t1(
    graph: Graph,
    r: float,
    epsilon: float,
    seed: int,
    threads: int = 1,
    z: Optional[int] = None,
    budget: Optional[int] = None,
) -> EstimateResult:
    """Fixation probability of t1 from a uniform single-t2 start."""
    _check_estimator_params(r, epsilon)
    z = z if z is not None else math.ceil(24 / epsilon**2)
    if budget is None:
        budget = step_budget(z, r, graph.n, graph.max_degree, epsilon)
    return monte_carlo_estimate(
        graph, r, T1, z, budget, UniformSingle(T2), seed, threads
    )


def estimate_generalized(
    graph: Graph,
    r: float,
    config: Configuration,
    target: int,
    epsilon: float,
    seed: int,
    threads: int = 1,
    z: Optional[int] = None,
    budget: Optional[int] = None,
) -> EstimateResult:
    """Fixation probability of `target` from one explicit configuration,
    within +- eps additively with probability at least 3/4."""
    _check_estimator_params(r, epsilon)
    z = z if z is not None else math.ceil(6 / epsilon**2)
    if budget is None:
        budget = step_budget(z, r, graph.n, graph.max_degree, epsilon)
    return monte_carlo_estimate(
        graph, r, target, z, budget, Explicit(config), seed, threads
    )


def estimate_extinction_t2(
    graph: Graph,
    r: float,
    epsilon: float,
    seed: int,
    threads: int = 1,
    z: Optional[int] = None,
    budget: Optional[int] = None,
) -> EstimateResult:
    """Fixation probability of t2 from a uniform single-t1 start.

    For r >= max(max_degree^2, n) / eps the value 1/r is already within the
    guarantee, so it is returned directly with zero simulation steps.
    """
    _check_estimator_params(r, epsilon)
    if z is None and r >= max(graph.max_degree**2, graph.n) / epsilon:
        return EstimateResult(
            value=1.0 / r,
            z_used=0,
            u_used=0,
            took_too_long=False,
            per_replicate_seeds=[],
            steps_total=0,
        )
    z = z if z is not None else math.ceil(24 * (graph.n + r) ** 2 / epsilon**2)
    if budget is None:
        budget = step_budget(z, r, graph.n, graph.max_degree, epsilon)
    return monte_carlo_estimate(
        graph, r, T2, z, budget, UniformSingle(T1), seed, threads
    )


def fixation_time_stats(
    graph: Graph,
    r: float,
    dist: InitialDistribution,
    trials: int,
    rng: random.Random,
    tail_thresholds: Sequence[int] = (),
) -> FixationTimeStats:
    """Effective-step counts to fixation over `trials` unbudgeted runs."""
    if trials < 1:
        raise InvalidFitness(f"need trials >= 1, got {trials}")
    if r <= 0:
        raise InvalidFitness(f"fitness must be positive, got {r}")
    samples: list[int] = []
    single = dist.node_type if isinstance(dist, UniformSingle) else None
    state = SamplerState(graph, Configuration.uniform_type(T1, graph.n), r)
    for _ in range(trials):
        if single is not None:
            state.reset_single(rng.randrange(graph.n), single)
        else:
            state.reset(draw_initial(graph, dist, rng))
        samples.append(state.run_to_fixation(rng))
    tail_counts = {
        int(t): sum(1 for s in samples if s > t) for t in tail_thresholds
    }
    return FixationTimeStats(
        samples=samples,
        mean=sum(samples) / trials,
        tail_counts=tail_counts,
    )
