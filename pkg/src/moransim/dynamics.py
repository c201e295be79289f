"""Reference semantics of the birth-death process.

Everything here is deliberately slow and transparent: each operation
re-enumerates whatever it needs in O(n + m) so it can serve as the trusted
baseline the fast sampler is verified against.

Terminology: a step that changes some node's type is called *effective*.
For a configuration f, gamma(v) is the set of v's neighbors whose type
differs from f(v), and the active weight W'(f) = sum_v w(f(v)) * |gamma(v)|
/ deg(v) is the total rate of effective events; W'(f) = 0 exactly at
fixation.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .errors import AlreadyFixated
from .graphs import Configuration, Graph, T1, T2


class FixationState(enum.Enum):
    FIXATED_T1 = "fixated_t1"
    FIXATED_T2 = "fixated_t2"
    ACTIVE = "active"


@dataclass
class StepOutcome:
    reproducer: int
    replaced: int
    effective: bool
    new_config: Configuration


@dataclass
class StepDistribution:
    """Exact distribution of the next effective step.

    entries maps each ordered bichromatic edge (v, u) to the probability
    that v reproduces onto u; probabilities sum to 1.  active_weight is
    W'(f).
    """

    entries: dict[tuple[int, int], float]
    active_weight: float


def fixation_state(config: Configuration) -> FixationState:
    if config.count_t2 == 0:
        return FixationState.FIXATED_T1
    if config.count_t1 == 0:
        return FixationState.FIXATED_T2
    return FixationState.ACTIVE


def _require_active(config: Configuration) -> None:
    if config.count_t1 == 0 or config.count_t2 == 0:
        raise AlreadyFixated("configuration is already fixated")


def potential(graph: Graph, config: Configuration) -> float:
    """Sum of 1/deg(v) over the fitness-r nodes; drifts upward for r > 1."""
    deg = graph.deg
    vals = config.values
    return sum(1.0 / deg[v] for v in range(graph.n) if vals[v] == T1)


def total_fitness(config: Configuration, r: float) -> float:
    """W(f) = r * count_t1 + count_t2."""
    return r * config.count_t1 + config.count_t2


def step_distribution(graph: Graph, config: Configuration, r: float) -> StepDistribution:
    """Exact effective-step distribution over ordered bichromatic edges.

    Entry (v, u) has probability w(f(v)) / (W'(f) * deg v).
    """
    _require_active(config)
    vals = config.values
    deg = graph.deg
    raw: dict[tuple[int, int], float] = {}
    active = 0.0
    for v in range(graph.n):
        wv = r if vals[v] == T1 else 1.0
        tv = vals[v]
        share = wv / deg[v]
        for u in graph.adj[v]:
            if vals[u] != tv:
                raw[(v, u)] = share
                active += share
    return StepDistribution(
        entries={pair: w / active for pair, w in raw.items()},
        active_weight=active,
    )


def naive_step(graph: Graph, config: Configuration, r: float, rng: random.Random) -> StepOutcome:
    """One classical birth-death step: v picked with probability w(f(v))/W(f),
    u uniform over v's neighbors, u takes v's type.  May be ineffective.

    Node selection is a linear scan against one uniform real; this exists
    only as a reference and benchmark baseline.
    """
    _require_active(config)
    vals = config.values
    x = rng.random() * total_fitness(config, r)
    acc = 0.0
    v = graph.n - 1
    for i in range(graph.n):
        acc += r if vals[i] == T1 else 1.0
        if x < acc:
            v = i
            break
    neighbors = graph.adj[v]
    u = neighbors[rng.randrange(len(neighbors))]
    effective = vals[u] != vals[v]
    return StepOutcome(
        reproducer=v,
        replaced=u,
        effective=effective,
        new_config=config.flipped(u, vals[v]),
    )


def effective_step_reference(
    graph: Graph, config: Configuration, r: float, rng: random.Random
) -> StepOutcome:
    """One effective step, by O(m) enumeration of the bichromatic edges.

    v is picked with probability p(v)/W'(f) where p(v) = w(f(v)) *
    |gamma(v)| / deg v, then u uniform over gamma(v); always effective.
    """
    dist = step_distribution(graph, config, r)
    x = rng.random()
    acc = 0.0
    pair = None
    for pair, p in dist.entries.items():
        acc += p
        if x < acc:
            break
    assert pair is not None
    v, u = pair
    return StepOutcome(
        reproducer=v,
        replaced=u,
        effective=True,
        new_config=config.flipped(u, config.values[v]),
    )


def expected_potential_change(graph: Graph, config: Configuration, r: float) -> float:
    """Exact E[potential(f') - potential(f)] for one effective step.

    For r > 1 this is at least (r - 1) / (max_degree * (r + 1)).
    """
    dist = step_distribution(graph, config, r)
    vals = config.values
    deg = graph.deg
    total = 0.0
    for (v, u), p in dist.entries.items():
        change = 1.0 / deg[u] if vals[u] == T2 else -1.0 / deg[u]
        total += p * change
    return total


def increment_probability(graph: Graph, config: Configuration, r: float) -> float:
    """Probability that the next effective step increases count_t1.

    For r = x * max_degree this is at least x / (x + 1).
    """
    dist = step_distribution(graph, config, r)
    vals = config.values
    return sum(p for (v, _u), p in dist.entries.items() if vals[v] == T1)


def effectiveness_probability(graph: Graph, config: Configuration, r: float) -> float:
    """Probability that a classical step is effective: W'(f) / W(f)."""
    dist = step_distribution(graph, config, r)
    return dist.active_weight / total_fitness(config, r)


class AllStepsSimulator:
    """Classical all-steps chain with O(1) per-step sampling.

    Keeps one node list per type so the reproducer is drawn by a weighted
    two-way choice followed by a uniform pick inside the class; this is the
    standard fast baseline for the unmodified process.
    """

    def __init__(self, graph: Graph, config: Configuration, r: float):
        self.graph = graph
        self.r = float(r)
        self.values = list(config.values)
        self.members: tuple[list[int], list[int]] = ([], [])
        self.pos = [0] * graph.n
        for v, t in enumerate(self.values):
            self.pos[v] = len(self.members[t])
            self.members[t].append(v)

    @property
    def fixated(self) -> bool:
        return not self.members[T1] or not self.members[T2]

    def step(self, rng: random.Random) -> bool:
        """Run one birth-death step; returns True when it was effective."""
        if self.fixated:
            raise AlreadyFixated("simulation is already fixated")
        m1 = self.members[T1]
        m2 = self.members[T2]
        w1 = self.r * len(m1)
        x = rng.random() * (w1 + len(m2))
        src = m1 if x < w1 else m2
        v = src[rng.randrange(len(src))]
        neighbors = self.graph.adj[v]
        u = neighbors[rng.randrange(len(neighbors))]
        tv = self.values[v]
        if self.values[u] == tv:
            return False
        # Move u between the type lists (swap-remove from its old list).
        old = self.values[u]
        lst = self.members[old]
        i = self.pos[u]
        last = lst[-1]
        lst[i] = last
        self.pos[last] = i
        lst.pop()
        self.pos[u] = len(self.members[tv])
        self.members[tv].append(u)
        self.values[u] = tv
        return True

    def run_to_fixation(self, rng: random.Random) -> tuple[int, int]:
        """Run until fixation; returns (total steps, effective steps)."""
        total = 0
        eff = 0
        while not self.fixated:
            total += 1
            if self.step(rng):
                eff += 1
        return total, eff
