"""Shared test utilities: graph enumeration, random graphs, oracles."""

from __future__ import annotations

import functools
import random

import networkx as nx

from moransim import (
    Configuration,
    Graph,
    SamplerState,
    T1,
    total_fitness,
    validate_graph,
)


@functools.lru_cache(maxsize=None)
def connected_graphs_upto(max_n: int, min_n: int = 2) -> tuple[Graph, ...]:
    """Every connected graph with min_n <= n <= max_n, one per isomorphism
    class (from the atlas of small graphs)."""
    assert max_n <= 7
    out = []
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if min_n <= n <= max_n and nx.is_connected(g):
            out.append(validate_graph(sorted(g.edges()), n))
    return tuple(out)


def active_configs(graph: Graph):
    """All configurations of `graph` in which neither type has fixated."""
    full = (1 << graph.n) - 1
    for mask in range(1, full):
        yield Configuration.from_mask(mask, graph.n)


def random_connected_graph(rng: random.Random, n: int, max_deg: int) -> Graph:
    """Random connected graph: a degree-capped random tree plus extra edges."""
    deg = [0] * n
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        candidates = [v for v in order[:i] if deg[v] < max_deg]
        u = order[i]
        v = rng.choice(candidates)
        edges.add((min(u, v), max(u, v)))
        deg[u] += 1
        deg[v] += 1
    extra = rng.randrange(n, 2 * n)
    for _ in range(extra):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in edges or deg[u] >= max_deg or deg[v] >= max_deg:
            continue
        edges.add(key)
        deg[u] += 1
        deg[v] += 1
    return validate_graph(sorted(edges), n)


def naive_conditional_distribution(graph: Graph, config: Configuration, r: float):
    """Independent oracle: enumerate every classical (v, u) pick, keep the
    effective ones, and normalize.  Also returns the effective-step mass."""
    vals = config.values
    probs: dict[tuple[int, int], float] = {}
    w_total = total_fitness(config, r)
    effective_mass = 0.0
    for v in range(graph.n):
        wv = r if vals[v] == T1 else 1.0
        p_pick_v = wv / w_total
        for u in graph.adj[v]:
            p = p_pick_v / graph.deg[v]
            if vals[u] != vals[v]:
                probs[(v, u)] = probs.get((v, u), 0.0) + p
                effective_mass += p
    return {pair: p / effective_mass for pair, p in probs.items()}, effective_mass


def sampler_analytic_distribution(state: SamplerState):
    """Exact law of sample_effective_step, read off the live structures:
    P(list) * P(slot | list) * P(gamma member), with no sampling involved."""
    probs: dict[tuple[int, int], float] = {}
    total = state.total_weight
    for key in sorted(state.lists):
        lst = state.lists[key]
        if lst.size == 0:
            continue
        list_weight = state.unit[key] * lst.size
        per_slot = list_weight / total / lst.size
        for v in lst.live_items():
            gamma = state.gamma[v]
            per_pair = per_slot / gamma.size
            for u in gamma.live_items():
                pair = (v, u)
                probs[pair] = probs.get(pair, 0.0) + per_pair
    return probs


def sampler_summary(state: SamplerState):
    """Structural fingerprint used to compare incremental vs fresh states."""
    from collections import Counter

    lists = {}
    for key in sorted(state.lists):
        lst = state.lists[key]
        if lst.size:
            lists[key] = (lst.size, Counter(lst.live_items()))
    gammas = {
        v: frozenset(state.gamma[v].live_items())
        for v in range(state.graph.n)
        if state.gamma[v].size
    }
    return {
        "values": tuple(state.values),
        "lists": lists,
        "gammas": gammas,
        "live_copies": state.live_copies,
    }


def assert_states_match(incremental: SamplerState, fresh: SamplerState, tol=1e-9):
    assert sampler_summary(incremental) == sampler_summary(fresh)
    if fresh.total_weight == 0.0:
        assert incremental.total_weight == 0.0
    else:
        rel = abs(incremental.total_weight - fresh.total_weight) / fresh.total_weight
        assert rel <= tol
