"""Exact fixation probabilities at desk scale, plus closed forms.

Configurations are bitmasks with bit v = 1 meaning node v has type t1.
The absorbing chain over all 2^n masks is solved directly: dense for
n <= 10, sparse LU above that, with a hard guard at n = 14.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidFitness, NeutralRate, TooLarge, UnbiasedWalk
from .graphs import Graph, T1

MAX_EXACT_NODES = 14
_DENSE_LIMIT = 10


@dataclass
class ChainSolution:
    """Per-mask fixation probabilities (for t1), and optionally the
    expected number of effective steps to fixation from each mask."""

    fixation_prob: np.ndarray
    expected_steps: Optional[np.ndarray]


def _transition_rows(graph: Graph, r: float, mask: int, effective: bool):
    """Successors of an Active mask: (probability, next_mask) pairs.

    effective=True uses the rejection-free chain (probability proportional
    to w(f(v))/deg v per bichromatic ordered edge); effective=False uses the
    classical chain, where monochromatic picks yield a self-loop.
    """
    n = graph.n
    deg = graph.deg
    pairs = []
    active_weight = 0.0
    total_weight = 0.0
    for v in range(n):
        tv = (mask >> v) & 1
        wv = r if tv == T1 else 1.0
        total_weight += wv
        share = wv / deg[v]
        for u in graph.adj[v]:
            if ((mask >> u) & 1) != tv:
                pairs.append((share, mask ^ (1 << u)))
                active_weight += share
    if effective:
        return [(w / active_weight, nxt) for w, nxt in pairs]
    rows = [(w / total_weight, nxt) for w, nxt in pairs]
    self_prob = 1.0 - active_weight / total_weight
    rows.append((self_prob, mask))
    return rows


def solve_chain(
    graph: Graph,
    r: float,
    want_steps: bool = False,
    chain: str = "effective",
    method: str = "auto",
) -> ChainSolution:
    """Solve the absorbing configuration chain for fixation probabilities.

    fixation_prob[mask] is the probability that t1 fixates when starting
    from `mask`; expected_steps (effective chain only) solves
    g(f) = 1 + sum P(f -> f') g(f') with g = 0 at the absorbing masks.
    """
    n = graph.n
    if n > MAX_EXACT_NODES:
        raise TooLarge(f"exact solve limited to n <= {MAX_EXACT_NODES}, got {n}")
    if r <= 0:
        raise InvalidFitness(f"fitness must be positive, got {r}")
    if chain not in ("effective", "all"):
        raise ValueError(f"unknown chain kind {chain!r}")
    if want_steps and chain != "effective":
        raise ValueError("expected_steps is defined on the effective-step chain")

    size = 1 << n
    full = size - 1
    transient = [mask for mask in range(size) if mask != 0 and mask != full]
    index = {mask: i for i, mask in enumerate(transient)}
    effective = chain == "effective"

    if method == "auto":
        method = "dense" if n <= _DENSE_LIMIT else "sparse"

    nt = len(transient)
    b_fix = np.zeros(nt)
    if method == "dense":
        A = np.eye(nt)
        for i, mask in enumerate(transient):
            for p, nxt in _transition_rows(graph, r, mask, effective):
                if nxt == full:
                    b_fix[i] += p
                elif nxt != 0:
                    A[i, index[nxt]] -= p
        h = np.linalg.solve(A, b_fix)
        g = np.linalg.solve(A, np.ones(nt)) if want_steps else None
    elif method == "sparse":
        from scipy.sparse import csr_matrix, identity
        from scipy.sparse.linalg import splu

        rows, cols, data = [], [], []
        for i, mask in enumerate(transient):
            for p, nxt in _transition_rows(graph, r, mask, effective):
                if nxt == full:
                    b_fix[i] += p
                elif nxt != 0:
                    rows.append(i)
                    cols.append(index[nxt])
                    data.append(p)
        P = csr_matrix((data, (rows, cols)), shape=(nt, nt))
        lu = splu((identity(nt, format="csr") - P).tocsc())
        h = lu.solve(b_fix)
        g = lu.solve(np.ones(nt)) if want_steps else None
    else:
        raise ValueError(f"unknown method {method!r}")

    fixation = np.zeros(size)
    fixation[full] = 1.0
    fixation[transient] = h
    steps = None
    if want_steps:
        steps = np.zeros(size)
        steps[transient] = g
    return ChainSolution(fixation_prob=fixation, expected_steps=steps)


def complete_graph_fixation(n: int, r: float) -> float:
    """Single-mutant fixation probability on the complete graph:
    (1 - 1/r) / (1 - 1/r^n).  Undefined at r = 1 (use 1/n)."""
    if n < 1:
        raise InvalidFitness(f"need n >= 1, got {n}")
    if r <= 0:
        raise InvalidFitness(f"fitness must be positive, got {r}")
    if r == 1.0:
        raise NeutralRate("closed form undefined at r = 1; the answer is 1/n")
    return (1.0 - 1.0 / r) / (1.0 - r ** (-n))


def gamblers_ruin_absorption(p: float, n: int) -> float:
    """Absorption probability at state 0 of a biased walk on {0..n},
    started at state 2, stepping down with probability p.

    With q = (1-p)/p the value is (q^(n-2) - 1) / (q^n - 1).
    """
    if not 0.0 < p < 1.0:
        raise InvalidFitness(f"step probability must be in (0, 1), got {p}")
    if p == 0.5:
        raise UnbiasedWalk("closed form undefined at p = 1/2")
    if n < 2:
        raise InvalidFitness(f"need at least the two boundary states, got n={n}")
    q = (1.0 - p) / p
    return (q ** (n - 2) - 1.0) / (q ** n - 1.0)


def node_neighbor_pressure(graph: Graph, v: int) -> float:
    """Q(v) = sum over neighbors u of 1/deg(u); sums to n over all v."""
    return sum(1.0 / graph.deg[u] for u in graph.adj[v])


def first_step_extinction_prob(graph: Graph, r: float) -> float:
    """Probability that a single uniformly placed t1 node is erased by the
    very first effective step.  Equals 1 - (r/n) * sum_v 1/(r + Q(v)) and
    is at most 1/(r+1), with equality on complete graphs."""
    if r <= 0:
        raise InvalidFitness(f"fitness must be positive, got {r}")
    n = graph.n
    survive = (r / n) * sum(
        1.0 / (r + node_neighbor_pressure(graph, v)) for v in range(n)
    )
    return 1.0 - survive


def averaged_problem(graph: Graph, r: float, problem: str) -> float:
    """Average exact fixation values over the n single-node starts.

    fixation_t1: P(t1 fixates) from a single t1 node;
    extinction_t1: P(t1 fixates) from a single t2 node;
    extinction_t2: P(t2 fixates) from a single t1 node.
    """
    solution = solve_chain(graph, r)
    h = solution.fixation_prob
    n = graph.n
    full = (1 << n) - 1
    if problem == "fixation_t1":
        return float(np.mean([h[1 << v] for v in range(n)]))
    if problem == "extinction_t1":
        return float(np.mean([h[full ^ (1 << v)] for v in range(n)]))
    if problem == "extinction_t2":
        return float(np.mean([1.0 - h[1 << v] for v in range(n)]))
    raise ValueError(f"unknown problem {problem!r}")
