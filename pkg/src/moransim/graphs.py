"""Undirected graphs, type configurations, and generator families.

Node ids are dense integers 0..n-1 and adjacency lists are kept sorted so
that every iteration order is deterministic under a fixed seed.  Type t1
carries relative fitness r, type t2 carries fitness 1; in bitmask form
bit v = 1 means node v has type t1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    EdgeListFormatError,
    InvalidFamilyParams,
    NodeIdOutOfRange,
    SelfLoop,
)

T1 = 1  # fitness-r type (mask bit 1)
T2 = 0  # fitness-1 type (mask bit 0)


@dataclass(frozen=True)
class Graph:
    """Immutable simple connected undirected graph.

    adj holds one sorted tuple of neighbor ids per node; deg, max_degree
    and m are cached so hot loops never recompute them.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    deg: tuple[int, ...]
    max_degree: int
    m: int

    def edges(self) -> Iterable[tuple[int, int]]:
        """Yield each undirected edge once, as (u, v) with u < v."""
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)


def validate_graph(edge_list: Iterable[tuple[int, int]], n: int) -> Graph:
    """Build a Graph from an edge list, checking every structural invariant.

    Raises NodeIdOutOfRange, SelfLoop, DuplicateEdge or DisconnectedGraph.
    """
    if n < 1:
        raise NodeIdOutOfRange(f"node count must be positive, got {n}")
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for u, v in edge_list:
        if not (0 <= u < n and 0 <= v < n):
            raise NodeIdOutOfRange(f"edge ({u}, {v}) outside [0, {n})")
        if u == v:
            raise SelfLoop(f"self-loop at node {u}")
        if v in neighbors[u]:
            raise DuplicateEdge(f"edge ({u}, {v}) listed twice")
        neighbors[u].add(v)
        neighbors[v].add(u)

    # BFS connectivity over all n nodes.
    seen = [False] * n
    seen[0] = True
    frontier = [0]
    count = 1
    while frontier:
        nxt = []
        for u in frontier:
            for v in neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    nxt.append(v)
        frontier = nxt
    if count != n:
        missing = next(i for i, s in enumerate(seen) if not s)
        raise DisconnectedGraph(f"node {missing} not reachable from node 0")

    adj = tuple(tuple(sorted(s)) for s in neighbors)
    deg = tuple(len(a) for a in adj)
    return Graph(
        n=n,
        adj=adj,
        deg=deg,
        max_degree=max(deg),
        m=sum(deg) // 2,
    )


# ---------------------------------------------------------------------------
# Generator families


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise InvalidFamilyParams(f"complete graph needs n >= 2, got {n}")
    return validate_graph([(u, v) for u in range(n) for v in range(u + 1, n)], n)


def star_graph(n: int) -> Graph:
    """Hub is node 0, leaves are 1..n-1."""
    if n < 2:
        raise InvalidFamilyParams(f"star graph needs n >= 2, got {n}")
    return validate_graph([(0, v) for v in range(1, n)], n)


def line_graph(n: int) -> Graph:
    if n < 2:
        raise InvalidFamilyParams(f"line graph needs n >= 2, got {n}")
    return validate_graph([(v, v + 1) for v in range(n - 1)], n)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidFamilyParams(f"cycle graph needs n >= 3, got {n}")
    edges = [(v, v + 1) for v in range(n - 1)] + [(0, n - 1)]
    return validate_graph(edges, n)


def lower_bound_graph(delta: int, n: int) -> Graph:
    """Stars-on-a-cycle joined to a line; the family with slow fixation.

    With x = floor(n / (2*delta - 2)) centers, centers c_2..c_x each carry
    delta - 2 leaves, and the remaining n - s nodes (s = (x-1)(delta-1) + 1)
    form a line hanging off c_1.  Requires delta > 2 and n > 4*delta.  When
    x == 2 the "cycle" degenerates to the single edge c_1-c_2 and the max
    degree is delta - 1 instead of delta.
    """
    if delta <= 2:
        raise InvalidFamilyParams(f"family needs delta > 2, got {delta}")
    if n <= 4 * delta:
        raise InvalidFamilyParams(f"family needs n > 4*delta, got n={n}, delta={delta}")
    x = n // (2 * delta - 2)
    s = (x - 1) * (delta - 1) + 1
    if x < 2 or s >= n:
        raise InvalidFamilyParams(
            f"construction degenerates for n={n}, delta={delta} (x={x}, s={s})"
        )

    edges: list[tuple[int, int]] = []
    # Centers are ids 0..x-1, in a cycle (a single edge when x == 2).
    for i in range(x - 1):
        edges.append((i, i + 1))
    if x > 2:
        edges.append((0, x - 1))
    # delta - 2 leaves on every center except c_1.
    next_id = x
    for i in range(1, x):
        for _ in range(delta - 2):
            edges.append((i, next_id))
            next_id += 1
    assert next_id == s
    # Line l_1..l_{n-s} at ids s..n-1, attached to c_1.
    edges.append((0, s))
    for v in range(s, n - 1):
        edges.append((v, v + 1))
    return validate_graph(edges, n)


FAMILIES = {
    "complete": complete_graph,
    "star": star_graph,
    "line": line_graph,
    "cycle": cycle_graph,
    "lower_bound": lower_bound_graph,
}


def gen_family(kind: str, n: int, delta: int | None = None) -> Graph:
    """Dispatch to a named family generator; lower_bound also needs delta."""
    if kind not in FAMILIES:
        raise InvalidFamilyParams(f"unknown family {kind!r}")
    if kind == "lower_bound":
        if delta is None:
            raise InvalidFamilyParams("lower_bound family needs delta")
        return lower_bound_graph(delta, n)
    return FAMILIES[kind](n)


# ---------------------------------------------------------------------------
# Configurations


@dataclass
class Configuration:
    """A type assignment over the nodes with cached per-type counts."""

    values: list[int]
    count_t1: int
    count_t2: int

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "Configuration":
        vals = list(values)
        c1 = sum(vals)
        return cls(values=vals, count_t1=c1, count_t2=len(vals) - c1)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "Configuration":
        if mask < 0 or mask >> n:
            raise NodeIdOutOfRange(f"mask {mask:#x} does not fit {n} nodes")
        return cls.from_values([(mask >> v) & 1 for v in range(n)])

    @classmethod
    def single(cls, node: int, node_type: int, n: int) -> "Configuration":
        """All nodes the opposite type except `node`."""
        other = T2 if node_type == T1 else T1
        vals = [other] * n
        vals[node] = node_type
        return cls.from_values(vals)

    @classmethod
    def uniform_type(cls, node_type: int, n: int) -> "Configuration":
        return cls.from_values([node_type] * n)

    def to_mask(self) -> int:
        mask = 0
        for v, t in enumerate(self.values):
            mask |= t << v
        return mask

    def copy(self) -> "Configuration":
        return Configuration(list(self.values), self.count_t1, self.count_t2)

    def flipped(self, node: int, new_type: int) -> "Configuration":
        """Return a copy with `node` set to `new_type`."""
        out = self.copy()
        old = out.values[node]
        out.values[node] = new_type
        if old != new_type:
            if new_type == T1:
                out.count_t1 += 1
                out.count_t2 -= 1
            else:
                out.count_t1 -= 1
                out.count_t2 += 1
        return out

    @property
    def n(self) -> int:
        return len(self.values)


# ---------------------------------------------------------------------------
# Initial distributions


@dataclass(frozen=True)
class UniformSingle:
    """Uniform over the n configurations with exactly one node of node_type."""

    node_type: int


@dataclass(frozen=True)
class Explicit:
    """A point distribution on one configuration."""

    config: Configuration


InitialDistribution = Union[UniformSingle, Explicit]


def draw_initial(graph: Graph, dist: InitialDistribution, rng: random.Random) -> Configuration:
    """Sample an initial configuration for `graph` from `dist`."""
    if isinstance(dist, Explicit):
        if dist.config.n != graph.n:
            raise NodeIdOutOfRange(
                f"configuration has {dist.config.n} nodes, graph has {graph.n}"
            )
        return dist.config.copy()
    node = rng.randrange(graph.n)
    return Configuration.single(node, dist.node_type, graph.n)


# ---------------------------------------------------------------------------
# Edge-list text format: first line "n m", then m lines "u v"; '#' comments.


def parse_edge_list(text: str) -> Graph:
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise EdgeListFormatError("empty edge-list input")
    header = rows[0]
    if len(header) != 2:
        raise EdgeListFormatError(f"header must be 'n m', got {' '.join(header)!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise EdgeListFormatError(f"non-integer header: {' '.join(header)!r}") from exc
    body = rows[1:]
    if len(body) != m:
        raise EdgeListFormatError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for row in body:
        if len(row) != 2:
            raise EdgeListFormatError(f"edge line must be 'u v', got {' '.join(row)!r}")
        try:
            edges.append((int(row[0]), int(row[1])))
        except ValueError as exc:
            raise EdgeListFormatError(f"non-integer edge: {' '.join(row)!r}") from exc
    return validate_graph(edges, n)


def read_edge_list(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"
