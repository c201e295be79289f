"""Rejection-free sampling of effective steps.

After O(m) setup, SamplerState draws one effective step in expected
O(max_degree) time and absorbs a type flip in O(max_degree) amortized time.
The layout: one tombstoned array (IndexedList) per (type, degree) pair, in
which a node v appears once per neighbor of differing type.  Every copy in
list (t, d) carries the same weight w(t)/d, so a list's weight is simply
w(t)/d times its live count, and a uniform draw inside a list is already
weight-proportional over nodes.  Picking the list itself is a linear scan
over at most 2*max_degree lists against one uniform real.
"""

from __future__ import annotations

import random
from typing import Callable, Iterator, Optional

from .errors import AlreadyFixated, DeadSlot, EmptyList, NoOpFlip
from .graphs import Configuration, Graph, T1, T2

# Exact recomputation period for the incrementally maintained total weight,
# bounding float drift well below 1e-9 relative.
_RECOMPUTE_PERIOD = 1 << 16


class IndexedList:
    """Growable array with tombstone deletion and uniform random access.

    Deleting nulls a slot; the array is compacted once more entries have
    been deleted than remain live, so occupancy stays at least 1/2 and
    find_random needs under two probes in expectation.  Owners that track
    slot numbers receive the freshly rebuilt array through the on_compact
    callback (index = new slot) after every compaction.
    """

    __slots__ = ("slots", "free", "size", "deleted_since_rebuild", "on_compact",
                 "compaction_work")

    def __init__(self, on_compact: Optional[Callable] = None):
        self.slots: list = []
        self.free: list[int] = []
        self.size = 0
        self.deleted_since_rebuild = 0
        self.on_compact = on_compact
        self.compaction_work = 0  # slots touched by compactions, for cost accounting

    def __len__(self) -> int:
        return self.size

    @property
    def capacity(self) -> int:
        return len(self.slots)

    def insert(self, item) -> int:
        """Store item, reusing a free slot when one exists; returns the slot."""
        if self.free:
            slot = self.free.pop()
            self.slots[slot] = item
        else:
            slot = len(self.slots)
            self.slots.append(item)
        self.size += 1
        return slot

    def insert_many(self, item, count: int, out: list[int]) -> None:
        """Insert `count` copies of item, appending their slots to `out`."""
        slots = self.slots
        free = self.free
        for _ in range(count):
            if free:
                slot = free.pop()
                slots[slot] = item
            else:
                slot = len(slots)
                slots.append(item)
            out.append(slot)
        self.size += count

    def delete(self, slot: int) -> None:
        if slot >= len(self.slots) or self.slots[slot] is None:
            raise DeadSlot(f"slot {slot} holds no live entry")
        self.slots[slot] = None
        self.size -= 1
        self.deleted_since_rebuild += 1
        if self.deleted_since_rebuild > self.size:
            self.compact()
        else:
            self.free.append(slot)

    def delete_many(self, to_delete: list[int]) -> None:
        """Null a batch of slots, deciding on compaction once at the end."""
        slots = self.slots
        top = len(slots)
        for slot in to_delete:
            if slot >= top or slots[slot] is None:
                raise DeadSlot(f"slot {slot} holds no live entry")
            slots[slot] = None
        self.size -= len(to_delete)
        self.deleted_since_rebuild += len(to_delete)
        if self.deleted_since_rebuild > self.size:
            self.compact()
        else:
            self.free.extend(to_delete)

    def compact(self) -> None:
        """Rebuild without nulls, then announce the new layout."""
        self.compaction_work += len(self.slots)
        self.slots = [item for item in self.slots if item is not None]
        self.free.clear()
        self.deleted_since_rebuild = 0
        if self.on_compact is not None:
            self.on_compact(self.slots)

    def find_random(self, rng: random.Random):
        """Uniform live entry, by probing uniform slots until one is live."""
        if self.size == 0:
            raise EmptyList("find_random on an empty list")
        slots = self.slots
        cap = len(slots)
        randrange = rng.randrange
        while True:
            item = slots[randrange(cap)]
            if item is not None:
                return item

    def live_items(self) -> Iterator:
        return (item for item in self.slots if item is not None)

    def clear(self) -> None:
        self.slots.clear()
        self.free.clear()
        self.size = 0
        self.deleted_since_rebuild = 0


class SamplerState:
    """Sampling structure for one simulation run over a fixed graph.

    Owns the current configuration.  Structures per node v:
      - positions[v]: slots of v's copies inside the (type(v), deg v) list;
        the copy count always equals |gamma(v)|.
      - gamma[v]: IndexedList of the differing-type neighbors of v, with
        gamma_pos[v] mapping neighbor id -> slot for O(1) removal.

    total_weight mirrors the active weight W'(f) incrementally and is
    recomputed exactly every 2**16 flips; it is pinned to exactly 0.0
    whenever no bichromatic edge remains, which happens exactly at
    fixation.
    """

    def __init__(self, graph: Graph, config: Configuration, r: float):
        self.graph = graph
        self.r = float(r)
        n = graph.n
        self.values: list[int] = [0] * n
        self.count_t1 = 0
        self.count_t2 = 0

        degrees = sorted(set(graph.deg))
        self.unit: dict[tuple[int, int], float] = {}
        self.lists: dict[tuple[int, int], IndexedList] = {}
        for t in (T2, T1):
            w = self.r if t == T1 else 1.0
            for d in degrees:
                self.unit[(t, d)] = w / d
                self.lists[(t, d)] = IndexedList(on_compact=self._rebuild_positions)
        # Fixed scan order for the weighted list pick.
        self._scan = [(self.unit[key], self.lists[key]) for key in sorted(self.lists)]
        # Per-node views (degree never changes), avoiding tuple-key lookups
        # in the flip path: _list_of[t][v] is the list holding v's copies
        # while v has type t, and _unit_of[t][v] its per-copy weight.
        self._list_of = tuple(
            [self.lists[(t, deg)] for deg in graph.deg] for t in (T2, T1)
        )
        self._unit_of = tuple(
            [self.unit[(t, deg)] for deg in graph.deg] for t in (T2, T1)
        )

        self.positions: list[list[int]] = [[] for _ in range(n)]
        self.gamma: list[IndexedList] = []
        self.gamma_pos: list[dict[int, int]] = [dict() for _ in range(n)]
        for v in range(n):
            self.gamma.append(IndexedList(on_compact=self._make_gamma_rebuild(v)))

        self.total_weight = 0.0
        self.live_copies = 0
        self._flips = 0
        self.reset(config)

    def _rebuild_positions(self, slots: list) -> None:
        # A node's copies all live in one list, so every position list that
        # intersects the compacted array can be rebuilt from it wholesale.
        positions = self.positions
        for v in set(slots):
            positions[v].clear()
        for slot, v in enumerate(slots):
            positions[v].append(slot)

    def _make_gamma_rebuild(self, v: int) -> Callable:
        gamma_pos = self.gamma_pos[v]
        def rebuild(slots: list) -> None:
            gamma_pos.clear()
            for slot, u in enumerate(slots):
                gamma_pos[u] = slot
        return rebuild

    # -- construction / reset --------------------------------------------------

    def _clear_all(self) -> None:
        # At fixation every per-node structure is already empty (no
        # bichromatic edge means no copies and no gamma members), so a
        # state that ran to fixation needs no sweep.
        if self.live_copies == 0:
            return
        for lst in self.lists.values():
            lst.clear()
        for v in range(self.graph.n):
            self.gamma[v].clear()
            self.gamma_pos[v].clear()
            self.positions[v].clear()

    def reset(self, config: Configuration) -> None:
        """Reinitialize in place for a new configuration (O(m))."""
        graph = self.graph
        n = graph.n
        if config.n != n:
            raise NoOpFlip(f"configuration has {config.n} nodes, graph has {n}")
        self._clear_all()
        vals = list(config.values)
        self.values = vals
        self.count_t1 = config.count_t1
        self.count_t2 = config.count_t2
        total = 0.0
        live = 0
        adj = graph.adj
        deg = graph.deg
        for v in range(n):
            tv = vals[v]
            members = [w for w in adj[v] if vals[w] != tv]
            if not members:
                continue
            gamma_lst = self.gamma[v]
            gamma_pos = self.gamma_pos[v]
            for w in members:
                gamma_pos[w] = gamma_lst.insert(w)
            key = (tv, deg[v])
            self.lists[key].insert_many(v, len(members), self.positions[v])
            total += self.unit[key] * len(members)
            live += len(members)
        self.live_copies = live
        self.total_weight = total if live else 0.0
        self._flips = 0

    def reset_single(self, node: int, node_type: int) -> None:
        """Reinitialize for the start with one `node_type` node at `node`
        and the opposite type everywhere else (O(deg node) after a run
        that fixated)."""
        graph = self.graph
        n = graph.n
        other = T2 if node_type == T1 else T1
        self._clear_all()
        vals = [other] * n
        vals[node] = node_type
        self.values = vals
        self.count_t1 = 1 if node_type == T1 else n - 1
        self.count_t2 = n - self.count_t1
        neighbors = graph.adj[node]
        deg = graph.deg
        gamma_lst = self.gamma[node]
        gamma_pos = self.gamma_pos[node]
        unit_of = self._unit_of
        list_of = self._list_of
        total = 0.0
        for w in neighbors:
            gamma_pos[w] = gamma_lst.insert(w)
            self.gamma_pos[w][node] = self.gamma[w].insert(node)
            self.positions[w].append(list_of[other][w].insert(w))
            total += unit_of[other][w]
        degree = deg[node]
        if degree:
            list_of[node_type][node].insert_many(
                node, degree, self.positions[node]
            )
            total += unit_of[node_type][node] * degree
        self.live_copies = 2 * degree
        self.total_weight = total if degree else 0.0
        self._flips = 0

    @property
    def config(self) -> Configuration:
        """Snapshot of the current configuration."""
        return Configuration(list(self.values), self.count_t1, self.count_t2)

    @property
    def fixated(self) -> bool:
        return self.live_copies == 0

    # -- sampling --------------------------------------------------------------

    def sample_effective_step(self, rng: random.Random) -> tuple[int, int]:
        """Draw (reproducer v, replaced u) with the exact effective-step law."""
        if self.live_copies == 0:
            raise AlreadyFixated("no effective step exists at fixation")
        x = rng.random() * self.total_weight
        acc = 0.0
        chosen = None
        for unit, lst in self._scan:
            sz = lst.size
            if sz:
                chosen = lst
                acc += unit * sz
                if x < acc:
                    break
        # Float drift may push x past the final accumulator; the last
        # non-empty list absorbs that sliver.
        v = chosen.find_random(rng)
        u = self.gamma[v].find_random(rng)
        return v, u

    # -- updates ---------------------------------------------------------------

    def apply_flip(self, u: int, new_type: int) -> None:
        """Change u's type and patch every affected list in O(deg u)."""
        vals = self.values
        old = vals[u]
        if old == new_type:
            raise NoOpFlip(f"node {u} already has type {new_type}")
        graph = self.graph
        positions = self.positions
        gamma = self.gamma
        gamma_pos = self.gamma_pos
        list_of = self._list_of
        unit_of = self._unit_of
        deg_u = graph.deg[u]
        total = self.total_weight
        live = self.live_copies

        # Drop all copies of u from (old, deg u).
        pos_u = positions[u]
        removed = len(pos_u)
        if removed:
            list_of[old][u].delete_many(pos_u)
            pos_u.clear()
            total -= unit_of[old][u] * removed
            live -= removed

        # Per neighbor: the edge u-w swaps between mono- and bichromatic.
        gamma_u = gamma[u]
        gamma_u.clear()
        gamma_pos_u = gamma_pos[u]
        gamma_pos_u.clear()
        for w in graph.adj[u]:
            tw = vals[w]
            if tw == new_type:
                # Was bichromatic: remove one copy of w, drop u from gamma(w).
                slot = positions[w].pop()
                list_of[tw][w].delete(slot)
                gamma[w].delete(gamma_pos[w].pop(u))
                total -= unit_of[tw][w]
                live -= 1
            else:
                # Was monochromatic: add a copy of w, add u to gamma(w).
                positions[w].append(list_of[tw][w].insert(w))
                gamma_pos[w][u] = gamma[w].insert(u)
                total += unit_of[tw][w]
                live += 1
                # New gamma(u) members are exactly the old-type neighbors.
                gamma_pos_u[w] = gamma_u.insert(w)

        # Insert u's deg(u) - removed copies into (new, deg u).
        added = deg_u - removed
        if added:
            list_of[new_type][u].insert_many(u, added, pos_u)
            total += unit_of[new_type][u] * added
            live += added

        vals[u] = new_type
        if new_type == T1:
            self.count_t1 += 1
            self.count_t2 -= 1
        else:
            self.count_t1 -= 1
            self.count_t2 += 1

        self.live_copies = live
        self._flips += 1
        if live == 0:
            self.total_weight = 0.0
        elif self._flips % _RECOMPUTE_PERIOD == 0:
            self.total_weight = self._exact_total_weight()
        else:
            self.total_weight = total

    def _exact_total_weight(self) -> float:
        return sum(unit * lst.size for unit, lst in self._scan)

    # -- driving loops ---------------------------------------------------------

    def step(self, rng: random.Random) -> tuple[int, int]:
        """Sample one effective step and apply it; returns (v, u)."""
        v, u = self.sample_effective_step(rng)
        self.apply_flip(u, self.values[v])
        return v, u

    def run_to_fixation(self, rng: random.Random, budget: Optional[int] = None) -> Optional[int]:
        """Run effective steps until fixation; returns the step count.

        With a budget, returns None as soon as fixation would need more
        than `budget` steps.
        """
        steps = 0
        while self.live_copies:
            if budget is not None and steps >= budget:
                return None
            self.step(rng)
            steps += 1
        return steps
