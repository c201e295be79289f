"""Graph construction, family generators, and initial distributions."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moransim import (
    Configuration,
    DisconnectedGraph,
    DuplicateEdge,
    EdgeListFormatError,
    Explicit,
    InvalidFamilyParams,
    NodeIdOutOfRange,
    SelfLoop,
    T1,
    T2,
    UniformSingle,
    complete_graph,
    cycle_graph,
    draw_initial,
    format_edge_list,
    gen_family,
    line_graph,
    lower_bound_graph,
    parse_edge_list,
    star_graph,
    validate_graph,
)


class TestValidateGraph:
    def test_smallest_connected_graph(self):
        g = validate_graph([(0, 1)], 2)
        assert g.max_degree == 1
        assert g.m == 1
        assert g.adj == ((1,), (0,))

    def test_isolated_node_rejected(self):
        with pytest.raises(DisconnectedGraph):
            validate_graph([(0, 1)], 3)

    def test_complete_k4(self):
        g = validate_graph([(u, v) for u in range(4) for v in range(u + 1, 4)], 4)
        assert g.max_degree == 3
        assert g.m == 6

    def test_self_loop(self):
        with pytest.raises(SelfLoop):
            validate_graph([(0, 1), (1, 1)], 2)

    def test_duplicate_edge(self):
        with pytest.raises(DuplicateEdge):
            validate_graph([(0, 1), (1, 0)], 2)

    def test_node_out_of_range(self):
        with pytest.raises(NodeIdOutOfRange):
            validate_graph([(0, 2)], 2)

    def test_adjacency_symmetric_and_sorted(self):
        g = validate_graph([(2, 0), (1, 2), (0, 1), (3, 0)], 4)
        for u in range(4):
            assert list(g.adj[u]) == sorted(g.adj[u])
            for v in g.adj[u]:
                assert u in g.adj[v]
        assert g.m == sum(g.deg) // 2


class TestFamilies:
    def test_star(self):
        g = star_graph(5)
        assert g.deg[0] == 4
        assert all(g.deg[v] == 1 for v in range(1, 5))

    def test_cycle(self):
        g = cycle_graph(4)
        assert all(d == 2 for d in g.deg)

    def test_line(self):
        g = line_graph(4)
        assert sorted(g.deg) == [1, 1, 2, 2]

    def test_cycle_too_small(self):
        with pytest.raises(InvalidFamilyParams):
            cycle_graph(2)

    def test_lower_bound_reference_instance(self):
        # delta=6, n=31: x = floor(31/10) = 3 centers, 4 leaves on each of
        # c_2 and c_3, stars part has s = 2*5+1 = 11 nodes, line has 20.
        g = lower_bound_graph(6, 31)
        assert g.n == 31
        assert g.max_degree == 6
        x = 31 // (2 * 6 - 2)
        s = (x - 1) * (6 - 1) + 1
        assert x == 3 and s == 11
        degree_one = sum(1 for d in g.deg if d == 1)
        assert degree_one == 2 * 4 + 1  # 8 leaves plus the line's far end
        assert sum(1 for d in g.deg if d == 6) == 2  # c_2 and c_3

    def test_lower_bound_degenerate_cycle(self):
        # n small enough that only 2 centers fit: single center edge, and
        # the star center misses one cycle edge, so max degree is delta-1.
        g = lower_bound_graph(8, 40)
        assert g.n == 40
        assert g.max_degree == 7

    @pytest.mark.parametrize("delta,n", [(2, 20), (3, 12), (6, 24)])
    def test_lower_bound_rejects_out_of_regime(self, delta, n):
        with pytest.raises(InvalidFamilyParams):
            lower_bound_graph(delta, n)

    def test_gen_family_dispatch(self):
        assert gen_family("complete", n=4).m == 6
        assert gen_family("lower_bound", n=31, delta=6).n == 31
        with pytest.raises(InvalidFamilyParams):
            gen_family("pentagram", n=5)
        with pytest.raises(InvalidFamilyParams):
            gen_family("lower_bound", n=31)

    @given(st.integers(3, 40))
    @settings(max_examples=30, deadline=None)
    def test_families_revalidate(self, n):
        for builder in (complete_graph, star_graph, line_graph, cycle_graph):
            g = builder(n)
            assert validate_graph(list(g.edges()), g.n) == g

    @given(st.integers(3, 12), st.integers(0, 80))
    @settings(max_examples=30, deadline=None)
    def test_lower_bound_revalidates(self, delta, extra):
        n = 4 * delta + 1 + extra
        g = lower_bound_graph(delta, n)
        assert g.n == n
        x = n // (2 * delta - 2)
        assert g.max_degree == (delta if x >= 3 else delta - 1)
        assert validate_graph(list(g.edges()), n) == g


class TestConfiguration:
    def test_mask_roundtrip(self):
        cfg = Configuration.from_mask(0b1011, 4)
        assert cfg.values == [1, 1, 0, 1]
        assert cfg.count_t1 == 3 and cfg.count_t2 == 1
        assert cfg.to_mask() == 0b1011

    def test_mask_too_wide(self):
        with pytest.raises(NodeIdOutOfRange):
            Configuration.from_mask(1 << 4, 4)

    def test_flipped_is_a_copy(self):
        cfg = Configuration.from_values([1, 0, 0])
        out = cfg.flipped(1, T1)
        assert cfg.values == [1, 0, 0]
        assert out.values == [1, 1, 0]
        assert out.count_t1 == 2

    @given(st.integers(1, 6), st.data())
    @settings(max_examples=50, deadline=None)
    def test_counts_match_values(self, n, data):
        mask = data.draw(st.integers(0, (1 << n) - 1))
        cfg = Configuration.from_mask(mask, n)
        assert cfg.count_t1 == sum(cfg.values)
        assert cfg.count_t1 + cfg.count_t2 == n


class TestDrawInitial:
    def test_explicit_identity(self):
        g = complete_graph(4)
        cfg = Configuration.from_mask(0b0110, 4)
        out = draw_initial(g, Explicit(cfg), random.Random(0))
        assert out == cfg
        assert out is not cfg

    def test_explicit_size_mismatch(self):
        g = complete_graph(4)
        with pytest.raises(NodeIdOutOfRange):
            draw_initial(g, Explicit(Configuration.from_mask(1, 3)), random.Random(0))

    def test_single_t2_on_k4(self):
        g = complete_graph(4)
        cfg = draw_initial(g, UniformSingle(T2), random.Random(1))
        assert cfg.count_t2 == 1
        assert cfg.count_t1 == 3

    def test_uniformity_within_4_sigma(self):
        g = complete_graph(3)
        rng = random.Random(12345)
        draws = 100_000
        counts = [0, 0, 0]
        for _ in range(draws):
            cfg = draw_initial(g, UniformSingle(T1), rng)
            counts[cfg.values.index(T1)] += 1
        expected = draws / 3
        sigma = math.sqrt(draws * (1 / 3) * (2 / 3))
        for c in counts:
            assert abs(c - expected) <= 4 * sigma


class TestEdgeListFormat:
    def test_roundtrip(self):
        g = star_graph(5)
        assert parse_edge_list(format_edge_list(g)) == g

    def test_comments_and_blank_lines(self):
        text = "# a star\n3 2\n\n0 1  # hub-leaf\n0 2\n"
        g = parse_edge_list(text)
        assert g.n == 3 and g.m == 2

    @pytest.mark.parametrize("text", [
        "", "3\n0 1\n", "2 1\n", "2 1\n0 1\n0 1\n", "2 x\n0 1\n", "2 1\n0 one\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(EdgeListFormatError):
            parse_edge_list(text)
