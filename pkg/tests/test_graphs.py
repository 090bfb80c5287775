import io

import numpy as np
import pytest

from recnet import (
    DirectedGraph,
    EmptyInputError,
    ParseError,
    UndirectedGraph,
    UnknownNodeError,
    components,
    induced_subgraph,
    ingest_directed,
    ingest_undirected,
    read_seed_list,
    to_undirected,
    write_edge_list,
)
from recnet.rng import make_rng

from oracles import uf_component_count, uf_labels


def ingest_d(text):
    return ingest_directed(io.StringIO(text))


def ingest_u(text):
    return ingest_undirected(io.StringIO(text))


class TestIngest:
    def test_basic_directed(self):
        g, rep = ingest_d("a b\nb c\n")
        assert (g.node_count, g.edge_count) == (3, 2)
        assert rep.duplicates == 0 and rep.self_loops == 0

    def test_dedup_and_self_loops(self):
        g, rep = ingest_d("a b\na b\na a\n")
        assert (g.node_count, g.edge_count) == (2, 1)
        assert rep.duplicates == 1 and rep.self_loops == 1

    def test_undirected_symmetric_dedup(self):
        g, rep = ingest_u("a b\nb a\n")
        assert (g.node_count, g.edge_count) == (2, 1)
        assert rep.duplicates == 1

    def test_triangle(self):
        g, _ = ingest_u("a b\nb c\nc a\n")
        assert (g.node_count, g.edge_count) == (3, 3)

    def test_separators_and_comments(self):
        g, rep = ingest_d("# header\na\tb\nc,d\ne  f\ng h 12\n")
        assert g.edge_count == 4
        assert rep.comments == 1

    def test_malformed_line_number(self):
        with pytest.raises(ParseError, match="line 2"):
            ingest_d("a b\na b c d\n")

    def test_bad_token(self):
        with pytest.raises(ParseError):
            ingest_d("a b#c\n")

    def test_empty_stream(self):
        with pytest.raises(EmptyInputError):
            ingest_d("# nothing here\n")

    def test_roundtrip_identical_token_mapping(self):
        g, _ = ingest_d("n3 n1\nn1 n2\nn2 n3\nn1 n4\n")
        buf = io.StringIO()
        write_edge_list(g, buf)
        g2, _ = ingest_d(buf.getvalue())
        assert g2.tokens == g.tokens
        assert list(g2.iter_edges()) == list(g.iter_edges())


class TestToUndirected:
    def test_mutual_pair_collapses(self):
        g = DirectedGraph.from_pairs([("a", "b"), ("b", "a")])
        assert to_undirected(g).edge_count == 1

    def test_path(self):
        g = DirectedGraph.from_pairs([("a", "b"), ("b", "c")])
        u = to_undirected(g)
        assert u.edge_count == 2 and u.tokens == g.tokens

    def test_random_matches_membership_oracle(self):
        rng = make_rng(11)
        for _ in range(20):
            n = 20
            pairs = {(int(rng.integers(0, n)), int(rng.integers(0, n))) for _ in range(60)}
            pairs = {(a, b) for a, b in pairs if a != b}
            tokens = [f"t{i}" for i in range(n)]
            g = DirectedGraph.from_indexed(
                tokens,
                np.array([a for a, _ in pairs]),
                np.array([b for _, b in pairs]),
            )
            u = to_undirected(g)
            expected = {(min(a, b), max(a, b)) for a, b in pairs}
            assert set(u.iter_edges()) == expected


class TestComponents:
    def test_disjoint_edges(self):
        g = UndirectedGraph.from_pairs([("a", "b"), ("c", "d")])
        dec = components(g)
        assert dec.sizes == [(2, 1), (2, 1)]

    def test_triangle_plus_isolated(self):
        g = UndirectedGraph.from_pairs([("a", "b"), ("b", "c"), ("c", "a")])
        sub = induced_subgraph(g, ["a", "b", "c"])
        # isolated node via induced subgraph of a larger graph
        g2 = UndirectedGraph.from_pairs([("a", "b"), ("b", "c"), ("c", "a"), ("d", "e")])
        sub2 = induced_subgraph(g2, ["a", "b", "c", "d"])
        dec = components(sub2)
        assert dec.sizes == [(3, 3), (1, 0)]
        assert dec.count == 2
        del sub

    def test_giant_is_component_zero(self):
        g = UndirectedGraph.from_pairs(
            [("x", "y"), ("p", "q"), ("q", "r"), ("r", "s")]
        )
        dec = components(g)
        assert dec.vertex_counts[0] == 4
        assert {g.tokens[i] for i in dec.giant_members()} == {"p", "q", "r", "s"}

    def test_tie_broken_by_smallest_member_index(self):
        g = UndirectedGraph.from_pairs([("c", "d"), ("a", "b")])
        dec = components(g)
        # both components have 2 nodes; the one containing index 0 wins
        assert 0 in dec.members(0)

    def test_random_forests_match_union_find(self):
        rng = make_rng(99)
        from recnet import gen_rn_forest

        for seed in range(500):
            sizes = {int(rng.integers(2, 9)): int(rng.integers(1, 4)) for _ in range(3)}
            g = gen_rn_forest(sizes, seed=seed)
            eu, ev = g.edge_arrays()
            edges = list(zip(eu.tolist(), ev.tolist()))
            dec = components(g)
            assert dec.count == uf_component_count(g.node_count, edges)
            labels = uf_labels(g.node_count, edges)
            # same partition: equal label <=> equal component
            for a in range(g.node_count):
                for b in range(a + 1, min(a + 5, g.node_count)):
                    assert (labels[a] == labels[b]) == (
                        dec.component_of[a] == dec.component_of[b]
                    )

    def test_partition_sums(self):
        from recnet import gen_er

        for seed in range(10):
            g = gen_er(40, 0.05, seed)
            dec = components(g)
            assert int(dec.vertex_counts.sum()) == g.node_count
            assert int(dec.edge_counts.sum()) == g.edge_count

    def test_directed_equals_undirected_partition(self):
        from recnet import gen_rn_forest

        for seed in range(10):
            g = gen_rn_forest({2: 3, 5: 2}, seed=seed)
            d1 = components(g)
            d2 = components(to_undirected(g))
            assert np.array_equal(d1.component_of, d2.component_of)
            assert np.array_equal(d1.vertex_counts, d2.vertex_counts)

    def test_degree_consistency(self):
        g = DirectedGraph.from_pairs([("a", "b"), ("b", "c"), ("c", "a"), ("a", "c")])
        assert int(g.out_degrees().sum()) == g.edge_count
        assert int(g.in_degrees().sum()) == g.edge_count
        total = int(g.out_degrees().sum() + g.in_degrees().sum())
        assert total == 2 * g.edge_count


class TestInducedSubgraph:
    def test_triangle_pair(self):
        g = UndirectedGraph.from_pairs([("a", "b"), ("b", "c"), ("c", "a")])
        sub = induced_subgraph(g, ["a", "b"])
        assert (sub.node_count, sub.edge_count) == (2, 1)

    def test_identity(self):
        g = UndirectedGraph.from_pairs([("a", "b"), ("b", "c")])
        sub = induced_subgraph(g, list(g.tokens))
        assert set(sub.iter_edges()) == set(g.iter_edges())

    def test_unknown_node_named(self):
        g = UndirectedGraph.from_pairs([("a", "b")])
        with pytest.raises(UnknownNodeError, match="zzz"):
            induced_subgraph(g, ["a", "zzz"])

    def test_random_matches_edge_filter(self):
        from recnet import gen_er

        rng = make_rng(5)
        for seed in range(15):
            g = gen_er(30, 0.15, seed)
            keep = sorted(rng.choice(30, size=10, replace=False).tolist())
            tokens = [g.tokens[i] for i in keep]
            sub = induced_subgraph(g, tokens)
            kept = set(keep)
            expected = {
                (keep.index(a), keep.index(b))
                for a, b in g.iter_edges()
                if a in kept and b in kept
            }
            expected = {(min(a, b), max(a, b)) for a, b in expected}
            assert set(sub.iter_edges()) == expected


class TestSeedList:
    def test_read(self):
        seeds = read_seed_list(io.StringIO("# s\na\nb\n"))
        assert seeds == ["a", "b"]

    def test_duplicate_rejected(self):
        with pytest.raises(ParseError):
            read_seed_list(io.StringIO("a\na\n"))
