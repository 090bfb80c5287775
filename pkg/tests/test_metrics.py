import numpy as np
import pytest

from recnet import (
    BehaviorClass,
    ConfigError,
    DirectedGraph,
    DomainError,
    ModeError,
    UndirectedGraph,
    classify_behavior,
    clustering,
    components,
    compute_metrics,
    degree_ecdf,
    gen_ba,
    gen_er,
    gen_rn_forest,
    knn_by_degree,
    path_metrics,
    reciprocity,
    subnetwork_table,
    to_undirected,
)
from recnet.metrics import metric_records
from recnet.rng import make_rng

from oracles import (
    ecdf_sorted,
    floyd_warshall,
    knn_table,
    local_cc,
    neighbor_sets,
    path_stats,
    reciprocity_scan,
)


def star(k):
    return UndirectedGraph.from_pairs([("c", f"l{i}") for i in range(k)])


def path_graph(n):
    return UndirectedGraph.from_pairs([(f"p{i}", f"p{i+1}") for i in range(n - 1)])


def mixed_graph(seed):
    """One of ER / BA / directed forest, deterministically per seed."""
    kind = seed % 3
    if kind == 0:
        return gen_er(8 + seed % 57, 0.08, seed)
    if kind == 1:
        m = 1 + seed % 3
        return gen_ba(m + 2 + seed % 60, m, seed)
    return gen_rn_forest({2: 2 + seed % 4, 3 + seed % 5: 2}, seed=seed)


class TestDegreeEcdf:
    def test_star_total(self):
        assert degree_ecdf(star(3)) == [(1, 0.75), (3, 1.0)]

    def test_single_directed_edge_out(self):
        g = DirectedGraph.from_pairs([("a", "b")])
        assert degree_ecdf(g, "out") == [(0, 0.5), (1, 1.0)]

    def test_mode_error_on_undirected(self):
        with pytest.raises(ModeError):
            degree_ecdf(star(3), "out")

    def test_matches_sort_count_oracle(self):
        g = gen_er(100, 0.04, seed=2)
        assert degree_ecdf(g) == [
            (d, pytest.approx(p)) for d, p in ecdf_sorted(g.degrees().tolist())
        ]

    def test_monotone_ends_at_one(self):
        for seed in range(5):
            g = gen_ba(50, 2, seed)
            pts = degree_ecdf(g)
            probs = [p for _, p in pts]
            assert probs == sorted(probs)
            assert probs[-1] == 1.0


class TestClustering:
    def test_triangle(self):
        g = UndirectedGraph.from_pairs([("a", "b"), ("b", "c"), ("c", "a")])
        assert clustering(g).global_cc == pytest.approx(1.0)

    def test_star_is_zero(self):
        assert clustering(star(3)).global_cc == 0.0

    def test_triangle_with_pendant(self):
        g = UndirectedGraph.from_pairs(
            [("a", "b"), ("b", "c"), ("c", "a"), ("a", "d")]
        )
        cs = clustering(g)
        by_token = {g.tokens[i]: cs.local[i] for i in range(4)}
        assert by_token["a"] == pytest.approx(1 / 3)
        assert by_token["b"] == pytest.approx(1.0)
        assert by_token["c"] == pytest.approx(1.0)
        assert by_token["d"] == 0.0
        assert cs.global_cc == pytest.approx(7 / 12, abs=1e-12)
        assert cs.global_cc_min_deg2 == pytest.approx(7 / 9, abs=1e-12)

    def test_matches_enumeration_oracle(self):
        for seed in range(20):
            g = mixed_graph(seed)
            und = to_undirected(g) if g.directed else g
            expected = local_cc(neighbor_sets(und))
            got = clustering(und).local
            assert np.allclose(got, expected, atol=1e-12)


class TestPathMetrics:
    def test_p4_diameter(self):
        pm = path_metrics(path_graph(4))
        assert pm.diameter == 3

    def test_p3_apl(self):
        pm = path_metrics(path_graph(3))
        assert pm.avg_path_length == pytest.approx(4 / 3, abs=1e-12)

    def test_directed_distances(self):
        g = DirectedGraph.from_pairs([("a", "b"), ("b", "c")])
        pm = path_metrics(g)
        # reachable ordered pairs: a->b 1, a->c 2, b->c 1
        assert pm.diameter == 2
        assert pm.avg_path_length == pytest.approx(4 / 3, abs=1e-12)

    def test_matches_floyd_warshall_on_random_graphs(self):
        checked = 0
        for seed in range(100):
            g = mixed_graph(seed)
            eu, ev = g.edge_arrays()
            edges = list(zip(eu.tolist(), ev.tolist()))
            dist = floyd_warshall(g.node_count, edges, g.directed)
            expected = path_stats(dist)
            if expected is None:
                continue
            pm = path_metrics(g)
            assert pm.diameter == expected[0]
            assert pm.avg_path_length == pytest.approx(expected[1], abs=1e-12)
            assert pm.reachable_pairs == expected[2]
            checked += 1
        assert checked >= 90

    def test_empty_graph(self):
        with pytest.raises(DomainError):
            path_metrics(UndirectedGraph.from_indexed([], np.zeros(0), np.zeros(0)))

    def test_no_reachable_pairs(self):
        g = UndirectedGraph.from_indexed(["a", "b"], np.zeros(0, int), np.zeros(0, int))
        with pytest.raises(DomainError):
            path_metrics(g)

    def test_exact_limit(self):
        g = path_graph(10)
        with pytest.raises(ConfigError):
            path_metrics(g, exact_limit=5)

    def test_sampled_mode(self):
        g = gen_ba(300, 2, seed=1)
        exact = path_metrics(g)
        sampled = path_metrics(g, mode="sampled", sources=40, seed=3)
        assert sampled.estimate and sampled.mode == "sampled"
        assert sampled.diameter <= exact.diameter  # lower bound
        assert sampled.avg_path_length == pytest.approx(exact.avg_path_length, rel=0.25)
        again = path_metrics(g, mode="sampled", sources=40, seed=3)
        assert again.avg_path_length == sampled.avg_path_length

    def test_threads_do_not_change_results(self):
        g = gen_ba(400, 3, seed=4)
        a = path_metrics(g, threads=1)
        b = path_metrics(g, threads=8)
        assert (a.diameter, a.avg_path_length) == (b.diameter, b.avg_path_length)

    def test_edge_addition_never_increases_distance(self):
        rng = make_rng(17)
        for seed in range(10):
            g = gen_er(25, 0.1, seed)
            eu, ev = g.edge_arrays()
            edges = list(zip(eu.tolist(), ev.tolist()))
            base = floyd_warshall(g.node_count, edges, False)
            a, b = rng.integers(0, 25, size=2).tolist()
            while a == b:
                b = int(rng.integers(0, 25))
            augmented = floyd_warshall(g.node_count, edges + [(a, b)], False)
            assert (augmented <= base + 1e-9).all()


class TestKnn:
    def test_star(self):
        assert knn_by_degree(star(4)) == [(1, 4.0), (4, 1.0)]

    def test_cycle(self):
        g = UndirectedGraph.from_pairs(
            [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]
        )
        assert knn_by_degree(g) == [(2, 2.0)]

    def test_matches_nested_loop_oracle(self):
        for seed in range(10):
            g = gen_er(50, 0.08, seed)
            expected = knn_table(neighbor_sets(g))
            got = dict(knn_by_degree(g))
            assert set(got) == set(expected)
            for k in expected:
                assert got[k] == pytest.approx(expected[k], abs=1e-12)

    def test_relabeling_invariance(self):
        g = gen_ba(60, 2, seed=9)
        perm = make_rng(1).permutation(g.node_count)
        eu, ev = g.edge_arrays()
        g2 = UndirectedGraph.from_indexed(
            [f"r{i}" for i in range(g.node_count)], perm[eu], perm[ev]
        )
        t1, t2 = dict(knn_by_degree(g)), dict(knn_by_degree(g2))
        assert set(t1) == set(t2)
        for k in t1:
            assert t1[k] == pytest.approx(t2[k], abs=1e-12)
        assert degree_ecdf(g) == degree_ecdf(g2)
        assert clustering(g).global_cc == pytest.approx(
            clustering(g2).global_cc, abs=1e-12
        )


class TestReciprocity:
    def test_mutual(self):
        assert reciprocity(DirectedGraph.from_pairs([("a", "b"), ("b", "a")])) == 1.0

    def test_one_way(self):
        assert reciprocity(DirectedGraph.from_pairs([("a", "b")])) == 0.0

    def test_empty_edge_set(self):
        g = DirectedGraph.from_indexed(["a"], np.zeros(0, int), np.zeros(0, int))
        with pytest.raises(DomainError):
            reciprocity(g)

    def test_matches_scan_oracle(self):
        for seed in range(20):
            g = gen_rn_forest({3: 3, 5: 2}, seed=seed)
            eu, ev = g.edge_arrays()
            edges = list(zip(eu.tolist(), ev.tolist()))
            assert reciprocity(g) == pytest.approx(reciprocity_scan(edges), abs=1e-12)


class TestClassifyBehavior:
    def build(self, spec):
        """spec: list of (out_degree, in_degree) realised via a hub gadget."""
        pairs = []
        for i, (out_d, in_d) in enumerate(spec):
            for j in range(out_d):
                pairs.append((f"n{i}", f"sink{i}_{j}"))
            for j in range(in_d):
                pairs.append((f"src{i}_{j}", f"n{i}"))
        return DirectedGraph.from_pairs(pairs)

    def test_pure_receiver(self):
        g = self.build([(0, 5)])
        s = classify_behavior(g)
        assert s.classes[g.index_of("n0")] is BehaviorClass.HIGHLY_RECOMMENDED

    def test_balanced(self):
        g = self.build([(5, 5)])
        s = classify_behavior(g)
        assert s.classes[g.index_of("n0")] is BehaviorClass.USUAL

    def test_pure_sender(self):
        g = self.build([(10, 0)])
        s = classify_behavior(g)
        assert s.classes[g.index_of("n0")] is BehaviorClass.DISSEMINATOR

    def test_fractions_sum_to_one(self):
        g = gen_rn_forest({4: 10}, seed=3)
        s = classify_behavior(g)
        assert sum(s.fractions.values()) == pytest.approx(1.0)
        assert sum(s.counts.values()) == s.active_count

    def test_threshold_order_enforced(self):
        g = self.build([(1, 1)])
        with pytest.raises(ConfigError):
            classify_behavior(g, thresholds=(0.5, 0.4, 0.9))

    def test_raw_mode(self):
        g = self.build([(4, 1)])
        s = classify_behavior(g, thresholds=(0.5, 2.0, 6.0), ratio_mode="raw")
        assert s.ratios[g.index_of("n0")] == pytest.approx(4.0)
        assert s.classes[g.index_of("n0")] is BehaviorClass.GOOD_RECOMMENDER


class TestSubnetworkTable:
    def test_uniform_size_two(self):
        g = UndirectedGraph.from_pairs([(f"a{i}", f"b{i}") for i in range(10)])
        rows = subnetwork_table(components(g))
        assert len(rows) == 1
        row = rows[0]
        assert (row.size, row.networks_pct, row.vertices_pct, row.edges_pct) == (
            2, 100.0, 100.0, 100.0,
        )

    def test_mixed_forest(self):
        pairs = [(f"a{i}", f"b{i}") for i in range(7)]
        for i in range(3):
            pairs += [(f"x{i}", f"y{i}"), (f"y{i}", f"z{i}")]
        g = UndirectedGraph.from_pairs(pairs)
        rows = subnetwork_table(components(g))
        first = rows[0]
        assert first.size == 2
        assert first.networks_pct == pytest.approx(70.0)
        assert first.vertices_pct == pytest.approx(100 * 14 / 23)
        assert first.edges_pct == pytest.approx(100 * 7 / 13)
        assert rows[-1].networks_pct == 100.0


class TestCombinedReport:
    def test_directed_report(self):
        g = gen_rn_forest({3: 4}, seed=1)
        rep = compute_metrics(g, graph_id="forest")
        assert rep.directed and rep.reciprocity is not None
        assert rep.collapsed_edges is not None and rep.collapsed_edges <= rep.edges
        records = metric_records(rep)
        metrics_seen = {r["metric"] for r in records}
        assert {"size", "path", "clustering", "reciprocity",
                "degree_ecdf", "cc_by_degree", "knn_by_degree"} <= metrics_seen
        for r in records:
            assert r["graph_id"] == "forest" and r["mode"] == "exact"
