"""Structural metric suite: degree distributions, clustering, path lengths,
degree correlation, reciprocity, behavior classes, and the sub-network
census.

Path metrics run exactly (all-pairs BFS) on graphs up to a configurable
size and switch to a seeded sampled estimate above it. Everything else is
exact. All functions are pure reads over immutable graphs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, DomainError, ModeError
from .graphs import ComponentDecomposition, DirectedGraph, Graph, UndirectedGraph, to_undirected
from .rng import make_rng

_BATCH = 256  # sources per all-pairs batch; fixed so results never depend on threads


def degree_ecdf(g: Graph, mode: str = "total") -> list[tuple[int, float]]:
    """Empirical CDF of node degrees as (degree, cumulative probability).

    mode selects in/out/total degree for directed graphs; undirected graphs
    only support "total". Points are ascending in degree and end at 1.0.
    """
    if g.directed:
        if mode == "total":
            deg = g.out_degrees() + g.in_degrees()
        elif mode == "out":
            deg = g.out_degrees()
        elif mode == "in":
            deg = g.in_degrees()
        else:
            raise ModeError(f"unknown degree mode {mode!r}")
    else:
        if mode != "total":
            raise ModeError(f"mode {mode!r} not defined for undirected graphs")
        deg = g.degrees()
    if deg.size == 0:
        raise DomainError("empty graph")
    values, counts = np.unique(deg, return_counts=True)
    cum = np.cumsum(counts) / deg.size
    return [(int(k), float(p)) for k, p in zip(values, cum)]


# ---------------------------------------------------------------------------
# Clustering
# ---------------------------------------------------------------------------

@dataclass
class ClusteringStats:
    global_cc: float
    global_cc_min_deg2: float
    local: np.ndarray
    by_degree: list[tuple[int, float]]


def clustering(g: UndirectedGraph) -> ClusteringStats:
    """Local and global clustering coefficients.

    local(u) = 2 * triangles(u) / (deg(u) * (deg(u) - 1)) for deg >= 2 and 0
    otherwise. global_cc averages local values over all nodes (the degree<2
    zeros included); global_cc_min_deg2 averages over deg >= 2 nodes only,
    since both conventions are in circulation.
    """
    n = g.node_count
    if n == 0:
        return ClusteringStats(0.0, 0.0, np.zeros(0), [])
    deg = g.degrees()
    local = np.zeros(n, dtype=np.float64)
    if g.edge_count:
        from scipy.sparse import csr_matrix

        a = csr_matrix(
            (np.ones(g.indices.size, dtype=np.int64), g.indices, g.indptr), shape=(n, n)
        )
        # (A @ A) restricted to existing edges counts closed 2-paths: row sums
        # give 2 * triangles(u)
        closed = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel()
        mask = deg >= 2
        denom = deg[mask].astype(np.float64) * (deg[mask] - 1)
        local[mask] = closed[mask] / denom
    by_degree = _mean_by_degree(deg, local, include_zero=True)
    g2 = deg >= 2
    return ClusteringStats(
        global_cc=float(local.mean()),
        global_cc_min_deg2=float(local[g2].mean()) if g2.any() else 0.0,
        local=local,
        by_degree=by_degree,
    )


def _mean_by_degree(deg, values, include_zero=False) -> list[tuple[int, float]]:
    out = []
    for k in np.unique(deg):
        if k == 0 and not include_zero:
            continue
        sel = deg == k
        out.append((int(k), float(values[sel].mean())))
    return out


def knn_by_degree(g: UndirectedGraph) -> list[tuple[int, float]]:
    """Mean neighbor degree k_nn as a function of node degree k.

    For each occurring degree k >= 1, averages (over degree-k nodes) the mean
    degree of the node's neighbors. Degree-0 nodes have no neighbor mean and
    are excluded.
    """
    n = g.node_count
    deg = g.degrees()
    if n == 0 or g.edge_count == 0:
        return []
    owner = np.repeat(np.arange(n), deg)
    sums = np.bincount(owner, weights=deg[g.indices].astype(np.float64), minlength=n)
    pos = deg > 0
    node_knn = np.zeros(n)
    node_knn[pos] = sums[pos] / deg[pos]
    return _mean_by_degree(deg[pos], node_knn[pos])


def reciprocity(g: DirectedGraph) -> float:
    """Fraction of directed edges whose reverse edge also exists."""
    m = g.edge_count
    if m == 0:
        raise DomainError("reciprocity undefined on an empty edge set")
    n = g.node_count
    eu, ev = g.edge_arrays()
    codes = eu * n + ev
    mutual = int(np.isin(codes, ev * n + eu).sum())
    return mutual / m


# ---------------------------------------------------------------------------
# Path metrics
# ---------------------------------------------------------------------------

@dataclass
class PathMetrics:
    diameter: int
    avg_path_length: float
    reachable_pairs: int
    mode: str  # "exact" | "sampled"
    sources: int | None = None
    seed: int | None = None

    @property
    def estimate(self) -> bool:
        return self.mode == "sampled"


def _distance_stats(csr, directed: bool, source_idx: np.ndarray, threads: int):
    """Accumulate (sum, finite pair count, max) of BFS distances from the
    given sources, excluding self pairs. Batch partition is fixed so the
    result is independent of the thread count."""
    from scipy.sparse.csgraph import dijkstra

    batches = [source_idx[i:i + _BATCH] for i in range(0, source_idx.size, _BATCH)]

    def work(batch):
        d = dijkstra(csr, directed=directed, indices=batch, unweighted=True)
        finite = np.isfinite(d)
        return d[finite].sum(), int(finite.sum()) - batch.size, float(d[finite].max(initial=0.0))

    if threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, batches))
    else:
        parts = [work(b) for b in batches]
    total = 0.0
    pairs = 0
    best = 0.0
    for s, p, m in parts:
        total += s
        pairs += p
        best = max(best, m)
    return total, pairs, best


def path_metrics(
    g: Graph,
    mode: str = "exact",
    sources: int = 1000,
    seed: int = 0,
    exact_limit: int = 100_000,
    threads: int = 1,
) -> PathMetrics:
    """Diameter (longest shortest path) and average path length.

    The average runs over ordered reachable pairs (u != v); unreachable
    pairs are excluded. Directed graphs use directed distances. Sampled mode
    BFSes from `sources` seeded uniform sources, reports the mean over the
    sampled rows, and takes the diameter as the largest distance seen after
    a double-sweep pass; the result is flagged as an estimate.
    """
    n = g.node_count
    if n == 0:
        raise DomainError("path metrics undefined on an empty graph")
    csr = g.to_csr()
    if mode == "exact":
        if n > exact_limit:
            raise ConfigError(
                f"graph of {n} nodes exceeds the exact-mode limit {exact_limit}; "
                "use sampled mode"
            )
        total, pairs, best = _distance_stats(csr, g.directed, np.arange(n), threads)
        if pairs == 0:
            raise DomainError("average path length undefined: no reachable pairs")
        return PathMetrics(int(best), total / pairs, pairs, "exact")
    if mode != "sampled":
        raise ConfigError(f"unknown path mode {mode!r}")

    from scipy.sparse.csgraph import dijkstra

    rng = make_rng(seed)
    k = min(sources, n)
    src = np.sort(rng.choice(n, size=k, replace=False))
    total, pairs, best = _distance_stats(csr, g.directed, src, threads)
    if pairs == 0:
        raise DomainError("average path length undefined: no reachable pairs")
    # double sweep from the eccentric end of the first source's BFS tree
    d0 = dijkstra(csr, directed=g.directed, indices=src[0], unweighted=True)
    finite = np.isfinite(d0)
    if finite.sum() > 1:
        far = int(np.flatnonzero(finite)[np.argmax(d0[finite])])
        d1 = dijkstra(csr, directed=g.directed, indices=far, unweighted=True)
        best = max(best, float(d1[np.isfinite(d1)].max(initial=0.0)))
    return PathMetrics(int(best), total / pairs, pairs, "sampled", sources=k, seed=seed)


# ---------------------------------------------------------------------------
# Behavior classes
# ---------------------------------------------------------------------------

class BehaviorClass(Enum):
    HIGHLY_RECOMMENDED = "highly_recommended"
    USUAL = "usual"
    GOOD_RECOMMENDER = "good_recommender"
    DISSEMINATOR = "disseminator"


@dataclass
class BehaviorSummary:
    classes: list[BehaviorClass | None]  # per node; None = isolated
    ratios: np.ndarray  # per node; nan = isolated
    counts: dict[BehaviorClass, int]
    fractions: dict[BehaviorClass, float]
    active_count: int
    isolated_count: int


def classify_behavior(
    g: DirectedGraph,
    thresholds: tuple[float, float, float] = (0.1, 0.75, 0.9),
    ratio_mode: str = "normalized",
) -> BehaviorSummary:
    """Split nodes into four sender/receiver behavior classes.

    The default ratio is r = outdeg / (outdeg + indeg) in [0, 1]: pure
    receivers sit at 0, pure senders at 1, and the thresholds (t1, t2, t3)
    cut the axis into highly-recommended (r <= t1), usual (t1 < r <= t2),
    good recommender (t2 < r <= t3), and disseminator (r > t3). ratio_mode
    "raw" uses outdeg / indeg instead (infinite for pure senders); supply
    thresholds on that scale when using it. Nodes with no edges are counted
    separately and not classified.
    """
    t1, t2, t3 = thresholds
    if not (0 < t1 < t2 < t3) or (ratio_mode == "normalized" and t3 >= 1):
        raise ConfigError(f"thresholds must be increasing and in range: {thresholds}")
    if ratio_mode not in ("normalized", "raw"):
        raise ConfigError(f"unknown ratio mode {ratio_mode!r}")
    out_d = g.out_degrees().astype(np.float64)
    in_d = g.in_degrees().astype(np.float64)
    active = (out_d + in_d) > 0
    ratios = np.full(g.node_count, np.nan)
    if ratio_mode == "normalized":
        ratios[active] = out_d[active] / (out_d[active] + in_d[active])
    else:
        with np.errstate(divide="ignore"):
            ratios[active] = out_d[active] / in_d[active]

    classes: list[BehaviorClass | None] = []
    counts = {c: 0 for c in BehaviorClass}
    for i in range(g.node_count):
        if not active[i]:
            classes.append(None)
            continue
        r = ratios[i]
        if r <= t1:
            c = BehaviorClass.HIGHLY_RECOMMENDED
        elif r <= t2:
            c = BehaviorClass.USUAL
        elif r <= t3:
            c = BehaviorClass.GOOD_RECOMMENDER
        else:
            c = BehaviorClass.DISSEMINATOR
        classes.append(c)
        counts[c] += 1
    n_active = int(active.sum())
    fractions = {c: (counts[c] / n_active if n_active else 0.0) for c in BehaviorClass}
    return BehaviorSummary(
        classes=classes,
        ratios=ratios,
        counts=counts,
        fractions=fractions,
        active_count=n_active,
        isolated_count=g.node_count - n_active,
    )


# ---------------------------------------------------------------------------
# Sub-network census
# ---------------------------------------------------------------------------

@dataclass
class SubnetworkRow:
    size: int
    networks_pct: float
    vertices_pct: float
    edges_pct: float


def subnetwork_table(dec: ComponentDecomposition) -> list[SubnetworkRow]:
    """Cumulative share of components, vertices, and edges by component size.

    One row per occurring component size s, covering all components with at
    most s vertices; percentages are 0..100.
    """
    if dec.count == 0:
        raise DomainError("empty decomposition")
    v = dec.vertex_counts
    e = dec.edge_counts
    total_c, total_v, total_e = dec.count, int(v.sum()), int(e.sum())
    rows = []
    for s in np.unique(v):
        sel = v <= s
        rows.append(
            SubnetworkRow(
                size=int(s),
                networks_pct=100.0 * int(sel.sum()) / total_c,
                vertices_pct=100.0 * int(v[sel].sum()) / total_v,
                edges_pct=(100.0 * int(e[sel].sum()) / total_e) if total_e else 100.0,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Combined report
# ---------------------------------------------------------------------------

@dataclass
class MetricsReport:
    graph_id: str
    directed: bool
    nodes: int
    edges: int
    collapsed_edges: int | None
    diameter: int
    avg_path_length: float
    reachable_pairs: int
    global_cc: float
    global_cc_min_deg2: float
    reciprocity: float | None
    degree_ecdf: list[tuple[int, float]]
    cc_by_degree: list[tuple[int, float]]
    knn_by_degree: list[tuple[int, float]]
    mode: str
    sources: int | None
    seed: int | None


def compute_metrics(
    g: Graph,
    graph_id: str = "graph",
    path_mode: str = "exact",
    sources: int = 1000,
    seed: int = 0,
    exact_limit: int = 100_000,
    threads: int = 1,
) -> MetricsReport:
    """Run the full metric suite on one graph.

    Clustering and degree correlation are defined on undirected structure;
    directed graphs are collapsed for those two metrics (and report both the
    directed and collapsed edge counts), while path metrics use directed
    distances and reciprocity is directed-only.
    """
    und = to_undirected(g) if g.directed else g
    pm = path_metrics(g, mode=path_mode, sources=sources, seed=seed,
                      exact_limit=exact_limit, threads=threads)
    cstats = clustering(und)
    return MetricsReport(
        graph_id=graph_id,
        directed=g.directed,
        nodes=g.node_count,
        edges=g.edge_count,
        collapsed_edges=und.edge_count if g.directed else None,
        diameter=pm.diameter,
        avg_path_length=pm.avg_path_length,
        reachable_pairs=pm.reachable_pairs,
        global_cc=cstats.global_cc,
        global_cc_min_deg2=cstats.global_cc_min_deg2,
        reciprocity=reciprocity(g) if g.directed and g.edge_count else None,
        degree_ecdf=degree_ecdf(g, "total"),
        cc_by_degree=cstats.by_degree,
        knn_by_degree=knn_by_degree(und),
        mode=pm.mode,
        sources=pm.sources,
        seed=pm.seed,
    )


def metric_records(report: MetricsReport) -> list[dict]:
    """Flatten a MetricsReport into one NDJSON-able record per metric family."""
    base = {"graph_id": report.graph_id, "mode": report.mode}

    def rec(metric, payload):
        return {**base, "metric": metric, "payload": payload}

    size_payload = {"nodes": report.nodes, "edges": report.edges, "directed": report.directed}
    if report.collapsed_edges is not None:
        size_payload["collapsed_edges"] = report.collapsed_edges
    records = [
        rec("size", size_payload),
        rec("path", {
            "diameter": report.diameter,
            "avg_path_length": report.avg_path_length,
            "reachable_pairs": report.reachable_pairs,
            "sources": report.sources,
            "seed": report.seed,
        }),
        rec("clustering", {
            "global_cc": report.global_cc,
            "global_cc_min_degree_2": report.global_cc_min_deg2,
        }),
        rec("degree_ecdf", {"points": [[k, p] for k, p in report.degree_ecdf]}),
        rec("cc_by_degree", {"points": [[k, c] for k, c in report.cc_by_degree]}),
        rec("knn_by_degree", {"points": [[k, v] for k, v in report.knn_by_degree]}),
    ]
    if report.reciprocity is not None:
        records.insert(3, rec("reciprocity", {"value": report.reciprocity}))
    return records
