"""Transition-network extraction and weighted extension of a sparse
recommendation network through a social graph.

Pipeline: BFS from every seeder over the social graph yields pairwise
distances plus one canonical shortest path per reachable seeder pair; the
union of those paths is the transition network (TN). The extended
recommendation network (ERN) keeps the recommendation network's vertex set,
collapses its directed edges to undirected origin-0 edges, and adds one
edge per seeder pair whose social distance d satisfies 1 <= d <= K, labeled
with origin weight d and hop cost d. Shortest paths in the ERN sum hop
costs, so a weight-2 edge counts as two hops.

Canonical path choice (several shortest paths usually exist): the path is
read off the BFS tree rooted at the lexicographically smaller seeder token,
with each tree parent being the smallest-index neighbor in the previous
BFS level. This is deterministic for a fixed input file.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .errors import (
    ConfigError,
    ConsistencyError,
    DomainError,
    FitError,
    ParseError,
    UnknownNodeError,
)
from .graphs import (
    DirectedGraph,
    Graph,
    UndirectedGraph,
    components,
    resolve_seeds,
    to_undirected,
)
from .metrics import PathMetrics, clustering
from .powerlaw import fit_mle
from .rng import make_rng

_BATCH = 256


# ---------------------------------------------------------------------------
# Seeder distance matrix
# ---------------------------------------------------------------------------

def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


@dataclass
class SeederDistanceMatrix:
    """Pairwise seeder distances in the social graph plus one canonical
    shortest path per reachable pair.

    Keys are token pairs ordered lexicographically; the stored path runs
    from the smaller token to the larger and its intermediate entries are
    social-graph tokens.
    """

    seeders: list[str]
    dist: dict[tuple[str, str], int] = field(default_factory=dict)
    paths: dict[tuple[str, str], list[str]] = field(default_factory=dict)
    unreachable: list[tuple[str, str]] = field(default_factory=list)

    def distance(self, a: str, b: str) -> int | None:
        if a == b:
            return 0
        return self.dist.get(_pair_key(a, b))

    def path(self, a: str, b: str) -> list[str] | None:
        if a == b:
            return [a]
        stored = self.paths.get(_pair_key(a, b))
        if stored is None:
            return None
        return stored if stored[0] == a else stored[::-1]

    def pairs(self):
        return self.dist.items()

    def relabel(self, mapping: dict[str, str]) -> "SeederDistanceMatrix":
        """Rename seeders (and any path entry that is a seeder) through the
        given token mapping; used to carry social-graph results back onto
        recommendation-network tokens."""
        new_seeders = [mapping.get(s, s) for s in self.seeders]
        if len(set(new_seeders)) != len(new_seeders):
            raise ConfigError("mapping collapses two seeders onto one token")
        dist: dict[tuple[str, str], int] = {}
        paths: dict[tuple[str, str], list[str]] = {}
        for (a, b), d in self.dist.items():
            na, nb = mapping.get(a, a), mapping.get(b, b)
            key = _pair_key(na, nb)
            dist[key] = d
            p = [mapping.get(t, t) for t in self.paths[(a, b)]]
            paths[key] = p if p[0] == key[0] else p[::-1]
        unreachable = [_pair_key(mapping.get(a, a), mapping.get(b, b)) for a, b in self.unreachable]
        return SeederDistanceMatrix(new_seeders, dist, paths, sorted(unreachable))


def save_matrix(matrix: SeederDistanceMatrix, stream: IO[str]) -> None:
    stream.write(json.dumps(
        {"kind": "seeder_distance_matrix", "seeders": matrix.seeders},
        sort_keys=True, separators=(",", ":")) + "\n")
    for (a, b) in sorted(matrix.dist):
        rec = {"a": a, "b": b, "dist": matrix.dist[(a, b)], "path": matrix.paths[(a, b)]}
        stream.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
    for (a, b) in matrix.unreachable:
        stream.write(json.dumps({"a": a, "b": b, "dist": None},
                                sort_keys=True, separators=(",", ":")) + "\n")


def load_matrix(stream: IO[str]) -> SeederDistanceMatrix:
    header = None
    matrix = None
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad matrix record: {exc}", lineno) from None
        if header is None:
            if rec.get("kind") != "seeder_distance_matrix" or "seeders" not in rec:
                raise ParseError("missing matrix header", lineno)
            header = rec
            matrix = SeederDistanceMatrix(seeders=list(rec["seeders"]))
            continue
        key = _pair_key(rec["a"], rec["b"])
        if rec["dist"] is None:
            matrix.unreachable.append(key)
        else:
            matrix.dist[key] = int(rec["dist"])
            path = list(rec["path"])
            matrix.paths[key] = path if path[0] == key[0] else path[::-1]
    if matrix is None:
        raise ParseError("empty matrix file")
    return matrix


# ---------------------------------------------------------------------------
# Transition network
# ---------------------------------------------------------------------------

def _bfs_tree(indptr: np.ndarray, indices: np.ndarray, root: int, n: int):
    """Level BFS returning (dist, parent); parent of a newly reached node is
    its smallest-index neighbor in the previous level."""
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    dist[root] = 0
    frontier = np.array([root], dtype=np.int64)
    d = 0
    while frontier.size:
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        csum = np.concatenate(([0], np.cumsum(counts)))
        take = np.arange(total, dtype=np.int64) + np.repeat(starts - csum[:-1], counts)
        v = indices[take]
        u = np.repeat(frontier, counts)
        fresh = dist[v] < 0
        v, u = v[fresh], u[fresh]
        if v.size == 0:
            break
        order = np.lexsort((u, v))
        v, u = v[order], u[order]
        first = np.ones(v.size, dtype=bool)
        first[1:] = v[1:] != v[:-1]
        new_v, new_p = v[first], u[first]
        d += 1
        dist[new_v] = d
        parent[new_v] = new_p
        frontier = new_v
    return dist, parent


def _climb(parent: np.ndarray, node: int, root: int) -> list[int]:
    path = [node]
    while path[-1] != root:
        path.append(int(parent[path[-1]]))
    path.reverse()
    return path


def extract_tn(
    osn: UndirectedGraph,
    seeders: Sequence[str],
    induced_edges: bool = False,
    threads: int = 1,
) -> tuple[UndirectedGraph, SeederDistanceMatrix]:
    """Extract the transition network and the seeder distance matrix.

    The TN contains every seeder plus all nodes and edges on the canonical
    shortest paths between reachable seeder pairs; unreachable pairs are
    recorded on the matrix. With induced_edges=True the TN instead keeps
    every social-graph edge between kept nodes (the canonical node set does
    not change).
    """
    idx = resolve_seeds(osn, seeders)
    matrix = SeederDistanceMatrix(seeders=list(seeders))
    token_of = osn.tokens
    by_token = sorted(zip(seeders, idx))
    n = osn.node_count
    kept_nodes: set[int] = set(idx)
    path_edges: set[tuple[int, int]] = set()

    def process_root(pos: int):
        root_token, root_idx = by_token[pos]
        later = by_token[pos + 1:]
        dist, parent = _bfs_tree(osn.indptr, osn.indices, root_idx, n)
        found = []
        for other_token, other_idx in later:
            d = int(dist[other_idx])
            if d < 0:
                found.append((other_token, None, None))
            else:
                found.append((other_token, d, _climb(parent, other_idx, root_idx)))
        return root_token, found

    positions = range(len(by_token) - 1)
    if threads > 1 and len(by_token) > 2:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(process_root, positions))
    else:
        results = [process_root(p) for p in positions]

    for root_token, found in results:
        for other_token, d, path in found:
            key = (root_token, other_token)
            if d is None:
                matrix.unreachable.append(key)
                continue
            matrix.dist[key] = d
            matrix.paths[key] = [token_of[i] for i in path]
            kept_nodes.update(path)
            for a, b in zip(path, path[1:]):
                path_edges.add((a, b) if a < b else (b, a))

    kept_sorted = sorted(kept_nodes)
    remap = {old: new for new, old in enumerate(kept_sorted)}
    tokens = [token_of[i] for i in kept_sorted]
    if induced_edges:
        eu_all, ev_all = osn.edge_arrays()
        keep = np.isin(eu_all, kept_sorted) & np.isin(ev_all, kept_sorted)
        eu = np.array([remap[i] for i in eu_all[keep].tolist()], dtype=np.int64)
        ev = np.array([remap[i] for i in ev_all[keep].tolist()], dtype=np.int64)
    else:
        eu = np.array([remap[a] for a, _ in sorted(path_edges)], dtype=np.int64)
        ev = np.array([remap[b] for _, b in sorted(path_edges)], dtype=np.int64)
    tn = UndirectedGraph.from_indexed(tokens, eu, ev)
    return tn, matrix


# ---------------------------------------------------------------------------
# Weighted extended network
# ---------------------------------------------------------------------------

class WeightedGraph:
    """Undirected graph whose edges carry an origin weight (0 = collapsed
    recommendation edge, w >= 1 = seeder pair at social distance w) and an
    integer hop cost used by shortest-path arithmetic."""

    def __init__(self, tokens, eu, ev, origin_weight, hop_cost,
                 dual_origin: list[tuple[str, str, int]] | None = None):
        n = len(tokens)
        eu = np.asarray(eu, dtype=np.int64)
        ev = np.asarray(ev, dtype=np.int64)
        lo, hi = np.minimum(eu, ev), np.maximum(eu, ev)
        codes = lo * n + hi
        order = np.argsort(codes, kind="stable")
        if codes.size and np.unique(codes).size != codes.size:
            raise ConsistencyError("duplicate edge in weighted graph")
        self.tokens = list(tokens)
        self._index = {t: i for i, t in enumerate(self.tokens)}
        self.eu = lo[order]
        self.ev = hi[order]
        self.origin_weight = np.asarray(origin_weight, dtype=np.int64)[order]
        self.hop_cost = np.asarray(hop_cost, dtype=np.int64)[order]
        # seeder pairs that already had a recommendation edge; the cheaper
        # origin-0 edge wins and the social origin is kept for audits
        self.dual_origin = dual_origin or []

    directed = False

    @property
    def node_count(self) -> int:
        return len(self.tokens)

    @property
    def edge_count(self) -> int:
        return int(self.eu.size)

    def index_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise UnknownNodeError(token) from None

    def weight_histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.origin_weight, return_counts=True)
        return {int(w): int(c) for w, c in zip(values, counts)}

    def undirected(self) -> UndirectedGraph:
        return UndirectedGraph.from_indexed(list(self.tokens), self.eu, self.ev)

    def induced(self, node_indices) -> "WeightedGraph":
        node_indices = np.asarray(node_indices, dtype=np.int64)
        old_to_new = np.full(self.node_count, -1, dtype=np.int64)
        old_to_new[node_indices] = np.arange(node_indices.size)
        keep = (old_to_new[self.eu] >= 0) & (old_to_new[self.ev] >= 0)
        tokens = [self.tokens[int(i)] for i in node_indices]
        return WeightedGraph(
            tokens,
            old_to_new[self.eu[keep]],
            old_to_new[self.ev[keep]],
            self.origin_weight[keep],
            self.hop_cost[keep],
        )

    def __repr__(self) -> str:
        return f"WeightedGraph(nodes={self.node_count}, edges={self.edge_count})"


def write_weighted_edges(wg: WeightedGraph, stream: IO[str]) -> None:
    """Edge list with origin weight and hop cost as third and fourth fields."""
    toks = wg.tokens
    for u, v, w, h in zip(wg.eu.tolist(), wg.ev.tolist(),
                          wg.origin_weight.tolist(), wg.hop_cost.tolist()):
        stream.write(f"{toks[u]}\t{toks[v]}\t{w}\t{h}\n")


def read_weighted_edges(stream: IO[str]) -> WeightedGraph:
    tokens: list[str] = []
    index: dict[str, int] = {}
    eu, ev, ow, hc = [], [], [], []
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.replace(",", " ").split()
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", lineno)
        try:
            w, h = int(fields[2]), int(fields[3])
        except ValueError:
            raise ParseError(f"non-integer weight fields in {line!r}", lineno) from None
        for t in fields[:2]:
            if t not in index:
                index[t] = len(tokens)
                tokens.append(t)
        eu.append(index[fields[0]])
        ev.append(index[fields[1]])
        ow.append(w)
        hc.append(h)
    if not eu:
        raise ParseError("weighted edge list is empty")
    return WeightedGraph(tokens, eu, ev, ow, hc)


def build_ern(
    rn: DirectedGraph,
    matrix: SeederDistanceMatrix,
    max_weight: int,
    rn_edge_cost: int = 1,
) -> WeightedGraph:
    """Extend the recommendation network with seeder-to-seeder edges.

    The vertex set is exactly the recommendation network's. Its directed
    edges collapse to origin-0 edges costing rn_edge_cost hops (1 treats a
    direct recommendation as one social hop; 0 makes them free, as in
    labelling them weight zero). Every seeder pair at social distance d with
    1 <= d <= max_weight and no collapsed edge of its own gains an edge with
    origin weight and hop cost d; pairs that already have a recommendation
    edge keep it (never costlier) and are recorded in dual_origin.
    """
    if max_weight < 0:
        raise ConfigError(f"max_weight must be >= 0, got {max_weight}")
    if rn_edge_cost not in (0, 1):
        raise ConfigError(f"rn_edge_cost must be 0 or 1, got {rn_edge_cost}")
    n = rn.node_count
    deu, dev = rn.edge_arrays()
    lo, hi = np.minimum(deu, dev), np.maximum(deu, dev)
    rn_codes = np.unique(lo * n + hi)
    eu = list((rn_codes // n).tolist())
    ev = list((rn_codes % n).tolist())
    origin = [0] * len(eu)
    hop = [rn_edge_cost] * len(eu)
    dual: list[tuple[str, str, int]] = []
    for (a, b), d in sorted(matrix.pairs()):
        if not 1 <= d <= max_weight:
            continue
        ia, ib = rn.index_of(a), rn.index_of(b)
        code = (ia * n + ib) if ia < ib else (ib * n + ia)
        k = np.searchsorted(rn_codes, code)
        if k < rn_codes.size and rn_codes[k] == code:
            dual.append((a, b, d))
            continue
        eu.append(min(ia, ib))
        ev.append(max(ia, ib))
        origin.append(d)
        hop.append(d)
    return WeightedGraph(list(rn.tokens), eu, ev, origin, hop, dual_origin=dual)


# ---------------------------------------------------------------------------
# Weighted shortest paths
# ---------------------------------------------------------------------------

def _contract_zero_cost(wg: WeightedGraph):
    """Collapse hop-cost-0 edges into clusters; returns (cluster_of, sizes,
    cluster CSR with minimum positive inter-cluster costs)."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    n = wg.node_count
    zero = wg.hop_cost == 0
    if zero.any():
        zmat = csr_matrix(
            (np.ones(int(zero.sum()), dtype=np.int8), (wg.eu[zero], wg.ev[zero])),
            shape=(n, n),
        )
        n_clusters, cluster_of = connected_components(zmat, directed=False)
    else:
        n_clusters, cluster_of = n, np.arange(n, dtype=np.int64)
    cluster_of = cluster_of.astype(np.int64)
    sizes = np.bincount(cluster_of, minlength=n_clusters)

    pos = ~zero
    cu = cluster_of[wg.eu[pos]]
    cv = cluster_of[wg.ev[pos]]
    cost = wg.hop_cost[pos].astype(np.float64)
    keep = cu != cv
    cu, cv, cost = cu[keep], cv[keep], cost[keep]
    lo, hi = np.minimum(cu, cv), np.maximum(cu, cv)
    codes = lo * n_clusters + hi
    order = np.argsort(codes, kind="stable")
    codes, lo, hi, cost = codes[order], lo[order], hi[order], cost[order]
    if codes.size:
        first = np.ones(codes.size, dtype=bool)
        first[1:] = codes[1:] != codes[:-1]
        group = np.cumsum(first) - 1
        min_cost = np.full(int(group[-1]) + 1, np.inf)
        np.minimum.at(min_cost, group, cost)
        lo, hi = lo[first], hi[first]
    else:
        min_cost = cost
    cmat = csr_matrix((min_cost, (lo, hi)), shape=(n_clusters, n_clusters))
    return cluster_of, sizes, cmat


def weighted_path_metrics(
    wg: WeightedGraph,
    mode: str = "exact",
    sources: int = 1000,
    seed: int = 0,
    exact_limit: int = 100_000,
    threads: int = 1,
) -> PathMetrics:
    """Diameter and average path length under summed hop costs.

    Zero-cost edges are supported by contracting their connected clusters
    first and running Dijkstra on the cluster graph. Averages run over
    ordered reachable pairs (u != v), same convention as the unweighted
    metric.
    """
    from scipy.sparse.csgraph import dijkstra

    n = wg.node_count
    if n == 0:
        raise DomainError("path metrics undefined on an empty graph")
    cluster_of, sizes, cmat = _contract_zero_cost(wg)
    nc = sizes.size
    fsizes = sizes.astype(np.float64)

    def stats_for(cluster_sources: np.ndarray):
        total = 0.0
        weighted_pairs = 0.0
        best = 0.0
        for i in range(0, cluster_sources.size, _BATCH):
            batch = cluster_sources[i:i + _BATCH]
            rows = dijkstra(cmat, directed=False, indices=batch)
            finite = np.isfinite(rows)
            w = fsizes[batch][:, None] * fsizes[None, :]
            total += float((rows * w)[finite].sum())
            weighted_pairs += float(w[finite].sum())
            if finite.any():
                best = max(best, float(rows[finite].max()))
        return total, weighted_pairs, best

    if mode == "exact":
        if n > exact_limit:
            raise ConfigError(
                f"graph of {n} nodes exceeds the exact-mode limit {exact_limit}; "
                "use sampled mode"
            )
        total, weighted_pairs, best = stats_for(np.arange(nc))
        pairs = int(round(weighted_pairs)) - n  # drop self pairs
        if pairs <= 0:
            raise DomainError("average path length undefined: no reachable pairs")
        return PathMetrics(int(best), total / pairs, pairs, "exact")
    if mode != "sampled":
        raise ConfigError(f"unknown path mode {mode!r}")

    rng = make_rng(seed)
    k = min(sources, n)
    src_nodes = np.sort(rng.choice(n, size=k, replace=False))
    src_clusters = cluster_of[src_nodes]
    uniq = np.unique(src_clusters)
    rows = dijkstra(cmat, directed=False, indices=uniq)
    row_of = {int(c): rows[i] for i, c in enumerate(uniq)}
    total = 0.0
    pairs = 0
    best = 0.0
    for c in src_clusters.tolist():
        row = row_of[int(c)][cluster_of]
        finite = np.isfinite(row)
        total += float(row[finite].sum())
        pairs += int(finite.sum()) - 1
        best = max(best, float(row[finite].max()))
    if pairs <= 0:
        raise DomainError("average path length undefined: no reachable pairs")
    # double sweep for a better diameter floor
    far_cluster = int(np.argmax(np.where(np.isfinite(rows[0]), rows[0], -1.0)))
    sweep = dijkstra(cmat, directed=False, indices=far_cluster)
    finite = np.isfinite(sweep)
    if finite.any():
        best = max(best, float(sweep[finite].max()))
    return PathMetrics(int(best), total / pairs, pairs, "sampled", sources=k, seed=seed)


# ---------------------------------------------------------------------------
# ERN series
# ---------------------------------------------------------------------------

@dataclass
class ErnRow:
    k: int
    total_vertices: int
    total_edges: int
    component_count: int
    vertices: int  # largest component
    edges: int
    weight_counts: dict[int, int]
    diameter: int
    avg_path_length: float
    global_cc: float
    full_global_cc: float
    alpha: float | None


@dataclass
class ErnSeries:
    rows: list[ErnRow]
    relative: dict[str, list[float]]  # metric -> percent-of-max per row


def ern_series(
    rn: DirectedGraph,
    matrix: SeederDistanceMatrix,
    k_max: int,
    rn_edge_cost: int = 1,
    path_mode: str = "exact",
    sources: int = 1000,
    seed: int = 0,
    exact_limit: int = 100_000,
    threads: int = 1,
) -> ErnSeries:
    """Build the K = 0..k_max extension ladder and report, per K, the
    largest component's structure: size, per-origin edge counts, weighted
    diameter and average path length, clustering, and the fitted degree
    exponent (x_min = 1). Row K = 0 is the collapsed base network.
    """
    if k_max < 1:
        raise ConfigError(f"k_max must be >= 1, got {k_max}")
    rows: list[ErnRow] = []
    for k in range(0, k_max + 1):
        wg = build_ern(rn, matrix, k, rn_edge_cost)
        und = wg.undirected()
        dec = components(und)
        comp = wg.induced(dec.giant_members())
        comp_und = comp.undirected()
        pm = weighted_path_metrics(
            comp, mode=path_mode, sources=sources, seed=seed,
            exact_limit=exact_limit, threads=threads,
        )
        try:
            alpha = fit_mle(comp_und.degrees(), x_min=1).alpha
        except FitError:
            alpha = None
        counts = comp.weight_histogram()
        rows.append(ErnRow(
            k=k,
            total_vertices=wg.node_count,
            total_edges=wg.edge_count,
            component_count=dec.count,
            vertices=comp.node_count,
            edges=comp.edge_count,
            weight_counts={w: counts.get(w, 0) for w in range(0, k + 1)},
            diameter=pm.diameter,
            avg_path_length=pm.avg_path_length,
            global_cc=clustering(comp_und).global_cc,
            full_global_cc=clustering(und).global_cc,
            alpha=alpha,
        ))
    relative: dict[str, list[float]] = {}
    for name in ("vertices", "edges", "diameter", "avg_path_length", "global_cc"):
        values = [float(getattr(r, name)) for r in rows]
        peak = max(values)
        relative[name] = [100.0 * v / peak if peak > 0 else 0.0 for v in values]
    return ErnSeries(rows=rows, relative=relative)


def expand_ern(ern: WeightedGraph, matrix: SeederDistanceMatrix, k: int) -> UndirectedGraph:
    """Replace every origin-weight w edge (2 <= w <= k) by its canonical
    path: the intermediate social-graph nodes join the vertex set and each
    path step becomes a unit edge. Origin 0 and 1 edges stay as unit edges;
    edges with origin weight above k are dropped. The result is unweighted.
    """
    if k < 0:
        raise ConfigError(f"k must be >= 0, got {k}")
    tokens = list(ern.tokens)
    index = {t: i for i, t in enumerate(tokens)}

    def intern(t: str) -> int:
        if t not in index:
            index[t] = len(tokens)
            tokens.append(t)
        return index[t]

    eu: list[int] = []
    ev: list[int] = []
    for u, v, w in zip(ern.eu.tolist(), ern.ev.tolist(), ern.origin_weight.tolist()):
        if w > k:
            continue
        if w <= 1:
            eu.append(u)
            ev.append(v)
            continue
        a, b = ern.tokens[u], ern.tokens[v]
        path = matrix.path(a, b)
        if path is None or len(path) != w + 1:
            raise ConsistencyError(
                f"canonical path for ({a}, {b}) missing or inconsistent with weight {w}"
            )
        steps = [intern(t) for t in path]
        for x, y in zip(steps, steps[1:]):
            eu.append(x)
            ev.append(y)
    return UndirectedGraph.from_indexed(
        tokens, np.asarray(eu, dtype=np.int64), np.asarray(ev, dtype=np.int64)
    )


# ---------------------------------------------------------------------------
# Seeder-restricted average path length
# ---------------------------------------------------------------------------

@dataclass
class SeederPathStats:
    mean: float
    reachable_pairs: int
    unreachable_pairs: int


def seeder_apl(g: Graph | WeightedGraph, seeders: Sequence[str]) -> SeederPathStats:
    """Mean shortest-path length over unordered seeder pairs.

    Hop costs apply on weighted graphs; directed graphs are collapsed to
    undirected first (social reachability, not recommendation direction).
    """
    if len(seeders) < 2:
        raise DomainError("need at least 2 seeders")
    from scipy.sparse.csgraph import dijkstra

    if isinstance(g, WeightedGraph):
        idx = [g.index_of(t) for t in seeders]
        cluster_of, _, cmat = _contract_zero_cost(g)
        cl = cluster_of[np.asarray(idx)]
        uniq = np.unique(cl)
        rows = dijkstra(cmat, directed=False, indices=uniq)
        pos = {int(c): i for i, c in enumerate(uniq)}
        dmat = np.array([[rows[pos[int(ca)]][cb] for cb in cl] for ca in cl])
    else:
        base = to_undirected(g) if g.directed else g
        idx = resolve_seeds(base, seeders)
        rows = dijkstra(base.to_csr(), directed=False, indices=np.asarray(idx), unweighted=True)
        dmat = rows[:, np.asarray(idx)]

    total = 0.0
    reachable = 0
    unreachable = 0
    m = len(seeders)
    for i in range(m):
        for j in range(i + 1, m):
            d = dmat[i, j]
            if np.isfinite(d):
                total += float(d)
                reachable += 1
            else:
                unreachable += 1
    if reachable == 0:
        raise DomainError("no seeder pair is reachable")
    return SeederPathStats(total / reachable, reachable, unreachable)
