"""Independent brute-force reference implementations for the test suite.

Everything here deliberately avoids the library's code paths: components
use union-find (the library floods with BFS), path metrics use
Floyd-Warshall (the library runs per-source BFS through scipy), clustering
enumerates neighbor pairs directly (the library multiplies sparse
matrices), and weighted distances use a hand-rolled Dijkstra that tolerates
zero-cost edges (the library contracts them first).
"""

from __future__ import annotations

import heapq
import itertools

import numpy as np


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def uf_component_count(n: int, edges) -> int:
    uf = UnionFind(n)
    count = n
    for a, b in edges:
        if uf.union(a, b):
            count -= 1
    return count


def uf_labels(n: int, edges) -> list[int]:
    uf = UnionFind(n)
    for a, b in edges:
        uf.union(a, b)
    roots = {}
    labels = []
    for x in range(n):
        r = uf.find(x)
        labels.append(roots.setdefault(r, len(roots)))
    return labels


def floyd_warshall(n: int, edges, directed: bool) -> np.ndarray:
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for a, b in edges:
        dist[a, b] = 1.0
        if not directed:
            dist[b, a] = 1.0
    for k in range(n):
        dist = np.minimum(dist, dist[:, k, None] + dist[None, k, :])
    return dist


def path_stats(dist: np.ndarray):
    """(diameter, apl, reachable ordered pairs) from a distance matrix."""
    n = dist.shape[0]
    off = ~np.eye(n, dtype=bool)
    finite = np.isfinite(dist) & off
    if not finite.any():
        return None
    return int(dist[finite].max()), float(dist[finite].sum() / finite.sum()), int(finite.sum())


def local_cc(neigh: list[set[int]]) -> list[float]:
    out = []
    for u, nu in enumerate(neigh):
        d = len(nu)
        if d < 2:
            out.append(0.0)
            continue
        closed = sum(1 for v, w in itertools.combinations(sorted(nu), 2) if w in neigh[v])
        out.append(2.0 * closed / (d * (d - 1)))
    return out


def knn_table(neigh: list[set[int]]) -> dict[int, float]:
    deg = [len(s) for s in neigh]
    per_node = {}
    for u, nu in enumerate(neigh):
        if deg[u] > 0:
            per_node[u] = sum(deg[v] for v in nu) / deg[u]
    table: dict[int, list[float]] = {}
    for u, val in per_node.items():
        table.setdefault(deg[u], []).append(val)
    return {k: sum(vs) / len(vs) for k, vs in table.items()}


def reciprocity_scan(edges) -> float:
    eset = set(edges)
    return sum(1 for a, b in eset if (b, a) in eset) / len(eset)


def ecdf_sorted(degrees) -> list[tuple[int, float]]:
    degrees = sorted(degrees)
    n = len(degrees)
    out = []
    for i, d in enumerate(degrees):
        if i == n - 1 or degrees[i + 1] != d:
            out.append((d, (i + 1) / n))
    return out


def dijkstra_zero_ok(n: int, wedges, source: int) -> list[float]:
    """Single-source shortest paths over undirected weighted edges
    (cost >= 0 allowed)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a, b, c in wedges:
        adj[a].append((b, c))
        adj[b].append((a, c))
    dist = [float("inf")] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, c in adj[u]:
            nd = d + c
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def neighbor_sets(g) -> list[set[int]]:
    return [set(g.neighbors(u).tolist()) for u in range(g.node_count)]


def bfs_depths(neigh: list[set[int]], sources) -> list[float]:
    from collections import deque

    dist = [float("inf")] * len(neigh)
    q = deque()
    for s in sources:
        dist[s] = 0
        q.append(s)
    while q:
        u = q.popleft()
        for v in neigh[u]:
            if dist[v] == float("inf"):
                dist[v] = dist[u] + 1
                q.append(v)
    return dist
