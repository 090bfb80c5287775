"""Immutable graph containers and edge-list ingestion.

Nodes carry opaque text tokens; internally each graph maps tokens to dense
indices assigned in first-seen order, so output is reproducible for a given
input. Adjacency is stored CSR-style (offset + index arrays, neighbors
sorted), which keeps the structures compact and lets the metric code hand
them straight to scipy.sparse.

Graphs are simple by construction: self-loops and duplicate edges are
dropped while building, with counts reported by the ingest functions.
Instances are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import EmptyInputError, ParseError, UnknownNodeError


def _check_token(token: str, lineno: int | None = None) -> str:
    if not token or "#" in token or any(c.isspace() for c in token):
        raise ParseError(f"invalid node token {token!r}", lineno)
    return token


def _index_pairs(pairs: Iterable[tuple[str, str]]):
    """Assign first-seen indices to tokens; returns (tokens, eu, ev, loops)."""
    index: dict[str, int] = {}
    tokens: list[str] = []
    eu: list[int] = []
    ev: list[int] = []
    self_loops = 0
    for a, b in pairs:
        if a == b:
            self_loops += 1
            # the node itself is still recorded
            if a not in index:
                index[a] = len(tokens)
                tokens.append(a)
            continue
        for t in (a, b):
            if t not in index:
                index[t] = len(tokens)
                tokens.append(t)
        eu.append(index[a])
        ev.append(index[b])
    return tokens, np.asarray(eu, dtype=np.int64), np.asarray(ev, dtype=np.int64), self_loops


def _csr_from_sorted(n: int, src: np.ndarray, dst: np.ndarray):
    """Build (indptr, indices) from edge arrays already sorted by (src, dst)."""
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, dst.astype(np.int64, copy=True)


@dataclass
class IngestReport:
    """Counts of what an ingest pass kept and dropped."""

    lines: int = 0
    comments: int = 0
    edges_read: int = 0
    self_loops: int = 0
    duplicates: int = 0
    nodes: int = 0
    edges: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class DirectedGraph:
    """Directed simple graph with sorted out- and in-adjacency."""

    def __init__(self, tokens: list[str], out_indptr, out_indices, in_indptr, in_indices):
        self.tokens = tokens
        self._index = {t: i for i, t in enumerate(tokens)}
        self.out_indptr = out_indptr
        self.out_indices = out_indices
        self.in_indptr = in_indptr
        self.in_indices = in_indices

    directed = True

    @classmethod
    def from_indexed(cls, tokens: list[str], eu: np.ndarray, ev: np.ndarray) -> "DirectedGraph":
        """Build from index arrays, dropping self-loops and duplicates."""
        n = len(tokens)
        eu = np.asarray(eu, dtype=np.int64)
        ev = np.asarray(ev, dtype=np.int64)
        keep = eu != ev
        eu, ev = eu[keep], ev[keep]
        codes = np.unique(eu * n + ev)
        eu, ev = codes // n, codes % n
        out_indptr, out_indices = _csr_from_sorted(n, eu, ev)
        rcodes = np.sort(ev * n + eu)
        in_indptr, in_indices = _csr_from_sorted(n, rcodes // n, rcodes % n)
        return cls(tokens, out_indptr, out_indices, in_indptr, in_indices)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "DirectedGraph":
        tokens, eu, ev, _ = _index_pairs(pairs)
        return cls.from_indexed(tokens, eu, ev)

    @property
    def node_count(self) -> int:
        return len(self.tokens)

    @property
    def edge_count(self) -> int:
        return int(self.out_indices.size)

    def index_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise UnknownNodeError(token) from None

    def successors(self, u: int) -> np.ndarray:
        return self.out_indices[self.out_indptr[u]:self.out_indptr[u + 1]]

    def predecessors(self, u: int) -> np.ndarray:
        return self.in_indices[self.in_indptr[u]:self.in_indptr[u + 1]]

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    def in_degrees(self) -> np.ndarray:
        return np.diff(self.in_indptr)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.successors(u)
        k = np.searchsorted(row, v)
        return bool(k < row.size and row[k] == v)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(src, dst) index arrays in sorted (src, dst) order."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.out_degrees())
        return src, self.out_indices

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        src, dst = self.edge_arrays()
        return zip(src.tolist(), dst.tolist())

    def to_csr(self):
        from scipy.sparse import csr_matrix

        n = self.node_count
        data = np.ones(self.out_indices.size, dtype=np.int8)
        return csr_matrix((data, self.out_indices, self.out_indptr), shape=(n, n))

    def __repr__(self) -> str:
        return f"DirectedGraph(nodes={self.node_count}, edges={self.edge_count})"


class UndirectedGraph:
    """Undirected simple graph with sorted symmetric adjacency."""

    def __init__(self, tokens: list[str], indptr, indices, edge_count: int):
        self.tokens = tokens
        self._index = {t: i for i, t in enumerate(tokens)}
        self.indptr = indptr
        self.indices = indices
        self._edge_count = edge_count

    directed = False

    @classmethod
    def from_indexed(cls, tokens: list[str], eu: np.ndarray, ev: np.ndarray) -> "UndirectedGraph":
        n = len(tokens)
        eu = np.asarray(eu, dtype=np.int64)
        ev = np.asarray(ev, dtype=np.int64)
        keep = eu != ev
        eu, ev = eu[keep], ev[keep]
        lo, hi = np.minimum(eu, ev), np.maximum(eu, ev)
        codes = np.unique(lo * n + hi)
        lo, hi = codes // n, codes % n
        both = np.sort(np.concatenate([lo * n + hi, hi * n + lo]))
        indptr, indices = _csr_from_sorted(n, both // n, both % n)
        return cls(tokens, indptr, indices, int(codes.size))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "UndirectedGraph":
        tokens, eu, ev, _ = _index_pairs(pairs)
        return cls.from_indexed(tokens, eu, ev)

    @property
    def node_count(self) -> int:
        return len(self.tokens)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def index_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise UnknownNodeError(token) from None

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        k = np.searchsorted(row, v)
        return bool(k < row.size and row[k] == v)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(u, v) index arrays with u < v, sorted."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees())
        mask = src < self.indices
        return src[mask], self.indices[mask]

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        eu, ev = self.edge_arrays()
        return zip(eu.tolist(), ev.tolist())

    def to_csr(self):
        from scipy.sparse import csr_matrix

        n = self.node_count
        data = np.ones(self.indices.size, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def __repr__(self) -> str:
        return f"UndirectedGraph(nodes={self.node_count}, edges={self.edge_count})"


Graph = Union[DirectedGraph, UndirectedGraph]


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

def _parse_edge_lines(stream: IO[str], report: IngestReport) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(stream, 1):
        report.lines += 1
        line = raw.strip()
        if not line or line.startswith("#"):
            report.comments += 1
            continue
        fields = line.replace(",", " ").split()
        if len(fields) not in (2, 3):
            raise ParseError(f"expected 2 or 3 fields, got {len(fields)}", lineno)
        a = _check_token(fields[0], lineno)
        b = _check_token(fields[1], lineno)
        pairs.append((a, b))
    if not pairs:
        raise EmptyInputError("edge list contains no edges")
    report.edges_read = len(pairs)
    return pairs


def ingest_directed(stream: IO[str]) -> tuple[DirectedGraph, IngestReport]:
    """Parse an edge-list stream into a directed graph.

    Lines hold "src dst" separated by tabs, commas, or runs of spaces; a
    third (weight) field is ignored; lines starting with '#' are comments.
    Self-loops and duplicate edges are dropped and counted in the report.
    """
    report = IngestReport()
    pairs = _parse_edge_lines(stream, report)
    tokens, eu, ev, loops = _index_pairs(pairs)
    g = DirectedGraph.from_indexed(tokens, eu, ev)
    report.self_loops = loops
    report.duplicates = len(pairs) - loops - g.edge_count
    report.nodes = g.node_count
    report.edges = g.edge_count
    return g, report


def ingest_undirected(stream: IO[str]) -> tuple[UndirectedGraph, IngestReport]:
    """Parse an edge-list stream into an undirected graph.

    As ingest_directed, with (u, v) and (v, u) treated as the same edge.
    """
    report = IngestReport()
    pairs = _parse_edge_lines(stream, report)
    tokens, eu, ev, loops = _index_pairs(pairs)
    g = UndirectedGraph.from_indexed(tokens, eu, ev)
    report.self_loops = loops
    report.duplicates = len(pairs) - loops - g.edge_count
    report.nodes = g.node_count
    report.edges = g.edge_count
    return g, report


def write_edge_list(g: Graph, stream: IO[str]) -> None:
    """Write tab-separated edges in index order.

    Re-ingesting the output reproduces the graph with the identical
    token-to-index mapping. Isolated vertices are not representable in the
    edge-list format and are dropped.
    """
    toks = g.tokens
    for u, v in g.iter_edges():
        stream.write(f"{toks[u]}\t{toks[v]}\n")


def to_undirected(g: DirectedGraph) -> UndirectedGraph:
    """Collapse edge directions; the node set (and token order) is kept."""
    eu, ev = g.edge_arrays()
    return UndirectedGraph.from_indexed(list(g.tokens), eu, ev)


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------

@dataclass
class ComponentDecomposition:
    """Partition of a graph into connected components.

    Component ids are ordered by decreasing vertex count, ties broken by the
    smallest member index, so id 0 is always the giant component. For
    directed graphs the partition is by weak connectivity and edge counts
    are directed-edge counts.
    """

    component_of: np.ndarray
    vertex_counts: np.ndarray
    edge_counts: np.ndarray

    @property
    def count(self) -> int:
        return int(self.vertex_counts.size)

    @property
    def sizes(self) -> list[tuple[int, int]]:
        return list(zip(self.vertex_counts.tolist(), self.edge_counts.tolist()))

    def members(self, cid: int) -> np.ndarray:
        return np.flatnonzero(self.component_of == cid)

    def giant_members(self) -> np.ndarray:
        return self.members(0)


def components(g: Graph) -> ComponentDecomposition:
    """Decompose into connected (weakly connected, if directed) components."""
    n = g.node_count
    label = np.full(n, -1, dtype=np.int64)
    if g.directed:
        def neigh(u):
            return (g.successors(u), g.predecessors(u))
    else:
        def neigh(u):
            return (g.neighbors(u),)

    order = 0
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = order
        stack = [start]
        while stack:
            u = stack.pop()
            for block in neigh(u):
                for v in block.tolist():
                    if label[v] < 0:
                        label[v] = order
                        stack.append(v)
        order += 1

    vertex_counts = np.bincount(label, minlength=order)
    eu, _ = g.edge_arrays()
    edge_counts = np.bincount(label[eu], minlength=order) if eu.size else np.zeros(order, dtype=np.int64)
    # seeds are visited in ascending index order, so the discovery order of
    # a component equals its minimum member index order
    ranks = sorted(range(order), key=lambda c: (-int(vertex_counts[c]), c))
    remap = np.empty(order, dtype=np.int64)
    for new_id, old_id in enumerate(ranks):
        remap[old_id] = new_id
    return ComponentDecomposition(
        component_of=remap[label],
        vertex_counts=vertex_counts[ranks],
        edge_counts=edge_counts[ranks],
    )


def induced_subgraph(g: Graph, node_tokens: Sequence[str]) -> Graph:
    """Subgraph on the listed nodes, keeping edges with both endpoints listed.

    The new graph's index order follows the given node order; unknown tokens
    raise UnknownNodeError naming the offender.
    """
    keep_idx = [g.index_of(t) for t in node_tokens]
    old_to_new = np.full(g.node_count, -1, dtype=np.int64)
    for new, old in enumerate(keep_idx):
        old_to_new[old] = new
    tokens = [g.tokens[i] for i in keep_idx]
    eu, ev = g.edge_arrays()
    mask = (old_to_new[eu] >= 0) & (old_to_new[ev] >= 0)
    new_eu, new_ev = old_to_new[eu[mask]], old_to_new[ev[mask]]
    cls = DirectedGraph if g.directed else UndirectedGraph
    return cls.from_indexed(tokens, new_eu, new_ev)


# ---------------------------------------------------------------------------
# Seed lists
# ---------------------------------------------------------------------------

def read_seed_list(stream: IO[str]) -> list[str]:
    """One token per line; '#' comments allowed; duplicates rejected."""
    seeds: list[str] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        token = _check_token(line, lineno)
        if token in seen:
            raise ParseError(f"duplicate seed {token!r}", lineno)
        seen.add(token)
        seeds.append(token)
    if not seeds:
        raise EmptyInputError("seed list is empty")
    return seeds


def resolve_seeds(g: Graph, seeds: Sequence[str]) -> list[int]:
    """Map seed tokens to node indices, rejecting duplicates and unknowns."""
    if not seeds:
        raise EmptyInputError("seed set is empty")
    if len(set(seeds)) != len(seeds):
        raise ParseError("seed set contains duplicates")
    return [g.index_of(t) for t in seeds]
