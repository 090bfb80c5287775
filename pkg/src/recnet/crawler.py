"""Level-limited breadth-first crawl over a pluggable friend-list provider.

A level-L crawl expands every node at BFS depth < L (seeds sit at depth 0)
and records every friendship edge any friends() call returns, so nodes at
depth L are observed with partial degree while shallower nodes carry their
exact degree. Lookup failures on seeds abort the crawl; a failure on any
other node is logged and the node becomes a leaf, which is what a deleted
profile looks like in practice.

Providers: GraphProvider serves a ground-truth undirected graph (typically
loaded from an edge-list file); RemoteProvider speaks a line protocol over
TCP (request "FRIENDS <token>\\n", response "OK <n>\\n" + n token lines or
"ERR NOTFOUND\\n"); FriendListServer is the matching server.
"""

from __future__ import annotations

import logging
import os
import socket
import socketserver
import threading
import time
from dataclasses import dataclass, field
from typing import IO, Callable, Protocol, Sequence

import numpy as np

from .errors import ConfigError, EmptyInputError, ParseError, ProtocolError, UnknownNodeError
from .graphs import UndirectedGraph, ingest_undirected

logger = logging.getLogger(__name__)


class FriendProvider(Protocol):
    def friends(self, token: str) -> list[str]:
        """Deterministic friend list for one node; never contains the node
        itself or duplicates. Unknown node -> UnknownNodeError."""
        ...


class GraphProvider:
    """Friend lists backed by a full ground-truth undirected graph."""

    def __init__(self, graph: UndirectedGraph):
        self.graph = graph

    @classmethod
    def from_file(cls, path: str) -> "GraphProvider":
        with open(path, encoding="utf-8") as fh:
            g, _ = ingest_undirected(fh)
        return cls(g)

    def friends(self, token: str) -> list[str]:
        u = self.graph.index_of(token)
        return [self.graph.tokens[v] for v in self.graph.neighbors(u).tolist()]


class RemoteProvider:
    """Friend lists over the TCP line protocol, with timeout and retries."""

    def __init__(self, host: str, port: int, timeout: float = 5.0, retries: int = 2):
        self.host = host
        self.port = port
        self.timeout = timeout
        self.retries = retries
        self._sock: socket.socket | None = None
        self._rfile = None

    def _connect(self):
        self.close()
        self._sock = socket.create_connection((self.host, self.port), timeout=self.timeout)
        self._rfile = self._sock.makefile("rb")

    def close(self):
        if self._rfile is not None:
            self._rfile.close()
            self._rfile = None
        if self._sock is not None:
            self._sock.close()
            self._sock = None

    def _readline(self) -> str:
        line = self._rfile.readline()
        if not line:
            raise ConnectionError("connection closed by server")
        return line.decode("utf-8").rstrip("\n")

    def friends(self, token: str) -> list[str]:
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                if self._sock is None:
                    self._connect()
                self._sock.sendall(f"FRIENDS {token}\n".encode("utf-8"))
                status = self._readline()
                if status == "ERR NOTFOUND":
                    raise UnknownNodeError(token, "provider")
                if not status.startswith("OK "):
                    raise ProtocolError(f"unexpected response {status!r}")
                count = int(status[3:])
                return [self._readline() for _ in range(count)]
            except (OSError, ValueError) as exc:  # timeouts, resets, bad counts
                last_error = exc
                self.close()
        raise ProtocolError(f"friends({token!r}) failed after {self.retries + 1} attempts: {last_error}")


class _FriendHandler(socketserver.StreamRequestHandler):
    def handle(self):
        graph: UndirectedGraph = self.server.graph  # type: ignore[attr-defined]
        while True:
            raw = self.rfile.readline()
            if not raw:
                return
            parts = raw.decode("utf-8").split()
            if len(parts) != 2 or parts[0] != "FRIENDS":
                self.wfile.write(b"ERR BADREQUEST\n")
                continue
            token = parts[1]
            try:
                u = graph.index_of(token)
            except UnknownNodeError:
                self.wfile.write(b"ERR NOTFOUND\n")
                continue
            names = [graph.tokens[v] for v in graph.neighbors(u).tolist()]
            payload = f"OK {len(names)}\n" + "".join(f"{t}\n" for t in names)
            self.wfile.write(payload.encode("utf-8"))


class FriendListServer:
    """Threaded TCP server answering FRIENDS requests from a fixed graph."""

    def __init__(self, graph: UndirectedGraph, host: str = "127.0.0.1", port: int = 0):
        self._server = socketserver.ThreadingTCPServer((host, port), _FriendHandler, bind_and_activate=True)
        self._server.daemon_threads = True
        self._server.graph = graph  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    def start(self) -> "FriendListServer":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join()


# ---------------------------------------------------------------------------
# Crawl engine
# ---------------------------------------------------------------------------

@dataclass
class CrawlLevel:
    level: int
    expanded: int
    vertices: int  # cumulative observed vertices after this level
    edges: int  # cumulative observed edges after this level


@dataclass
class CrawlResult:
    graph: UndirectedGraph
    levels: list[CrawlLevel]
    depth: dict[str, int]
    failed: list[str]  # non-seed tokens whose lookup failed (kept as leaves)


@dataclass
class _CrawlState:
    levels: int
    depth: dict[str, int] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)
    edges: set[tuple[str, str]] = field(default_factory=set)
    stats: list[CrawlLevel] = field(default_factory=list)
    current_level: int = 1
    pending: list[str] = field(default_factory=list)
    expanded_total: int = 0
    failed: list[str] = field(default_factory=list)

    def discover(self, token: str, depth: int):
        if token not in self.depth:
            self.depth[token] = depth
            self.order.append(token)


def _save_checkpoint(state: _CrawlState, path: str):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("#recnet-crawl-checkpoint v1\n")
        fh.write(f"levels {state.levels}\n")
        fh.write(f"level {state.current_level}\n")
        for rec in state.stats:
            fh.write(f"stat {rec.level} {rec.expanded} {rec.vertices} {rec.edges}\n")
        for token in state.order:
            fh.write(f"node {token} {state.depth[token]}\n")
        for token in state.pending:
            fh.write(f"pending {token}\n")
        for a, b in sorted(state.edges):
            fh.write(f"edge {a} {b}\n")
    os.replace(tmp, path)


def load_checkpoint(path: str) -> _CrawlState:
    state = _CrawlState(levels=0)
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            kind = fields[0]
            try:
                if kind == "levels":
                    state.levels = int(fields[1])
                elif kind == "level":
                    state.current_level = int(fields[1])
                elif kind == "stat":
                    state.stats.append(CrawlLevel(*map(int, fields[1:5])))
                elif kind == "node":
                    state.discover(fields[1], int(fields[2]))
                elif kind == "pending":
                    state.pending.append(fields[1])
                elif kind == "edge":
                    state.edges.add((fields[1], fields[2]))
                else:
                    raise ValueError(f"unknown record {kind!r}")
            except (IndexError, ValueError) as exc:
                raise ParseError(f"bad checkpoint record: {exc}", lineno) from None
    if state.levels < 1 or not state.depth:
        raise ParseError("checkpoint missing header or nodes")
    return state


def _build_graph(state: _CrawlState) -> UndirectedGraph:
    index = {t: i for i, t in enumerate(state.order)}
    eu = np.array([index[a] for a, _ in state.edges], dtype=np.int64)
    ev = np.array([index[b] for _, b in state.edges], dtype=np.int64)
    return UndirectedGraph.from_indexed(list(state.order), eu, ev)


def crawl(
    provider: FriendProvider,
    seeds: Sequence[str],
    levels: int,
    *,
    threads: int = 1,
    delay: float = 0.0,
    checkpoint_path: str | None = None,
    checkpoint_every: int = 10_000,
    resume_from: str | None = None,
    on_expand: Callable[[str, list[str]], None] | None = None,
) -> CrawlResult:
    """Crawl breadth-first from the seed set down to the given level.

    Expansion order is first-discovered order (seeds in the given order,
    then each friend list in returned order), which makes serial runs fully
    deterministic; threads > 1 fetches friend lists concurrently per level
    but applies them in the same order, so the result is identical.
    """
    if levels < 1:
        raise ConfigError(f"levels must be >= 1, got {levels}")
    if checkpoint_every < 1:
        raise ConfigError(f"checkpoint_every must be >= 1, got {checkpoint_every}")
    if resume_from is not None:
        state = load_checkpoint(resume_from)
        if state.levels != levels:
            raise ConfigError(
                f"checkpoint was for a {state.levels}-level crawl, asked for {levels}"
            )
        # an empty pending list with this level's stats row present means the
        # checkpoint landed exactly on a level boundary
        if not state.pending and any(r.level == state.current_level for r in state.stats):
            state.current_level += 1
    else:
        if not seeds:
            raise EmptyInputError("seed set is empty")
        if len(set(seeds)) != len(seeds):
            raise ParseError("seed set contains duplicates")
        state = _CrawlState(levels=levels)
        for s in seeds:
            state.discover(s, 0)
        state.pending = list(seeds)

    def fetch(token: str):
        try:
            result = provider.friends(token)
        except UnknownNodeError as exc:
            if state.depth.get(token) == 0:
                raise  # a dead seed is fatal
            logger.warning("friend lookup failed for %s; treating as leaf", token)
            result = exc
        if delay:
            time.sleep(delay)
        return result

    chunk = max(1, threads * 8)
    next_checkpoint = state.expanded_total + checkpoint_every
    while state.current_level <= levels:
        level = state.current_level
        if not state.pending:
            state.pending = [t for t in state.order if state.depth[t] == level - 1]
        frontier = state.pending
        expanded_this_level = (
            state.stats[-1].expanded if state.stats and state.stats[-1].level == level else 0
        )
        pos = 0
        while pos < len(frontier):
            batch = frontier[pos:pos + chunk]
            if threads > 1 and len(batch) > 1:
                from concurrent.futures import ThreadPoolExecutor

                with ThreadPoolExecutor(max_workers=threads) as pool:
                    results = list(pool.map(fetch, batch))
            else:
                results = [fetch(t) for t in batch]
            for token, friends in zip(batch, results):
                if isinstance(friends, UnknownNodeError):
                    state.failed.append(token)
                    friends = []
                for f in friends:
                    if f == token:
                        continue
                    state.discover(f, level)
                    state.edges.add((token, f) if token < f else (f, token))
                expanded_this_level += 1
                state.expanded_total += 1
                if on_expand is not None:
                    on_expand(token, list(friends))
            pos += len(batch)
            state.pending = frontier[pos:]
            _record_level(state, level, expanded_this_level)
            if checkpoint_path is not None and state.expanded_total >= next_checkpoint:
                _save_checkpoint(state, checkpoint_path)
                next_checkpoint = state.expanded_total + checkpoint_every
        _record_level(state, level, expanded_this_level)
        state.pending = []
        state.current_level += 1
    if checkpoint_path is not None:
        _save_checkpoint(state, checkpoint_path)
    return CrawlResult(
        graph=_build_graph(state),
        levels=list(state.stats),
        depth=dict(state.depth),
        failed=list(state.failed),
    )


def _record_level(state: _CrawlState, level: int, expanded: int):
    rec = CrawlLevel(level, expanded, len(state.order), len(state.edges))
    if state.stats and state.stats[-1].level == level:
        state.stats[-1] = rec
    else:
        state.stats.append(rec)


def crawl_component_trace(
    provider: FriendProvider, seeds: Sequence[str], levels: int
) -> tuple[CrawlResult, list[tuple[int, int]]]:
    """Crawl while recording, after each expansion, how many connected
    components the observed graph has. Shows disjoint seed trees coalescing
    as shared friends appear."""
    parent: dict[str, str] = {}
    count = 0

    def find(t: str) -> str:
        root = t
        while parent[root] != root:
            root = parent[root]
        while parent[t] != root:
            parent[t], t = root, parent[t]
        return root

    def ensure(t: str):
        nonlocal count
        if t not in parent:
            parent[t] = t
            count += 1

    for s in seeds:
        ensure(s)

    trace: list[tuple[int, int]] = []

    def hook(token: str, friends: list[str]):
        nonlocal count
        for f in friends:
            ensure(f)
            ra, rb = find(token), find(f)
            if ra != rb:
                parent[ra] = rb
                count -= 1
        trace.append((len(parent), count))

    result = crawl(provider, seeds, levels, on_expand=hook)
    return result, trace


def write_crawl_stats(levels: list[CrawlLevel], stream: IO[str]) -> None:
    stream.write("level\texpanded\tvertices\tedges\n")
    for rec in levels:
        stream.write(f"{rec.level}\t{rec.expanded}\t{rec.vertices}\t{rec.edges}\n")
