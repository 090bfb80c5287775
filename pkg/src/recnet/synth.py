"""Seeded synthetic inputs: random graphs, recommendation forests, and the
full desk-scale scenario (sparse directed recommendation network + social
graph + seeder mapping).

All generators are deterministic per (parameters, seed); see rng.py for the
generator contract. Components of a forest draw from split seed streams, so
each component's shape is independent of how many others exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .errors import ConfigError, ParseError
from .graphs import DirectedGraph, UndirectedGraph
from .rng import bernoulli_mask, make_rng, spawn_rngs

# Component-size histogram for the default recommendation forest: ~4,800
# nodes across 1,500 components, 70% of them trivial two-node chains, with a
# thin tail of larger communities. Shares by component size stay within a
# couple of points of the ones observed in production email campaigns.
DEFAULT_RN_HISTOGRAM: dict[int, int] = {
    2: 1051, 3: 218, 4: 81, 5: 43, 6: 27, 7: 18, 8: 12, 9: 8, 10: 8,
    11: 8, 13: 6, 15: 4, 18: 3, 22: 3, 28: 2, 34: 2,
    42: 1, 55: 1, 70: 1, 90: 1, 115: 1, 150: 1,
}


def gen_er(n: int, p: float, seed: int, token_prefix: str = "v") -> UndirectedGraph:
    """Erdos-Renyi G(n, p): every unordered pair is an edge with probability p.

    Pairs are decided row by row on the integer RNG path, so the draw is
    exact and reproducible; cost is O(n^2) draws.
    """
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"p must be in [0, 1], got {p}")
    rng = make_rng(seed)
    tokens = [f"{token_prefix}{i}" for i in range(n)]
    eu_parts, ev_parts = [], []
    for i in range(n - 1):
        row = bernoulli_mask(rng, p, n - 1 - i)
        hits = np.flatnonzero(row)
        if hits.size:
            eu_parts.append(np.full(hits.size, i, dtype=np.int64))
            ev_parts.append(hits + i + 1)
    eu = np.concatenate(eu_parts) if eu_parts else np.zeros(0, dtype=np.int64)
    ev = np.concatenate(ev_parts) if ev_parts else np.zeros(0, dtype=np.int64)
    return UndirectedGraph.from_indexed(tokens, eu, ev)


def gen_ba(n: int, m: int, seed: int, token_prefix: str = "v") -> UndirectedGraph:
    """Barabasi-Albert preferential attachment.

    Starts from a complete graph on m+1 nodes; each arriving node attaches m
    edges to existing nodes with probability proportional to current degree
    (collisions redrawn, so the graph stays simple). Final edge count is
    C(m+1, 2) + m * (n - m - 1).
    """
    if m < 1 or n <= m:
        raise ConfigError(f"need n > m >= 1, got n={n} m={m}")
    rng = make_rng(seed)
    tokens = [f"{token_prefix}{i}" for i in range(n)]
    eu: list[int] = []
    ev: list[int] = []
    pool: list[int] = []  # one entry per edge endpoint: degree-proportional urn
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            eu.append(i)
            ev.append(j)
            pool.append(i)
            pool.append(j)
    for v in range(m + 1, n):
        chosen: set[int] = set()
        while len(chosen) < m:
            t = pool[int(rng.integers(0, len(pool)))]
            if t not in chosen:
                chosen.add(t)
        for t in sorted(chosen):
            eu.append(t)
            ev.append(v)
            pool.append(t)
        pool.extend([v] * m)
    return UndirectedGraph.from_indexed(
        tokens, np.asarray(eu, dtype=np.int64), np.asarray(ev, dtype=np.int64)
    )


def gen_rn_forest(
    histogram: dict[int, int] | None = None,
    seed: int = 0,
    reciprocity: float = 0.65,
    token_prefix: str = "u",
) -> DirectedGraph:
    """Directed recommendation forest shaped by a component-size histogram.

    Each (size, count) entry yields `count` components of `size` nodes whose
    shape is drawn among an out-star, a chain, and a random attachment tree.
    A fraction q = r / (2 - r) of the base edges gains a reverse edge, which
    targets overall edge reciprocity r.
    """
    hist = DEFAULT_RN_HISTOGRAM if histogram is None else histogram
    if not hist:
        raise ConfigError("histogram is empty")
    for s, c in hist.items():
        if s < 2 or c < 0:
            raise ConfigError(f"histogram entry {s}:{c} out of range")
    if not 0.0 <= reciprocity <= 1.0:
        raise ConfigError(f"reciprocity must be in [0, 1], got {reciprocity}")
    q = reciprocity / (2.0 - reciprocity)

    sizes: list[int] = []
    for s in sorted(hist):
        sizes.extend([s] * hist[s])
    rngs = spawn_rngs(seed, len(sizes))
    tokens: list[str] = []
    eu: list[int] = []
    ev: list[int] = []
    offset = 0
    for s, rng in zip(sizes, rngs):
        shape = int(rng.integers(0, 3))
        edges: list[tuple[int, int]] = []
        if shape == 0:  # out-star
            edges = [(0, j) for j in range(1, s)]
        elif shape == 1:  # chain
            edges = [(j, j + 1) for j in range(s - 1)]
        else:  # random attachment tree
            edges = [(int(rng.integers(0, j)), j) for j in range(1, s)]
        reverse = bernoulli_mask(rng, q, len(edges))
        for (a, b), rev in zip(edges, reverse.tolist()):
            eu.append(offset + a)
            ev.append(offset + b)
            if rev:
                eu.append(offset + b)
                ev.append(offset + a)
        tokens.extend(f"{token_prefix}{offset + j}" for j in range(s))
        offset += s
    return DirectedGraph.from_indexed(
        tokens, np.asarray(eu, dtype=np.int64), np.asarray(ev, dtype=np.int64)
    )


# ---------------------------------------------------------------------------
# Full scenario
# ---------------------------------------------------------------------------

@dataclass
class ScenarioSpec:
    """Parameters of the default end-to-end scenario.

    seeder_fraction picks that share of the recommendation network's
    recommenders (out-degree > 0) as seeders; placement decides which social
    graph nodes they map onto ("uniform" or "degree_biased").
    """

    rn_histogram: dict[int, int] = field(default_factory=lambda: dict(DEFAULT_RN_HISTOGRAM))
    rn_reciprocity: float = 0.65
    osn_model: str = "ba"  # "ba" | "er"
    osn_n: int = 50_000
    osn_m: int = 3
    osn_p: float = 0.0002
    seeder_fraction: float = 0.1
    placement: str = "degree_biased"  # "uniform" | "degree_biased"
    seed: int = 0


@dataclass
class Scenario:
    rn: DirectedGraph
    osn: UndirectedGraph
    seeder_pairs: list[tuple[str, str]]  # (rn token, osn token)

    @property
    def rn_seeders(self) -> list[str]:
        return [a for a, _ in self.seeder_pairs]

    @property
    def osn_seeders(self) -> list[str]:
        return [b for _, b in self.seeder_pairs]


def scenario_generate(spec: ScenarioSpec) -> Scenario:
    """Generate the (recommendation network, social graph, seeder map) triple."""
    if spec.osn_model not in ("ba", "er"):
        raise ConfigError(f"unknown OSN model {spec.osn_model!r}")
    if spec.placement not in ("uniform", "degree_biased"):
        raise ConfigError(f"unknown placement rule {spec.placement!r}")
    if not 0.0 < spec.seeder_fraction <= 1.0:
        raise ConfigError(f"seeder_fraction must be in (0, 1], got {spec.seeder_fraction}")

    sub = np.random.SeedSequence(spec.seed).generate_state(4)
    rn = gen_rn_forest(spec.rn_histogram, int(sub[0]), spec.rn_reciprocity)
    if spec.osn_model == "ba":
        osn = gen_ba(spec.osn_n, spec.osn_m, int(sub[1]), token_prefix="o")
    else:
        osn = gen_er(spec.osn_n, spec.osn_p, int(sub[1]), token_prefix="o")

    recommenders = np.flatnonzero(rn.out_degrees() > 0)
    k = max(2, round(spec.seeder_fraction * recommenders.size))
    k = min(k, recommenders.size)
    if k > osn.node_count:
        raise ConfigError(f"{k} seeders exceed the OSN size {osn.node_count}")

    pick_rng = make_rng(int(sub[2]))
    chosen_rn = recommenders[np.sort(pick_rng.permutation(recommenders.size)[:k])]

    place_rng = make_rng(int(sub[3]))
    placed: list[int] = []
    taken: set[int] = set()
    if spec.placement == "uniform":
        perm = place_rng.permutation(osn.node_count)
        placed = perm[:k].tolist()
    else:
        # degree-proportional draw from the flat adjacency (each node appears
        # once per incident edge), rejecting repeats
        pool = osn.indices
        if pool.size == 0:
            raise ConfigError("degree-biased placement needs an OSN with edges")
        while len(placed) < k:
            cand = int(pool[int(place_rng.integers(0, pool.size))])
            if cand not in taken:
                taken.add(cand)
                placed.append(cand)

    pairs = [(rn.tokens[int(r)], osn.tokens[int(o)]) for r, o in zip(chosen_rn, placed)]
    return Scenario(rn=rn, osn=osn, seeder_pairs=pairs)


def write_seeder_map(pairs: list[tuple[str, str]], stream: IO[str]) -> None:
    for a, b in pairs:
        stream.write(f"{a}\t{b}\n")


def read_seeder_map(stream: IO[str]) -> list[tuple[str, str]]:
    """Read (rn_token, osn_token) pairs; duplicates on either side rejected."""
    pairs: list[tuple[str, str]] = []
    seen_a: set[str] = set()
    seen_b: set[str] = set()
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.replace(",", " ").split()
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", lineno)
        a, b = fields
        if a in seen_a:
            raise ParseError(f"duplicate seeder {a!r}", lineno)
        if b in seen_b:
            raise ParseError(f"duplicate social-graph node {b!r}", lineno)
        seen_a.add(a)
        seen_b.add(b)
        pairs.append((a, b))
    if not pairs:
        raise ParseError("seeder map is empty")
    return pairs
