"""NDJSON record emission and CSV projections.

NDJSON is the primary output format: one self-describing record per line
with lexicographically sorted keys and compact separators, so identical
runs produce identical bytes. CSV files are derived views for plotting,
never a source of truth.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from typing import IO, Iterable

from .errors import ParseError


def json_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n"


def write_ndjson(records: Iterable[dict], stream: IO[str]) -> None:
    for rec in records:
        stream.write(json_line(rec))


def read_ndjson(stream: IO[str]) -> list[dict]:
    records = []
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line:
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad NDJSON record: {exc}", lineno) from None
    return records


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# record payloads with a "points" list become two-column CSVs named by the
# emitting metric; row-shaped records group into one CSV per family
_POINT_HEADERS = {
    "degree_ecdf": ("degree", "cumulative_probability"),
    "cc_by_degree": ("degree", "mean_local_cc"),
    "knn_by_degree": ("degree", "mean_neighbor_degree"),
}
_ROW_FAMILIES = {
    "subnetwork_row": ("size", "networks_pct", "vertices_pct", "edges_pct"),
    "component": ("component_id", "vertices", "edges"),
    "crawl_level": ("level", "expanded", "vertices", "edges"),
    "crawl_trace": ("step", "visited", "components"),
    "ern_row": (
        "k", "vertices", "edges", "avg_path_length", "global_cc", "diameter",
        "alpha", "total_vertices", "total_edges", "component_count",
    ),
}


def records_to_csv(records: list[dict], out_dir: str) -> list[str]:
    """Project tabular record payloads from a run's NDJSON into CSV files.

    Returns the written file names (sorted, deterministic). Records that are
    not tabular are skipped.
    """
    os.makedirs(out_dir, exist_ok=True)
    tables: dict[str, tuple[tuple[str, ...], list[tuple]]] = {}
    for rec in records:
        payload = rec.get("payload")
        if not isinstance(payload, dict):
            continue
        metric = payload.get("metric") or rec.get("metric")
        inner = payload.get("payload") if isinstance(payload.get("payload"), dict) else payload
        stage = rec.get("stage", "run")
        if metric in _POINT_HEADERS and "points" in inner:
            gid = inner.get("graph_id") or payload.get("graph_id") or "graph"
            name = f"{stage}__{metric}__{gid}.csv"
            headers = _POINT_HEADERS[metric]
            rows = [tuple(p) for p in inner["points"]]
            tables.setdefault(name, (headers, []))[1].extend(rows)
        elif metric in _ROW_FAMILIES:
            name = f"{stage}__{metric}.csv"
            headers = _ROW_FAMILIES[metric]
            row = tuple(inner.get(h) for h in headers)
            tables.setdefault(name, (headers, []))[1].append(row)
    written = []
    for name in sorted(tables):
        headers, rows = tables[name]
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(headers)
            writer.writerows(rows)
        written.append(name)
    return written
