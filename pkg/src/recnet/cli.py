"""Command-line pipeline: one subcommand per stage, NDJSON records out.

Every run emits a header record embedding the resolved configuration and a
content hash of each input file, then one record per result row. Records
carry {run_id, stage, config_hash, payload}; identical inputs and
configuration produce byte-identical output. Flags that only steer
execution resources (--threads, output locations) do not enter the
configuration hash, so thread count cannot change the bytes.

The RECNET_OUT_DIR environment variable, when set, prefixes relative output
paths.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from contextlib import contextmanager

from . import crawler, extend, graphs, metrics, powerlaw, report, synth
from .errors import ConfigError, RecnetError

_NONCONFIG_FLAGS = {"func", "threads", "out"}


def _out_path(path: str | None) -> str | None:
    if path is None or path == "-":
        return path
    base = os.environ.get("RECNET_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


@contextmanager
def _open_out(path: str | None):
    path = _out_path(path)
    if path is None or path == "-":
        yield sys.stdout
    else:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _config_of(args: argparse.Namespace) -> dict:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in _NONCONFIG_FLAGS or key.startswith("out_"):
            continue
        config[key] = value
    return config


def _header(stage: str, args: argparse.Namespace, inputs: list[str]):
    config = _config_of(args)
    config_hash = report.sha256_text(report.json_line({"stage": stage, "config": config}))[:16]
    input_hashes = {p: report.sha256_file(p) for p in sorted(set(inputs))}
    run_id = report.sha256_text(config_hash + "".join(sorted(input_hashes.values())))[:12]
    header = {
        "run_id": run_id,
        "stage": stage,
        "config_hash": config_hash,
        "payload": {"config": config, "inputs": input_hashes},
    }

    def wrap(payload: dict) -> dict:
        return {"run_id": run_id, "stage": stage, "config_hash": config_hash, "payload": payload}

    return header, wrap


def _load_graph(path: str, directed: bool):
    with open(path, encoding="utf-8") as fh:
        return graphs.ingest_directed(fh) if directed else graphs.ingest_undirected(fh)


def _graph_id(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _read_values(path: str) -> list[int]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return [int(tok) for tok in text.split()]


def _load_matrix_arg(args) -> extend.SeederDistanceMatrix:
    with open(args.matrix, encoding="utf-8") as fh:
        matrix = extend.load_matrix(fh)
    if getattr(args, "map", None):
        with open(args.map, encoding="utf-8") as fh:
            pairs = synth.read_seeder_map(fh)
        matrix = matrix.relabel({osn: rn for rn, osn in pairs})
    return matrix


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

def _cmd_gen(args) -> int:
    header, wrap = _header("gen", args, [])
    records = [header]
    seed = args.seed
    if args.model == "scenario":
        spec = synth.ScenarioSpec(
            rn_histogram=_parse_histogram(args.histogram) if args.histogram else dict(synth.DEFAULT_RN_HISTOGRAM),
            rn_reciprocity=args.reciprocity,
            osn_model=args.osn_model,
            osn_n=args.osn_n,
            osn_m=args.osn_m,
            osn_p=args.osn_p,
            seeder_fraction=args.seeder_fraction,
            placement=args.placement,
            seed=seed,
        )
        scenario = synth.scenario_generate(spec)
        for path, g in ((args.out_rn, scenario.rn), (args.out_osn, scenario.osn)):
            with _open_out(path) as fh:
                graphs.write_edge_list(g, fh)
        with _open_out(args.out_map) as fh:
            synth.write_seeder_map(scenario.seeder_pairs, fh)
        records.append(wrap({
            "metric": "scenario",
            "rn_nodes": scenario.rn.node_count,
            "rn_edges": scenario.rn.edge_count,
            "osn_nodes": scenario.osn.node_count,
            "osn_edges": scenario.osn.edge_count,
            "seeders": len(scenario.seeder_pairs),
        }))
    else:
        if args.model == "er":
            g = synth.gen_er(args.n, args.p, seed)
        elif args.model == "ba":
            g = synth.gen_ba(args.n, args.m, seed)
        elif args.model == "rn-forest":
            hist = _parse_histogram(args.histogram) if args.histogram else None
            g = synth.gen_rn_forest(hist, seed, args.reciprocity)
        else:
            raise ConfigError(f"unknown model {args.model!r}")
        with _open_out(args.out_edges) as fh:
            graphs.write_edge_list(g, fh)
        records.append(wrap({
            "metric": "generated",
            "model": args.model,
            "nodes": g.node_count,
            "edges": g.edge_count,
        }))
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _parse_histogram(text: str) -> dict[int, int]:
    hist = {}
    for part in text.split(","):
        try:
            size, count = part.split(":")
            hist[int(size)] = int(count)
        except ValueError:
            raise ConfigError(f"bad histogram entry {part!r}; use size:count,...") from None
    return hist


def _cmd_components(args) -> int:
    header, wrap = _header("components", args, [args.infile])
    g, ingest = _load_graph(args.infile, args.directed)
    dec = graphs.components(g)
    records = [header, wrap({"metric": "ingest", **ingest.as_dict()})]
    gid = _graph_id(args.infile)
    collapsed = None
    if g.directed:
        import numpy as np

        und = graphs.to_undirected(g)
        ueu, _ = und.edge_arrays()
        collapsed = np.bincount(dec.component_of[ueu], minlength=dec.count)
    for cid, (vcount, ecount) in enumerate(dec.sizes):
        payload = {"metric": "component", "graph_id": gid,
                   "component_id": cid, "vertices": vcount, "edges": ecount}
        if collapsed is not None:
            payload["collapsed_edges"] = int(collapsed[cid])
        records.append(wrap(payload))
    for row in metrics.subnetwork_table(dec):
        records.append(wrap({
            "metric": "subnetwork_row", "graph_id": gid, "size": row.size,
            "networks_pct": row.networks_pct, "vertices_pct": row.vertices_pct,
            "edges_pct": row.edges_pct,
        }))
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_metrics(args) -> int:
    header, wrap = _header("metrics", args, [args.infile])
    g, ingest = _load_graph(args.infile, args.directed)
    rep = metrics.compute_metrics(
        g, graph_id=_graph_id(args.infile), path_mode=args.path_mode,
        sources=args.sources, seed=args.sample_seed,
        exact_limit=args.exact_limit, threads=args.threads,
    )
    records = [header, wrap({"metric": "ingest", **ingest.as_dict()})]
    records.extend(wrap(r) for r in metrics.metric_records(rep))
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_classify(args) -> int:
    header, wrap = _header("classify", args, [args.infile])
    g, _ = _load_graph(args.infile, True)
    thresholds = tuple(float(x) for x in args.thresholds.split(","))
    if len(thresholds) != 3:
        raise ConfigError("thresholds must be three comma-separated numbers")
    summary = metrics.classify_behavior(g, thresholds, args.ratio_mode)
    records = [header, wrap({
        "metric": "behavior_classes",
        "graph_id": _graph_id(args.infile),
        "thresholds": list(thresholds),
        "ratio_mode": args.ratio_mode,
        "counts": {c.value: summary.counts[c] for c in metrics.BehaviorClass},
        "fractions": {c.value: summary.fractions[c] for c in metrics.BehaviorClass},
        "active": summary.active_count,
        "isolated": summary.isolated_count,
    })]
    if args.per_node:
        for i, token in enumerate(g.tokens):
            cls = summary.classes[i]
            records.append(wrap({
                "metric": "behavior_node", "token": token,
                "ratio": None if cls is None else summary.ratios[i],
                "class": None if cls is None else cls.value,
            }))
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_fit(args) -> int:
    if bool(args.values) == bool(args.infile):
        raise ConfigError("pass exactly one of --values or --in")
    inputs = [args.values or args.infile]
    header, wrap = _header("fit", args, inputs)
    if args.values:
        samples = _read_values(args.values)
    else:
        g, _ = _load_graph(args.infile, args.directed)
        samples = _degrees_of(g, args.degree_mode)
    if args.xmin == "auto":
        fit = powerlaw.select_xmin(samples)
    else:
        fit = powerlaw.fit_mle(samples, int(args.xmin), args.xmax)
    records = [header, wrap({
        "metric": "powerlaw_fit",
        "alpha": fit.alpha, "x_min": fit.x_min, "x_max": fit.x_max,
        "n_tail": fit.n_tail, "std_err": fit.std_err, "ks_distance": fit.ks_distance,
    })]
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _degrees_of(g, mode: str):
    if g.directed:
        if mode == "total":
            return (g.out_degrees() + g.in_degrees()).tolist()
        if mode == "out":
            return g.out_degrees().tolist()
        if mode == "in":
            return g.in_degrees().tolist()
        raise ConfigError(f"unknown degree mode {mode!r}")
    if mode != "total":
        raise ConfigError(f"degree mode {mode!r} needs --directed")
    return g.degrees().tolist()


def _cmd_crawl(args) -> int:
    if bool(args.graph) == bool(args.endpoint):
        raise ConfigError("pass exactly one of --graph or --endpoint")
    inputs = [args.seeds] + ([args.graph] if args.graph else [])
    header, wrap = _header("crawl", args, inputs)
    with open(args.seeds, encoding="utf-8") as fh:
        seeds = graphs.read_seed_list(fh)
    if args.graph:
        provider = crawler.GraphProvider.from_file(args.graph)
    else:
        host, _, port = args.endpoint.rpartition(":")
        provider = crawler.RemoteProvider(host, int(port), timeout=args.timeout,
                                          retries=args.retries)
    kwargs = dict(
        threads=args.threads, delay=args.delay,
        checkpoint_path=_out_path(args.checkpoint),
        checkpoint_every=args.checkpoint_every, resume_from=args.resume,
    )
    trace = None
    if args.trace:
        result, trace = crawler.crawl_component_trace(provider, seeds, args.levels)
    else:
        result = crawler.crawl(provider, seeds, args.levels, **kwargs)
    records = [header]
    for rec in result.levels:
        records.append(wrap({
            "metric": "crawl_level", "level": rec.level, "expanded": rec.expanded,
            "vertices": rec.vertices, "edges": rec.edges,
        }))
    records.append(wrap({
        "metric": "crawl_summary",
        "vertices": result.graph.node_count, "edges": result.graph.edge_count,
        "failed_lookups": sorted(result.failed),
    }))
    if trace is not None:
        for step, (visited, comps) in enumerate(trace, 1):
            records.append(wrap({"metric": "crawl_trace", "step": step,
                                 "visited": visited, "components": comps}))
    if args.out_graph:
        with _open_out(args.out_graph) as fh:
            graphs.write_edge_list(result.graph, fh)
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_extract_tn(args) -> int:
    if bool(args.seeders) == bool(args.map):
        raise ConfigError("pass exactly one of --seeders or --map")
    inputs = [args.osn, args.seeders or args.map]
    header, wrap = _header("extract-tn", args, inputs)
    with open(args.osn, encoding="utf-8") as fh:
        osn, _ = graphs.ingest_undirected(fh)
    if args.seeders:
        with open(args.seeders, encoding="utf-8") as fh:
            seeders = graphs.read_seed_list(fh)
    else:
        with open(args.map, encoding="utf-8") as fh:
            seeders = [osn_tok for _, osn_tok in synth.read_seeder_map(fh)]
    tn, matrix = extend.extract_tn(osn, seeders, induced_edges=args.induced_edges,
                                   threads=args.threads)
    if not matrix.dist:
        print("warning: no seeder pair is reachable; transition network is empty",
              file=sys.stderr)
    if args.out_tn:
        with _open_out(args.out_tn) as fh:
            graphs.write_edge_list(tn, fh)
    with _open_out(args.out_matrix) as fh:
        extend.save_matrix(matrix, fh)
    records = [header, wrap({
        "metric": "transition_network",
        "tn_nodes": tn.node_count, "tn_edges": tn.edge_count,
        "seeders": len(seeders), "pairs": len(matrix.dist),
        "unreachable_pairs": len(matrix.unreachable),
    })]
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_build_ern(args) -> int:
    inputs = [args.rn, args.matrix] + ([args.map] if args.map else [])
    header, wrap = _header("build-ern", args, inputs)
    with open(args.rn, encoding="utf-8") as fh:
        rn, _ = graphs.ingest_directed(fh)
    matrix = _load_matrix_arg(args)
    wg = extend.build_ern(rn, matrix, args.kmax, args.rn_edge_cost)
    with _open_out(args.out_ern) as fh:
        extend.write_weighted_edges(wg, fh)
    records = [header, wrap({
        "metric": "ern",
        "k": args.kmax,
        "vertices": wg.node_count,
        "edges": wg.edge_count,
        "weight_counts": {str(w): c for w, c in sorted(wg.weight_histogram().items())},
        "dual_origin_pairs": len(wg.dual_origin),
    })]
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_ern_series(args) -> int:
    inputs = [args.rn, args.matrix] + ([args.map] if args.map else [])
    header, wrap = _header("ern-series", args, inputs)
    with open(args.rn, encoding="utf-8") as fh:
        rn, _ = graphs.ingest_directed(fh)
    matrix = _load_matrix_arg(args)
    series = extend.ern_series(
        rn, matrix, args.kmax, args.rn_edge_cost, path_mode=args.path_mode,
        sources=args.sources, seed=args.sample_seed, exact_limit=args.exact_limit,
        threads=args.threads,
    )
    records = [header]
    for row in series.rows:
        records.append(wrap({
            "metric": "ern_row", "k": row.k,
            "vertices": row.vertices, "edges": row.edges,
            "weight_counts": {str(w): c for w, c in sorted(row.weight_counts.items())},
            "diameter": row.diameter, "avg_path_length": row.avg_path_length,
            "global_cc": row.global_cc, "full_global_cc": row.full_global_cc,
            "alpha": row.alpha,
            "total_vertices": row.total_vertices, "total_edges": row.total_edges,
            "component_count": row.component_count,
        }))
    records.append(wrap({"metric": "ern_relative", **{k: v for k, v in series.relative.items()}}))
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_expand_ern(args) -> int:
    inputs = [args.ern, args.matrix] + ([args.map] if args.map else [])
    header, wrap = _header("expand-ern", args, inputs)
    with open(args.ern, encoding="utf-8") as fh:
        wg = extend.read_weighted_edges(fh)
    matrix = _load_matrix_arg(args)
    expanded = extend.expand_ern(wg, matrix, args.k)
    with _open_out(args.out_graph) as fh:
        graphs.write_edge_list(expanded, fh)
    records = [header, wrap({
        "metric": "expanded_ern",
        "k": args.k,
        "vertices": expanded.node_count,
        "edges": expanded.edge_count,
        "added_vertices": expanded.node_count - wg.node_count,
    })]
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_seeder_apl(args) -> int:
    if bool(args.seeders) == bool(args.map):
        raise ConfigError("pass exactly one of --seeders or --map")
    inputs = [args.infile, args.seeders or args.map]
    header, wrap = _header("seeder-apl", args, inputs)
    if args.kind == "weighted":
        with open(args.infile, encoding="utf-8") as fh:
            g = extend.read_weighted_edges(fh)
    else:
        g, _ = _load_graph(args.infile, args.kind == "directed")
    if args.seeders:
        with open(args.seeders, encoding="utf-8") as fh:
            seeders = graphs.read_seed_list(fh)
    else:
        with open(args.map, encoding="utf-8") as fh:
            pairs = synth.read_seeder_map(fh)
        seeders = [rn if args.map_side == "rn" else osn for rn, osn in pairs]
    stats = extend.seeder_apl(g, seeders)
    records = [header, wrap({
        "metric": "seeder_apl",
        "graph_id": _graph_id(args.infile),
        "mean": stats.mean,
        "reachable_pairs": stats.reachable_pairs,
        "unreachable_pairs": stats.unreachable_pairs,
    })]
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


def _cmd_report(args) -> int:
    header, wrap = _header("report", args, [args.infile])
    with open(args.infile, encoding="utf-8") as fh:
        records_in = report.read_ndjson(fh)
    out_dir = _out_path(args.out_dir)
    written = report.records_to_csv(records_in, out_dir)
    hashes = {name: report.sha256_file(os.path.join(out_dir, name)) for name in written}
    records = [header, wrap({"metric": "csv_files", "files": written, "hashes": hashes})]
    with _open_out(args.out) as fh:
        report.write_ndjson(records, fh)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recnet",
        description="Recommendation-network analysis and social-graph extension pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--out", default="-", help="NDJSON output path (default stdout)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads; results are identical for any value")
        return p

    p = add("gen", _cmd_gen, help="generate synthetic inputs")
    p.add_argument("--model", required=True, choices=["er", "ba", "rn-forest", "scenario"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--p", type=float, default=0.01)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--histogram", help="component histogram as size:count,size:count,...")
    p.add_argument("--reciprocity", type=float, default=0.65)
    p.add_argument("--osn-model", choices=["ba", "er"], default="ba")
    p.add_argument("--osn-n", type=int, default=50_000)
    p.add_argument("--osn-m", type=int, default=3)
    p.add_argument("--osn-p", type=float, default=0.0002)
    p.add_argument("--seeder-fraction", type=float, default=0.1)
    p.add_argument("--placement", choices=["uniform", "degree_biased"], default="degree_biased")
    p.add_argument("--out-edges", help="edge-list output (er/ba/rn-forest)")
    p.add_argument("--out-rn", help="scenario: recommendation network edge list")
    p.add_argument("--out-osn", help="scenario: social graph edge list")
    p.add_argument("--out-map", help="scenario: seeder map file")

    p = add("components", _cmd_components, help="connected components and size census")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--directed", action="store_true")

    p = add("metrics", _cmd_metrics, help="full structural metric suite")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--path-mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--sources", type=int, default=1000)
    p.add_argument("--sample-seed", type=int, default=0)
    p.add_argument("--exact-limit", type=int, default=100_000)

    p = add("classify", _cmd_classify, help="sender/receiver behavior classes")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--thresholds", default="0.1,0.75,0.9")
    p.add_argument("--ratio-mode", choices=["normalized", "raw"], default="normalized")
    p.add_argument("--per-node", action="store_true")

    p = add("fit", _cmd_fit, help="power-law fit over values or graph degrees")
    p.add_argument("--values", help="whitespace-separated integer sample file")
    p.add_argument("--in", dest="infile", help="graph edge list (fit its degrees)")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--degree-mode", choices=["total", "in", "out"], default="total")
    p.add_argument("--xmin", default="auto", help='integer lower cutoff or "auto"')
    p.add_argument("--xmax", type=int, default=None)

    p = add("crawl", _cmd_crawl, help="level-limited BFS crawl over a friend provider")
    p.add_argument("--graph", help="file-backed provider: ground-truth edge list")
    p.add_argument("--endpoint", help="remote provider host:port")
    p.add_argument("--seeds", required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--timeout", type=float, default=5.0)
    p.add_argument("--retries", type=int, default=2)
    p.add_argument("--delay", type=float, default=0.0)
    p.add_argument("--checkpoint")
    p.add_argument("--checkpoint-every", type=int, default=10_000)
    p.add_argument("--resume")
    p.add_argument("--trace", action="store_true",
                   help="record observed component counts after each expansion")
    p.add_argument("--out-graph", help="write the observed graph as an edge list")

    p = add("extract-tn", _cmd_extract_tn, help="transition network + seeder distance matrix")
    p.add_argument("--osn", required=True)
    p.add_argument("--seeders", help="seed list of social-graph tokens")
    p.add_argument("--map", help="seeder map file (uses its social-graph column)")
    p.add_argument("--induced-edges", action="store_true",
                   help="keep all social edges among kept nodes, not only path edges")
    p.add_argument("--out-tn", help="write the transition network edge list")
    p.add_argument("--out-matrix", required=True)

    p = add("build-ern", _cmd_build_ern, help="extend the recommendation network")
    p.add_argument("--rn", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--map", help="seeder map; translates matrix tokens to RN tokens")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--rn-edge-cost", type=int, choices=[0, 1], default=1)
    p.add_argument("--out-ern", required=True)

    p = add("ern-series", _cmd_ern_series, help="K = 0..kmax extension ladder report")
    p.add_argument("--rn", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--map")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--rn-edge-cost", type=int, choices=[0, 1], default=1)
    p.add_argument("--path-mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--sources", type=int, default=1000)
    p.add_argument("--sample-seed", type=int, default=0)
    p.add_argument("--exact-limit", type=int, default=100_000)

    p = add("expand-ern", _cmd_expand_ern, help="inline canonical paths into the extension")
    p.add_argument("--ern", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--map")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out-graph", required=True)

    p = add("seeder-apl", _cmd_seeder_apl, help="average path length among seeders")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--kind", choices=["undirected", "directed", "weighted"], default="undirected")
    p.add_argument("--seeders")
    p.add_argument("--map")
    p.add_argument("--map-side", choices=["rn", "osn"], default="rn")

    p = add("report", _cmd_report, help="project a run's NDJSON into CSV files")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RecnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
