"""Command-line front-end: fetch, analyze, smallworld, snapshots, miners,
export.

Offline-first: blocks are read from the cache and only fetched on a miss;
--offline turns misses into errors. Every output file starts with a
provenance comment header (tool version, config hash, seed, snapshot), and
runs with equal headers are byte-identical below it.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, TextIO

from chaingraph import __version__
from chaingraph.baseline import UNDEFINED, small_world_report
from chaingraph.graph import build_graph, export_edge_csv, export_pajek, project_simple
from chaingraph.ingest import (
    BlockCache,
    BlockRecord,
    IngestError,
    JsonRpcEndpoint,
    SnapshotSpec,
    fetch_range,
)
from chaingraph.metrics import (
    ExactnessPolicy,
    connected_components,
    degree_distribution,
    distance_summary,
    general_metrics,
    largest_component,
    write_degree_csv,
    write_degree_loglog_csv,
)
from chaingraph.miners import miner_distribution, write_distribution_csv, write_miner_csv

RPC_URL_ENV = "CHAINGRAPH_RPC_URL"
DEFAULT_CACHE_DIR = "./chaincache"


@dataclass
class RunConfig:
    command: str
    rpc_url: Optional[str]
    cache_dir: Path
    out_dir: Path
    snapshots: list[SnapshotSpec]
    seed: int = 0
    trials: int = 5
    exact_threshold: int = 50_000
    sample_sources: int = 1_000
    workers: int = 1
    fmt: str = "csv"
    offline: bool = False
    pretty: bool = False

    def policy(self) -> ExactnessPolicy:
        return ExactnessPolicy(self.exact_threshold, self.sample_sources, self.seed)

    def config_hash(self) -> str:
        # Only run-semantic fields; paths and endpoint are excluded so runs
        # into different directories share a hash (and must share bytes).
        payload = json.dumps(
            {
                "command": self.command,
                "snapshots": [s.label() for s in self.snapshots],
                "seed": self.seed,
                "trials": self.trials,
                "exact_threshold": self.exact_threshold,
                "sample_sources": self.sample_sources,
                "format": self.fmt,
                "version": __version__,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def header_lines(self) -> list[str]:
        snapshots = ",".join(s.label() for s in self.snapshots) or "-"
        return [
            f"chaingraph {__version__}",
            f"config={self.config_hash()} seed={self.seed} snapshot={snapshots}",
        ]


def _fmt(value) -> str:
    if value is UNDEFINED:
        return "undefined"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_file(path: Path, header_lines: list[str], body: Callable[[TextIO], None],
                comment: str = "#") -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        for line in header_lines:
            sink.write(f"{comment} {line}\n")
        body(sink)


def _write_csv(path: Path, cfg: RunConfig, columns: list[str], rows: list[list]) -> None:
    def body(sink: TextIO) -> None:
        sink.write(",".join(columns) + "\n")
        for row in rows:
            sink.write(",".join(_fmt(v) for v in row) + "\n")

    _write_file(path, cfg.header_lines(), body)


def _print_table(columns: list[str], rows: list[list]) -> None:
    cells = [columns] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    for r in cells:
        print("  ".join(val.ljust(w) for val, w in zip(r, widths)))


def _endpoint(cfg: RunConfig) -> Optional[JsonRpcEndpoint]:
    if cfg.offline or not cfg.rpc_url:
        return None
    return JsonRpcEndpoint(cfg.rpc_url)


def _load_blocks(cfg: RunConfig, spec: SnapshotSpec,
                 on_block: Optional[Callable[[int, bool], None]] = None) -> list[BlockRecord]:
    cache = BlockCache(cfg.cache_dir)
    return list(
        fetch_range(_endpoint(cfg), spec, cache, offline=cfg.offline, on_block=on_block)
    )


def cmd_fetch(cfg: RunConfig) -> int:
    stats = {"fetched": 0, "hits": 0}

    def on_block(_number: int, from_cache: bool) -> None:
        stats["hits" if from_cache else "fetched"] += 1

    _load_blocks(cfg, cfg.snapshots[0], on_block=on_block)
    print(f"{stats['fetched']} fetched, {stats['hits']} cache hits")
    return 0


def cmd_analyze(cfg: RunConfig) -> int:
    spec = cfg.snapshots[0]
    blocks = _load_blocks(cfg, spec)
    g = build_graph(blocks)
    report = general_metrics(g)
    simple = project_simple(g)
    main = largest_component(simple)

    metrics_cols = [
        "blocks", "nodes", "edges", "avg_clus_coeff", "transitivity",
        "components", "nodes_largest_comp", "edges_largest_comp",
    ]
    metrics_row = [
        spec.count, report.n, report.m, report.avg_clustering, report.transitivity,
        report.num_components, report.largest_component_nodes,
        report.largest_component_edges,
    ]
    _write_csv(cfg.out_dir / "metrics.csv", cfg, metrics_cols, [metrics_row])

    hist = degree_distribution(g, weighted=False)
    _write_file(cfg.out_dir / "degree.csv", cfg.header_lines(),
                lambda sink: write_degree_csv(hist, sink))
    _write_file(cfg.out_dir / "degree_loglog.csv", cfg.header_lines(),
                lambda sink: write_degree_loglog_csv(hist, sink))
    _write_file(cfg.out_dir / "graph.net", cfg.header_lines(),
                lambda sink: export_pajek(g, sink), comment="%")

    if main.n > 0 and main.m > 0:
        summary = distance_summary(main, cfg.policy(), workers=cfg.workers)
        dist_row = [
            main.n, summary.average_distance, summary.diameter, summary.l_method,
            summary.diameter_method,
            summary.sample_sources if summary.sample_sources is not None else "-",
            summary.seed if summary.seed is not None else "-",
        ]
    else:
        dist_row = [main.n, 0.0, 0, "exact", "exact", "-", "-"]
    _write_csv(
        cfg.out_dir / "distances.csv", cfg,
        ["nodes_main_comp", "avg_distance", "diameter", "l_method",
         "diameter_method", "sample_sources", "seed"],
        [dist_row],
    )

    if cfg.pretty or cfg.fmt == "pretty":
        _print_table(metrics_cols, [metrics_row])
    return 0


def cmd_smallworld(cfg: RunConfig) -> int:
    spec = cfg.snapshots[0]
    blocks = _load_blocks(cfg, spec)
    g = build_graph(blocks)
    main = largest_component(project_simple(g))
    if main.n == 0:
        print("error: empty graph, nothing to compare", file=sys.stderr)
        return 1
    report = small_world_report(main, cfg.trials, cfg.seed, cfg.policy(),
                                workers=cfg.workers)
    columns = ["blocks", "nodes", "edges", "cc", "L", "cc_RG", "L_RG", "sigma",
               "trials", "seed"]
    row = [spec.count, report.n, report.m, report.cc, report.avg_distance,
           report.cc_rg, report.l_rg, report.sigma, report.trials, report.seed]
    _write_csv(cfg.out_dir / "smallworld.csv", cfg, columns, [row])
    if cfg.pretty or cfg.fmt == "pretty":
        _print_table(columns, [row])
    return 0


def cmd_snapshots(cfg: RunConfig) -> int:
    if len(cfg.snapshots) < 2:
        print("error: snapshots needs at least two --snapshot specs", file=sys.stderr)
        return 1
    columns = ["start_block", "num_blocks", "nodes", "nodes_main", "edges",
               "edges_main", "components", "avg_distance"]
    rows: list[list] = []
    failures = 0
    for spec in cfg.snapshots:
        try:
            blocks = _load_blocks(cfg, spec)
            g = build_graph(blocks)
            simple = project_simple(g)
            comps = connected_components(simple)
            main = largest_component(simple, comps)
            if main.n > 0 and main.m > 0:
                avg = distance_summary(main, cfg.policy(), workers=cfg.workers).average_distance
            else:
                avg = 0.0
            rows.append([spec.start_block, spec.count, g.n, main.n, g.m, main.m,
                         comps.num_components, avg])
        except (IngestError, ValueError, OSError) as exc:
            failures += 1
            print(f"snapshot {spec.label()} failed: {exc}", file=sys.stderr)
    _write_csv(cfg.out_dir / "snapshots.csv", cfg, columns, rows)
    if cfg.pretty or cfg.fmt == "pretty":
        _print_table(columns, rows)
    return 0 if rows else 1


def cmd_miners(cfg: RunConfig) -> int:
    blocks = _load_blocks(cfg, cfg.snapshots[0])
    hist = miner_distribution(blocks)
    _write_file(cfg.out_dir / "miners.csv", cfg.header_lines(),
                lambda sink: write_miner_csv(hist, sink))
    _write_file(cfg.out_dir / "miner_histogram.csv", cfg.header_lines(),
                lambda sink: write_distribution_csv(hist, sink))
    if cfg.pretty or cfg.fmt == "pretty":
        rows = [[k, hist.distribution[k]] for k in sorted(hist.distribution)]
        _print_table(["blocks_mined", "num_miners"], rows)
    return 0


def cmd_export(cfg: RunConfig) -> int:
    blocks = _load_blocks(cfg, cfg.snapshots[0])
    g = build_graph(blocks)
    if cfg.fmt == "pajek":
        _write_file(cfg.out_dir / "graph.net", cfg.header_lines(),
                    lambda sink: export_pajek(g, sink), comment="%")
    else:
        _write_file(cfg.out_dir / "edges.csv", cfg.header_lines(),
                    lambda sink: export_edge_csv(g, sink))
    return 0


_COMMANDS = {
    "fetch": cmd_fetch,
    "analyze": cmd_analyze,
    "smallworld": cmd_smallworld,
    "snapshots": cmd_snapshots,
    "miners": cmd_miners,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaingraph",
        description="Ethereum transaction networks: ingestion and complex-network metrics",
    )
    parser.add_argument("--version", action="version", version=f"chaingraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("fetch", "populate the block cache for a range"),
        ("analyze", "metrics, degree histograms, distances, Pajek export"),
        ("smallworld", "small-world sigma vs. G(n,m) baselines"),
        ("snapshots", "per-snapshot series over multiple block ranges"),
        ("miners", "blocks-mined-per-miner distribution"),
        ("export", "write the graph as Pajek or edge-list CSV"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--rpc-url", default=os.environ.get(RPC_URL_ENV),
                       help=f"JSON-RPC endpoint (or ${RPC_URL_ENV})")
        p.add_argument("--cache-dir", default=DEFAULT_CACHE_DIR)
        p.add_argument("--start-block", type=int)
        p.add_argument("--num-blocks", type=int)
        p.add_argument("--snapshot", action="append", default=[],
                       metavar="START:COUNT", help="repeatable snapshot spec")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=5)
        p.add_argument("--exact-threshold", type=int, default=50_000)
        p.add_argument("--sample-sources", type=int, default=1_000)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out-dir", default=".")
        p.add_argument("--format", choices=["csv", "pajek", "pretty"], default="csv")
        p.add_argument("--pretty", action="store_true")
        p.add_argument("--offline", action="store_true",
                       help="never touch the network; cache misses are errors")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    snapshots = [SnapshotSpec.parse(s) for s in args.snapshot]
    if args.start_block is not None:
        count = args.num_blocks if args.num_blocks is not None else 1
        snapshots.insert(0, SnapshotSpec(args.start_block, count))
    if not snapshots:
        raise ValueError("no block range given: use --start-block/--num-blocks or --snapshot")
    return RunConfig(
        command=args.command,
        rpc_url=args.rpc_url,
        cache_dir=Path(args.cache_dir),
        out_dir=Path(args.out_dir),
        snapshots=snapshots,
        seed=args.seed,
        trials=args.trials,
        exact_threshold=args.exact_threshold,
        sample_sources=args.sample_sources,
        workers=args.workers,
        fmt=args.format,
        offline=args.offline,
        pretty=args.pretty,
    )


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[args.command](cfg)
    except (IngestError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
