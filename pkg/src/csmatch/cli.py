"""Command line entry points: run a matching session or generate a workload."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .graph import LabelTable, ParseError, StreamError, parse_graph, parse_query, parse_update_stream
from .harness import RunConfig, run_continuous_matching
from .oracle import StreamOracle, enumerate_embeddings
from .workload import WorkloadParams, generate_workload


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csmatch",
        description="Continuous subgraph matching over a dynamic labeled graph.",
    )
    sub = parser.add_subparsers(dest="command", metavar="{run,gen}", required=True)

    run = sub.add_parser("run", help="process an update stream against a query")
    run.add_argument("--graph", required=True, help="initial graph file")
    run.add_argument("--stream", required=True, help="update stream file")
    run.add_argument("--query", required=True, help="query graph file")
    run.add_argument("--mode", choices=("iso", "hom"), default="iso")
    run.add_argument("--output", choices=("count", "enum"), default="count")
    run.add_argument("--order", choices=("estimated", "exact"), default="estimated")
    run.add_argument("--isolation", choices=("iso", "leaf"), default="iso",
                     help="postpone isolated vertices (iso) or only leaves (leaf)")
    run.add_argument("--edge-labels", action="store_true")
    run.add_argument("--directed", action="store_true")
    run.add_argument("--stats", action="store_true", help="emit '# stat' lines")
    run.add_argument("--time-limit", type=float, default=0.0, metavar="SECONDS")
    run.add_argument("--report", metavar="FILE", help="also write the report here")
    run.add_argument("--figures", metavar="DIR", help="render summary figures into DIR")

    gen = sub.add_parser("gen", help="generate a random graph/stream/query workload")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--vertices", type=int, default=10)
    gen.add_argument("--labels", type=int, default=2)
    gen.add_argument("--edges", type=int, default=15)
    gen.add_argument("--ops", type=int, default=20)
    gen.add_argument("--deletion-rate", type=int, default=0,
                     help="deletions per 100 insertions")
    gen.add_argument("--query-edges", type=int, default=4)
    gen.add_argument("--edge-labels", type=int, default=0,
                     help="number of edge labels; 0 disables them")
    gen.add_argument("--directed", action="store_true")
    gen.add_argument("--out-prefix", required=True, metavar="PREFIX")

    # undocumented debugging aid: brute-force counts, no index involved
    oracle = sub.add_parser("oracle")
    oracle.add_argument("--graph", required=True)
    oracle.add_argument("--query", required=True)
    oracle.add_argument("--stream")
    oracle.add_argument("--mode", choices=("iso", "hom"), default="iso")
    oracle.add_argument("--edge-labels", action="store_true")
    oracle.add_argument("--directed", action="store_true")
    oracle.add_argument("--max-data-vertices", type=int, default=64)
    return parser


def _cmd_run(args) -> int:
    config = RunConfig(
        graph_path=args.graph,
        stream_path=args.stream,
        query_path=args.query,
        mode=args.mode,
        output=args.output,
        order=args.order,
        isolation="leaf" if args.isolation == "leaf" else "isolated",
        edge_labels=args.edge_labels,
        directed=args.directed,
        stats=args.stats,
        time_limit=args.time_limit,
        report_path=args.report,
        figures_dir=args.figures,
    )
    report = run_continuous_matching(config)
    sys.stdout.write(report.render())
    return 0


def _cmd_gen(args) -> int:
    params = WorkloadParams(
        vertices=args.vertices,
        labels=args.labels,
        edges=args.edges,
        ops=args.ops,
        deletion_rate=args.deletion_rate,
        query_edges=args.query_edges,
        edge_labels=args.edge_labels,
        directed=args.directed,
    )
    wl = generate_workload(args.seed, params)
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    for suffix, text in (
        (".graph", wl.graph_text),
        (".stream", wl.stream_text),
        (".query", wl.query_text),
    ):
        path = prefix.with_name(prefix.name + suffix)
        path.write_text(text)
        print(path)
    return 0


def _cmd_oracle(args) -> int:
    vlabels, elabels = LabelTable(), LabelTable()
    kw = dict(directed=args.directed, edge_labels=args.edge_labels,
              vlabels=vlabels, elabels=elabels)
    g = parse_graph(Path(args.graph).read_text(), **kw)
    q = parse_query(Path(args.query).read_text(), **kw)
    if not args.stream:
        found = enumerate_embeddings(q, g, args.mode, max_data_vertices=args.max_data_vertices)
        print(len(found))
        return 0
    ops = parse_update_stream(Path(args.stream).read_text(),
                              edge_labels=args.edge_labels, vlabels=vlabels, elabels=elabels)
    oracle = StreamOracle(q, g, max_data_vertices=args.max_data_vertices)
    for i, op in enumerate(ops, 1):
        delta = oracle.step(op)
        if args.mode == "iso":
            pos, neg = len(delta.iso_positive), len(delta.iso_negative)
        else:
            pos, neg = len(delta.hom_positive), len(delta.hom_negative)
        polarity = "-" if op.kind in ("-", "v-") else "+"
        print(f"{i} {polarity} {neg if polarity == '-' else pos}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "gen":
            return _cmd_gen(args)
        return _cmd_oracle(args)
    except (ParseError, StreamError, ValueError, OSError) as exc:
        print(f"csmatch: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
