"""End-to-end driver: per-operation loop, timing, and report rendering.

Insertions run changed-edges -> apply edge -> index update -> match; deletions
run changed-edges -> match -> apply edge -> index update, so destroyed matches
are found while the edge still exists.  Vertex deletions are expanded into
deletions of their incident edges first.  Index build time is reported as
preprocessing and excluded from per-operation timing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from .dag import build_dag
from .dcs import Dcs, UpdateStats, build_dcs, dcs_changed_edges, deletion_update, insertion_update
from .graph import (
    EDGE_DELETE,
    EDGE_INSERT,
    VERTEX_DELETE,
    VERTEX_INSERT,
    Graph,
    LabelTable,
    StreamError,
    UpdateOp,
    apply_update,
    parse_graph,
    parse_query,
    parse_update_stream,
)
from .matching import MatcherConfig, MatchReport, find_matches


@dataclass
class RunConfig:
    graph_path: str
    stream_path: str
    query_path: str
    mode: str = "iso"
    output: str = "count"  # count | enum
    edge_labels: bool = False
    directed: bool = False
    order: str = "estimated"
    isolation: str = "isolated"
    stats: bool = False
    time_limit: float = 0.0  # seconds; 0 disables the limit
    report_path: str | None = None
    figures_dir: str | None = None


@dataclass
class OpOutcome:
    index: int
    kind: str
    polarity: str
    reports: list[MatchReport]
    stats: UpdateStats
    update_seconds: float = 0.0
    match_seconds: float = 0.0
    match_lines: list[str] | None = None

    @property
    def count(self) -> int:
        return self.reports[0].count


@dataclass
class RunReport:
    rows: list[OpOutcome] = field(default_factory=list)
    total_positive: int = 0
    total_negative: int = 0
    preprocess_seconds: float = 0.0
    elapsed_seconds: float = 0.0
    insert_update_seconds: float = 0.0
    insert_match_seconds: float = 0.0
    delete_update_seconds: float = 0.0
    delete_match_seconds: float = 0.0
    truncated: bool = False
    header: list[str] = field(default_factory=list)
    show_stats: bool = False

    def add(self, row: OpOutcome) -> None:
        self.rows.append(row)
        primary = row.reports[0]
        if row.polarity == "+":
            self.total_positive += primary.count
            self.insert_update_seconds += row.update_seconds
            self.insert_match_seconds += row.match_seconds
        else:
            self.total_negative += primary.count
            self.delete_update_seconds += row.update_seconds
            self.delete_match_seconds += row.match_seconds

    def render(self, include_times: bool = True) -> str:
        lines = ["# continuous matching report"]
        lines.extend(self.header)
        for row in self.rows:
            lines.append(f"{row.index} {row.polarity} {row.count}")
            if row.match_lines:
                lines.extend(row.match_lines)
            if self.show_stats:
                s = row.stats
                lines.append(
                    f"# stat op={row.index} updated={s.updated_vertices}"
                    f" visited={s.visited_edges} edcs={s.e_dcs_size}"
                )
        lines.append(
            f"# totals ops={len(self.rows)}"
            f" positive={self.total_positive} negative={self.total_negative}"
        )
        if self.truncated:
            lines.append("# truncated")
        if include_times:
            lines.append(
                "# time"
                f" total={self.elapsed_seconds:.6f}"
                f" preprocess={self.preprocess_seconds:.6f}"
                f" insert-update={self.insert_update_seconds:.6f}"
                f" insert-backtrack={self.insert_match_seconds:.6f}"
                f" delete-update={self.delete_update_seconds:.6f}"
                f" delete-backtrack={self.delete_match_seconds:.6f}"
            )
        return "\n".join(lines) + "\n"


class Engine:
    """One query against one evolving data graph, with any number of matcher
    configurations evaluated per operation (the first one drives the report)."""

    def __init__(
        self,
        g: Graph,
        q: Graph,
        matchers: tuple[MatcherConfig, ...] | None = None,
        *,
        keep_match_lines: bool = False,
    ):
        self.g = g
        self.q = q
        self.matchers = matchers if matchers else (MatcherConfig(),)
        self.keep_match_lines = keep_match_lines
        self.dag = build_dag(q)
        self.dcs: Dcs = build_dcs(g, self.dag)

    # -- helpers -----------------------------------------------------------

    def _resolve_edge(self, op: UpdateOp, index: int | None) -> tuple[int, int]:
        try:
            return self.g.internal(op.u), self.g.internal(op.v)
        except ValueError as exc:
            raise StreamError(str(exc), index) from exc

    def _match_all(self, e_dcs, polarity: str) -> list[MatchReport]:
        reports = []
        for cfg in self.matchers:
            rep = find_matches(self.dcs, e_dcs, cfg)
            rep.polarity = polarity
            reports.append(rep)
        return reports

    def _render_matches(self, report: MatchReport) -> list[str] | None:
        if not self.keep_match_lines or report.matches is None:
            return None
        order = sorted(self.q.vertices(), key=self.q.external)
        lines = []
        for m in report.matches:
            parts = " ".join(
                f"u{self.q.external(u)}:v{self.g.external(m[u])}" for u in order
            )
            lines.append(f"m {parts}")
        return lines

    # -- operations ---------------------------------------------------------

    def apply(self, op: UpdateOp, index: int | None = None) -> OpOutcome:
        stats = UpdateStats()
        if op.kind == EDGE_INSERT:
            t0 = time.perf_counter()
            u, v = self._resolve_edge(op, index)
            e_dcs = dcs_changed_edges(self.g, self.q, u, v, op.edge_label)
            apply_update(self.g, op, index)
            insertion_update(self.dcs, e_dcs, stats)
            t1 = time.perf_counter()
            reports = self._match_all(e_dcs, "+")
            t2 = time.perf_counter()
            return OpOutcome(
                index or 0, op.kind, "+", reports, stats,
                update_seconds=t1 - t0, match_seconds=t2 - t1,
                match_lines=self._render_matches(reports[0]),
            )
        if op.kind == EDGE_DELETE:
            t0 = time.perf_counter()
            u, v = self._resolve_edge(op, index)
            if v not in self.g.out[u]:
                raise StreamError(f"no edge ({op.u}, {op.v})", index)
            e_dcs = dcs_changed_edges(self.g, self.q, u, v, deleting=True)
            t1 = time.perf_counter()
            reports = self._match_all(e_dcs, "-")
            t2 = time.perf_counter()
            apply_update(self.g, op, index)
            deletion_update(self.dcs, e_dcs, stats)
            t3 = time.perf_counter()
            return OpOutcome(
                index or 0, op.kind, "-", reports, stats,
                update_seconds=(t1 - t0) + (t3 - t2), match_seconds=t2 - t1,
                match_lines=self._render_matches(reports[0]),
            )
        if op.kind == VERTEX_INSERT:
            t0 = time.perf_counter()
            apply_update(self.g, op, index)
            self.dcs.add_vertex_pairs(self.g.internal(op.u))
            t1 = time.perf_counter()
            reports = [
                MatchReport(polarity="+", matches=None if c.count_only else [])
                for c in self.matchers
            ]
            return OpOutcome(
                index or 0, op.kind, "+", reports, stats, update_seconds=t1 - t0
            )
        if op.kind == VERTEX_DELETE:
            try:
                v = self.g.internal(op.u)
            except ValueError as exc:
                raise StreamError(str(exc), index) from exc
            incident = [(op.u, self.g.external(w)) for w in self.g.out[v]]
            if self.g.directed:
                incident += [(self.g.external(w), op.u) for w in self.g.inn[v]]
            merged: OpOutcome | None = None
            for a, b in incident:
                sub = self.apply(UpdateOp(EDGE_DELETE, a, b), index)
                if merged is None:
                    merged = sub
                else:
                    for acc, part in zip(merged.reports, sub.reports):
                        acc.count += part.count
                        if acc.matches is not None:
                            acc.matches.extend(part.matches)
                        acc.extensions += part.extensions
                        acc.seeds_expanded += part.seeds_expanded
                    merged.stats.merge(sub.stats)
                    merged.update_seconds += sub.update_seconds
                    merged.match_seconds += sub.match_seconds
                    if merged.match_lines is not None:
                        merged.match_lines.extend(sub.match_lines or [])
            t0 = time.perf_counter()
            self.dcs.remove_vertex_pairs(v)  # needs the label, so before removal
            apply_update(self.g, op, index)
            t1 = time.perf_counter()
            if merged is None:
                reports = [
                    MatchReport(polarity="-", matches=None if c.count_only else [])
                    for c in self.matchers
                ]
                merged = OpOutcome(index or 0, op.kind, "-", reports, stats)
            merged.kind = op.kind
            merged.update_seconds += t1 - t0
            return merged
        raise StreamError(f"unknown op kind {op.kind!r}", index)


def _config_header(config: RunConfig) -> list[str]:
    return [
        "# config"
        f" mode={config.mode} output={config.output}"
        f" order={config.order} isolation={config.isolation}"
        f" edge-labels={'on' if config.edge_labels else 'off'}"
        f" directed={'on' if config.directed else 'off'}"
    ]


def run_continuous_matching(config: RunConfig) -> RunReport:
    """Parse inputs, run the whole stream, optionally write report and figures."""
    vlabels, elabels = LabelTable(), LabelTable()
    kw = dict(
        directed=config.directed, edge_labels=config.edge_labels,
        vlabels=vlabels, elabels=elabels,
    )
    t0 = time.perf_counter()
    g = parse_graph(Path(config.graph_path).read_text(), **kw)
    q = parse_query(Path(config.query_path).read_text(), **kw)
    ops = parse_update_stream(
        Path(config.stream_path).read_text(),
        edge_labels=config.edge_labels, vlabels=vlabels, elabels=elabels,
    )
    matcher = MatcherConfig(
        mode=config.mode,
        order=config.order,
        isolation="leaf" if config.isolation == "leaf" else "isolated",
        count_only=config.output == "count",
    )
    engine = Engine(g, q, (matcher,), keep_match_lines=config.output == "enum")
    report = RunReport(header=_config_header(config), show_stats=config.stats)
    report.preprocess_seconds = time.perf_counter() - t0

    start = time.perf_counter()
    for i, op in enumerate(ops, 1):
        if config.time_limit > 0 and time.perf_counter() - start > config.time_limit:
            report.truncated = True
            break
        report.add(engine.apply(op, i))
    report.elapsed_seconds = time.perf_counter() - start

    if config.report_path:
        Path(config.report_path).write_text(report.render())
    if config.figures_dir:
        from .figures import render_figures

        render_figures(report, config.figures_dir)
    return report
