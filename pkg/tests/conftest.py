"""Shared fixtures: the walkthrough instance and randomized trial workloads."""

from __future__ import annotations

import random
from dataclasses import dataclass

import pytest

from csmatch import (
    Graph,
    LabelTable,
    UpdateOp,
    WorkloadParams,
    generate_workload,
    parse_graph,
    parse_query,
    parse_update_stream,
)


def walkthrough_texts() -> tuple[str, str, str]:
    """Fixed five-vertex query and 106-vertex data graph used across the suite.

    Query (external ids): 0:A 1:B 2:C 3:B 4:A with edges
    0-1 0-2 1-3 2-3 2-4 3-4.  Data graph: v1,v2:A; v3,v5,v6:B; v4:C;
    v7..v106:A; v4 touches v1,v2,v6 and v8..v106; v6 touches v7..v106;
    v3 touches v1,v2.  Stream: insert (4,7), then insert (3,6); the second
    insertion creates exactly 200 new matches.
    """
    lines = ["v 1 A", "v 2 A", "v 3 B", "v 4 C", "v 5 B", "v 6 B"]
    lines += [f"v {k} A" for k in range(7, 107)]
    edges = [(1, 3), (2, 3), (1, 4), (2, 4), (4, 6)]
    edges += [(6, k) for k in range(7, 107)]
    edges += [(4, k) for k in range(8, 107)]
    lines += [f"e {a} {b}" for a, b in edges]
    graph_text = "\n".join(lines) + "\n"
    query_text = "\n".join(
        ["v 0 A", "v 1 B", "v 2 C", "v 3 B", "v 4 A",
         "e 0 1", "e 0 2", "e 1 3", "e 2 3", "e 2 4", "e 3 4"]
    ) + "\n"
    stream_text = "+ 4 7\n+ 3 6\n"
    return graph_text, query_text, stream_text


@dataclass
class Instance:
    g: Graph
    q: Graph
    ops: list[UpdateOp]
    vlabels: LabelTable
    elabels: LabelTable


def parse_instance(
    graph_text: str, query_text: str, stream_text: str,
    *, directed: bool = False, edge_labels: bool = False,
) -> Instance:
    vlabels, elabels = LabelTable(), LabelTable()
    kw = dict(directed=directed, edge_labels=edge_labels, vlabels=vlabels, elabels=elabels)
    g = parse_graph(graph_text, **kw)
    q = parse_query(query_text, **kw)
    ops = parse_update_stream(
        stream_text, edge_labels=edge_labels, vlabels=vlabels, elabels=elabels
    )
    return Instance(g, q, ops, vlabels, elabels)


@pytest.fixture
def walkthrough() -> Instance:
    return parse_instance(*walkthrough_texts())


def trial_workload(trial: int, *, ops: int = 50, directed: bool = False,
                   edge_labels: int = 0):
    """Deterministic feasible workload for trial index `trial`.

    Data graphs stay within 15 vertices / 30 edges with 2-4 vertex labels;
    queries take 3-6 edges from a random walk; deletion rates span 0-30
    per 100 insertions.  Infeasible draws (walk trapped in a small
    component) retry with a derived seed.
    """
    rng = random.Random(trial)
    n = rng.randint(6, 15)
    cap = n * (n - 1) // 2
    qe = rng.randint(3, 6)
    params = WorkloadParams(
        vertices=n,
        labels=rng.randint(2, 4),
        edges=rng.randint(max(qe + 3, 8), max(min(30, cap), qe + 4)),
        ops=ops,
        deletion_rate=rng.choice([0, 10, 20, 30]),
        query_edges=qe,
        directed=directed,
        edge_labels=edge_labels,
    )
    last = None
    for attempt in range(100):
        try:
            return generate_workload(trial * 1000 + attempt, params)
        except ValueError as exc:
            last = exc
    raise RuntimeError(f"no feasible workload for trial {trial}: {last}")


def trial_instance(trial: int, **kw) -> Instance:
    wl = trial_workload(trial, **kw)
    return parse_instance(
        wl.graph_text, wl.query_text, wl.stream_text,
        directed=kw.get("directed", False),
        edge_labels=kw.get("edge_labels", 0) > 0,
    )
