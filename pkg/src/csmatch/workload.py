"""Deterministic random workloads: initial graph, update stream, query.

The query is grown by a random walk over the initial graph, so it is
connected by construction and its vertex labels occur in the data.  Vertex
labels are dealt round-robin over a shuffled vertex order, which keeps every
label class at most ceil(n / labels) large.  Deletions are scheduled by an
integer credit of ``deletion_rate`` per insertion, paying out one deletion
per 100 credits, and each one removes a uniformly random current edge.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class WorkloadParams:
    vertices: int
    labels: int
    edges: int
    ops: int
    deletion_rate: int  # deletions per 100 insertions
    query_edges: int
    edge_labels: int = 0  # number of edge labels; 0 disables them
    directed: bool = False


@dataclass
class Workload:
    seed: int
    params: WorkloadParams
    graph_text: str
    stream_text: str
    query_text: str


def _vertex_label_names(params: WorkloadParams, rng: random.Random) -> list[str]:
    order = list(range(params.vertices))
    rng.shuffle(order)
    names = [""] * params.vertices
    for i, v in enumerate(order):
        names[v] = f"L{i % params.labels}"
    return names


def _initial_edges(params: WorkloadParams, rng: random.Random):
    pairs = list(combinations(range(params.vertices), 2))
    cap = len(pairs)
    if params.edges > cap:
        raise ValueError(f"{params.edges} edges exceed simple-graph capacity {cap}")
    rng.shuffle(pairs)
    chosen = pairs[: params.edges]
    if params.directed:
        chosen = [(b, a) if rng.random() < 0.5 else (a, b) for a, b in chosen]
    return chosen


def _edge_label(params: WorkloadParams, rng: random.Random) -> str | None:
    if params.edge_labels <= 0:
        return None
    return f"x{rng.randrange(params.edge_labels)}"


def _random_walk_query(
    params: WorkloadParams,
    adjacency: list[set[int]],
    labels: list[str],
    edge_info: dict[tuple[int, int], tuple[tuple[int, int], str | None]],
    rng: random.Random,
) -> str:
    n = params.vertices
    want = params.query_edges
    if want < 1:
        raise ValueError("query must have at least one edge")
    starts = [v for v in range(n) if adjacency[v]]
    if not starts:
        raise ValueError("initial graph has no edges to walk")
    for _ in range(200):
        at = rng.choice(starts)
        walked: set[tuple[int, int]] = set()
        for _ in range(50 * want):
            nxt = rng.choice(sorted(adjacency[at]))
            walked.add((min(at, nxt), max(at, nxt)))
            at = nxt
            if len(walked) == want:
                break
        if len(walked) == want:
            break
    else:
        raise ValueError(f"could not collect {want} walk edges; graph too small")
    verts = sorted({v for e in walked for v in e})
    remap = {v: i for i, v in enumerate(verts)}
    lines = [f"v {remap[v]} {labels[v]}" for v in verts]
    for pair in sorted(walked):
        (a, b), lab = edge_info[pair]  # true direction of the data edge
        suffix = f" {lab}" if lab is not None else ""
        lines.append(f"e {remap[a]} {remap[b]}{suffix}")
    return "\n".join(lines) + "\n"


def generate_workload(seed: int, params: WorkloadParams) -> Workload:
    rng = random.Random(seed)
    n = params.vertices
    if n < 2:
        raise ValueError("need at least two vertices")
    if params.labels < 1:
        raise ValueError("need at least one label")

    labels = _vertex_label_names(params, rng)
    initial = _initial_edges(params, rng)

    graph_lines = [f"v {v} {labels[v]}" for v in range(n)]
    adjacency: list[set[int]] = [set() for _ in range(n)]
    # current view of the evolving graph, used to pick stream ops
    pair_present: set[tuple[int, int]] = set()
    directed_present: set[tuple[int, int]] = set()
    edge_info: dict[tuple[int, int], tuple[tuple[int, int], str | None]] = {}
    for a, b in initial:
        lab = _edge_label(params, rng)
        suffix = f" {lab}" if lab is not None else ""
        graph_lines.append(f"e {a} {b}{suffix}")
        adjacency[a].add(b)
        adjacency[b].add(a)
        pair_present.add((min(a, b), max(a, b)))
        directed_present.add((a, b))
        edge_info[(min(a, b), max(a, b))] = ((a, b), lab)

    query_text = _random_walk_query(params, adjacency, labels, edge_info, rng)

    stream_lines: list[str] = []
    credit = 0
    cap = n * (n - 1) if params.directed else n * (n - 1) // 2
    for _ in range(params.ops):
        can_delete = bool(directed_present)
        full = len(directed_present) >= cap
        if (credit >= 100 and can_delete) or (full and can_delete):
            a, b = rng.choice(sorted(directed_present))
            stream_lines.append(f"- {a} {b}")
            directed_present.discard((a, b))
            if not params.directed or (b, a) not in directed_present:
                pair_present.discard((min(a, b), max(a, b)))
            if credit >= 100:
                credit -= 100
        elif not full:
            while True:
                a, b = rng.sample(range(n), 2)
                if params.directed:
                    if (a, b) not in directed_present:
                        break
                elif (min(a, b), max(a, b)) not in pair_present:
                    break
            lab = _edge_label(params, rng)
            suffix = f" {lab}" if lab is not None else ""
            stream_lines.append(f"+ {a} {b}{suffix}")
            directed_present.add((a, b))
            pair_present.add((min(a, b), max(a, b)))
            credit += params.deletion_rate
        else:
            break  # complete and nothing deletable: nothing left to do

    graph_text = "\n".join(graph_lines) + "\n"
    stream_text = "\n".join(stream_lines) + ("\n" if stream_lines else "")
    return Workload(seed, params, graph_text, stream_text, query_text)
