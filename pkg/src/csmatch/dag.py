"""Rooted DAG over the query graph: BFS edge directing and parent/child structure.

The root is the vertex maximizing the BFS height (max BFS depth), ties broken
by smallest internal id.  BFS visits neighbors in ascending internal id and
every edge is directed from the earlier- to the later-visited endpoint, so the
visit order is also a topological order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import Graph


@dataclass
class QueryDag:
    q: Graph
    root: int
    order: list[int]  # BFS visit order == topological order
    depth: list[int]
    parents: list[list[int]]
    children: list[list[int]]
    # derived slot structure: nbrs[u] = parents[u] + children[u]
    nbrs: list[list[int]] = field(default_factory=list)
    nbr_slot: list[dict[int, int]] = field(default_factory=list)
    parent_slot: list[dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.nbrs:
            self.nbrs = [p + c for p, c in zip(self.parents, self.children)]
            self.nbr_slot = [{w: i for i, w in enumerate(ns)} for ns in self.nbrs]
            self.parent_slot = [{w: i for i, w in enumerate(ps)} for ps in self.parents]

    def is_parent(self, a: int, b: int) -> bool:
        """True if a is a parent of b."""
        return a in self.parent_slot[b]


def _bfs_depths(q: Graph, root: int) -> list[int]:
    depth = [-1] * len(q.vlabel)
    depth[root] = 0
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in q.neighbor_ids(v):
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                queue.append(w)
    return depth


def dag_height(q: Graph, root: int) -> int:
    """Max BFS depth from root over the query graph."""
    if root < 0 or root >= len(q.vlabel) or q.vlabel[root] is None:
        raise ValueError(f"unknown root {root}")
    return max(d for d in _bfs_depths(q, root) if d >= 0)


def build_dag(q: Graph) -> QueryDag:
    """Direct the query graph into a rooted DAG; deterministic given q."""
    vertices = q.vertices()
    if not vertices:
        raise ValueError("query graph is empty")
    if not q.is_connected():
        raise ValueError("query graph is disconnected")

    root = max(vertices, key=lambda v: (dag_height(q, v), -v))

    order = []
    rank = [-1] * len(q.vlabel)
    depth = [-1] * len(q.vlabel)
    depth[root] = 0
    queue = deque([root])
    rank[root] = 0
    order.append(root)
    while queue:
        v = queue.popleft()
        for w in q.neighbor_ids(v):
            if rank[w] < 0:
                rank[w] = len(order)
                depth[w] = depth[v] + 1
                order.append(w)
                queue.append(w)

    n = len(q.vlabel)
    parents: list[list[int]] = [[] for _ in range(n)]
    children: list[list[int]] = [[] for _ in range(n)]
    for v in vertices:
        for w in q.neighbor_ids(v):
            if rank[w] < rank[v]:
                parents[v].append(w)
            else:
                children[v].append(w)
    return QueryDag(q=q, root=root, order=order, depth=depth, parents=parents, children=children)
