"""Brute-force reference matcher for differential testing.

Plain recursive backtracking with no candidate filtering: query vertices are
taken in BFS order from vertex 0 and every partially mapped edge is checked
directly against the data graph.  Desk scale only; the size guards reject
anything larger unless explicitly overridden.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import Graph, UpdateOp, apply_update, edge_compatible, pair_requirements

Embedding = tuple[int, ...]

MAX_QUERY_VERTICES = 8
MAX_DATA_VERTICES = 64


def _check_guards(q: Graph, g: Graph, max_query: int, max_data: int) -> None:
    if q.n_vertices() > max_query:
        raise ValueError(f"query too large for the oracle ({q.n_vertices()} vertices)")
    if g.n_vertices() > max_data:
        raise ValueError(f"data graph too large for the oracle ({g.n_vertices()} vertices)")


def _search_plan(q: Graph):
    """BFS vertex order plus, per vertex, its already-ordered neighbors."""
    vertices = q.vertices()
    order = []
    seen = set()
    for start in vertices:  # connected queries need one pass; be safe anyway
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in q.neighbor_ids(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    rank = {u: i for i, u in enumerate(order)}
    anchors = []
    for u in order:
        back = [
            (w, pair_requirements(q, u, w)) for w in q.neighbor_ids(u) if rank[w] < rank[u]
        ]
        anchors.append(back)
    return order, anchors


def enumerate_embeddings(
    q: Graph,
    g: Graph,
    mode: str = "iso",
    *,
    max_query_vertices: int = MAX_QUERY_VERTICES,
    max_data_vertices: int = MAX_DATA_VERTICES,
) -> set[Embedding]:
    """All embeddings (iso) or homomorphisms (hom) of q in g.

    Each result is the tuple of data internal ids in query internal-id order.
    """
    if mode not in ("iso", "hom"):
        raise ValueError(f"bad mode {mode!r}")
    _check_guards(q, g, max_query_vertices, max_data_vertices)
    order, anchors = _search_plan(q)
    if not order:
        return set()
    iso = mode == "iso"
    nq = len(q.vlabel)
    mapping = [-1] * nq
    used: set[int] = set()
    found: set[Embedding] = set()
    out = g.out
    nbr_index = g.nbr_by_label
    depth = len(order)
    labels = [q.vlabel[u] for u in order]
    # one plain forward requirement can be probed without the general check
    fast = [
        [
            (w, reqs[0][1] if len(reqs) == 1 and reqs[0][0] else None, reqs)
            for w, reqs in back
        ]
        for back in anchors
    ]
    add_found = found.add
    use = used.add
    release = used.discard

    def extend(pos: int) -> None:
        u = order[pos]
        back = fast[pos]
        if back:
            pool = nbr_index[mapping[back[0][0]]].get(labels[pos], ())
        else:
            pool = g.of_label.get(labels[pos], ())
        nxt = pos + 1
        last = nxt == depth
        for v in pool:
            if iso and v in used:
                continue
            adj_v = out[v]
            for w, lab, reqs in back:
                if lab is not None:
                    if adj_v.get(mapping[w]) != lab:
                        break
                elif not edge_compatible(g, v, mapping[w], reqs):
                    break
            else:
                mapping[u] = v
                if last:
                    add_found(tuple(mapping))
                    mapping[u] = -1
                    continue
                if iso:
                    use(v)
                extend(nxt)
                mapping[u] = -1
                if iso:
                    release(v)

    extend(0)
    return found


def embedding_uses_edge(q: Graph, m: Embedding, v: int, w: int) -> bool:
    """True if some query edge maps onto data edge (v, w) under m."""
    if q.directed:
        for a, adj in enumerate(q.out):
            if q.vlabel[a] is None:
                continue
            for b in adj:
                if m[a] == v and m[b] == w:
                    return True
        return False
    for a, adj in enumerate(q.out):
        if q.vlabel[a] is None:
            continue
        ma = m[a]
        if ma != v and ma != w:
            continue
        other = w if ma == v else v
        for b in adj:
            if m[b] == other:
                return True
    return False


@dataclass(frozen=True)
class OracleDelta:
    positive: frozenset[Embedding]
    negative: frozenset[Embedding]


def delta_matches(
    q: Graph,
    g: Graph,
    op: UpdateOp,
    mode: str = "iso",
    *,
    max_query_vertices: int = MAX_QUERY_VERTICES,
    max_data_vertices: int = MAX_DATA_VERTICES,
) -> OracleDelta:
    """Matches created/destroyed by one edge op; g itself is left untouched."""
    before = enumerate_embeddings(
        q, g, mode, max_query_vertices=max_query_vertices, max_data_vertices=max_data_vertices
    )
    after_g = g.clone()
    apply_update(after_g, op)
    after = enumerate_embeddings(
        q, after_g, mode,
        max_query_vertices=max_query_vertices, max_data_vertices=max_data_vertices,
    )
    positive = after - before
    negative = before - after
    if op.kind == "+":
        assert not negative, "an insertion destroyed matches"
        v, w = g.internal(op.u), g.internal(op.v)
        witness = {m for m in after if embedding_uses_edge(q, m, v, w)}
        assert positive == witness, "insertion delta != matches through the new edge"
    elif op.kind == "-":
        assert not positive, "a deletion created matches"
        v, w = g.internal(op.u), g.internal(op.v)
        witness = {m for m in before if embedding_uses_edge(q, m, v, w)}
        assert negative == witness, "deletion delta != matches through the old edge"
    return OracleDelta(frozenset(positive), frozenset(negative))


def _injective(m: Embedding) -> bool:
    return len(set(m)) == len(m)


@dataclass(frozen=True)
class StreamDelta:
    iso_positive: frozenset[Embedding]
    iso_negative: frozenset[Embedding]
    hom_positive: frozenset[Embedding]
    hom_negative: frozenset[Embedding]


class StreamOracle:
    """Rolling oracle over a stream: one full enumeration per graph state.

    Homomorphisms are enumerated once per state; embeddings are their
    injective subset, so both modes come out of a single traversal.  The
    injective subset is carried forward incrementally through the deltas.
    """

    def __init__(
        self,
        q: Graph,
        g: Graph,
        *,
        max_query_vertices: int = MAX_QUERY_VERTICES,
        max_data_vertices: int = MAX_DATA_VERTICES,
    ):
        self.q = q
        self.g = g.clone()
        self._max_q = max_query_vertices
        self._max_d = max_data_vertices
        # ordered query pairs; undirected adjacency lists both orientations
        self._qedges = [
            (a, b)
            for a, adj in enumerate(q.out)
            if q.vlabel[a] is not None
            for b in adj
        ]
        self.hom = self._enumerate()
        self.iso = {m for m in self.hom if _injective(m)}

    def _uses(self, m: Embedding, v: int, w: int) -> bool:
        for a, b in self._qedges:
            if m[a] == v and m[b] == w:
                return True
        return False

    def _enumerate(self) -> set[Embedding]:
        return enumerate_embeddings(
            self.q, self.g, "hom",
            max_query_vertices=self._max_q, max_data_vertices=self._max_d,
        )

    def step(self, op: UpdateOp) -> StreamDelta:
        edge_ends = None
        if op.kind in ("+", "-"):
            # resolve before a vertex op could renumber anything
            edge_ends = (self.g.internal(op.u), self.g.internal(op.v))
        before = self.hom
        apply_update(self.g, op)
        after = self._enumerate()
        self.hom = after
        hom_pos = after - before
        hom_neg = before - after
        # the delta-vs-through-the-edge equivalence reduces to checking that
        # every delta element maps a query edge onto the updated edge: a
        # surviving match cannot use an edge that is absent on one side of the
        # op (delta_matches keeps the full two-sided scan; the two agree by
        # test on random streams)
        if op.kind == "+":
            assert not hom_neg, "an insertion destroyed matches"
            v, w = edge_ends
            assert all(
                self._uses(m, v, w) for m in hom_pos
            ), "insertion delta contains a match missing the new edge"
        elif op.kind == "-":
            assert not hom_pos, "a deletion created matches"
            v, w = edge_ends
            assert all(
                self._uses(m, v, w) for m in hom_neg
            ), "deletion delta contains a match missing the old edge"
        iso_pos = frozenset(m for m in hom_pos if _injective(m))
        iso_neg = frozenset(m for m in hom_neg if _injective(m))
        self.iso = (self.iso - iso_neg) | iso_pos
        return StreamDelta(
            iso_positive=iso_pos,
            iso_negative=iso_neg,
            hom_positive=frozenset(hom_pos),
            hom_negative=frozenset(hom_neg),
        )
