"""Candidate-space index over (query vertex, data vertex) pairs.

For every query vertex u, the candidate set C(u) holds the data vertices with
u's label.  Each pair carries two flags computed by dynamic programming over
the query DAG:

``up[u][v]``    there is, for every parent p of u, some candidate of p
                adjacent to v whose own ``up`` flag is set (computed from the
                root downward).
``full[u][v]``  ``up`` holds and, for every child c of u, some candidate of c
                adjacent to v has ``full`` set (computed from the leaves
                upward).  Every match maps u onto a vertex with ``full`` set.

Counter arrays make single-edge maintenance cheap:

``n_up[u][v][i]``       up-flagged candidates of the i-th parent adjacent to v
``n_up_par[u][v]``      parents with a nonzero ``n_up`` slot
``n_full[u][v][j]``     full-flagged candidates of the j-th neighbor adjacent
                        to v (parents first, then children; the parent slots
                        feed the matcher, the child slots feed the flag)
``n_full_child[u][v]``  children with a nonzero ``n_full`` slot

Index edges are never materialized; they are derived on demand from the data
graph adjacency plus candidate (label) membership.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .dag import QueryDag
from .graph import NO_LABEL, Graph, edge_compatible, pair_requirements

Pair = tuple[int, int]
DcsEdge = tuple[Pair, Pair]


@dataclass
class UpdateStats:
    """Per-operation maintenance counters; reset for every operation."""

    updated_vertices: int = 0
    visited_edges: int = 0
    e_dcs_size: int = 0
    flipped: list[Pair] = field(default_factory=list)

    def merge(self, other: "UpdateStats") -> None:
        self.updated_vertices += other.updated_vertices
        self.visited_edges += other.visited_edges
        self.e_dcs_size += other.e_dcs_size
        self.flipped.extend(other.flipped)


class Dcs:
    """Flags and counters for all candidate pairs of one query over one graph."""

    def __init__(self, g: Graph, dag: QueryDag):
        self.g = g
        self.dag = dag
        self.q = dag.q
        n = len(self.q.vlabel)
        # requirement descriptors parallel to dag.nbrs[u]
        self.reqs: list[list[tuple]] = [
            [pair_requirements(self.q, u, w) for w in dag.nbrs[u]] for u in range(n)
        ]
        # single undirected unlabeled edge per adjacent pair: the label bucket
        # already proves compatibility, so per-edge checks can be skipped
        self.simple = not g.edge_labels and not g.directed and not self.q.directed
        self.up: list[dict[int, int]] = [{} for _ in range(n)]
        self.full: list[dict[int, int]] = [{} for _ in range(n)]
        self.n_up: list[dict[int, list[int]]] = [{} for _ in range(n)]
        self.n_up_par: list[dict[int, int]] = [{} for _ in range(n)]
        self.n_full: list[dict[int, list[int]]] = [{} for _ in range(n)]
        self.n_full_child: list[dict[int, int]] = [{} for _ in range(n)]
        self._build()

    # -- construction -------------------------------------------------------

    def candidates(self, u: int) -> list[int]:
        return self.g.of_label.get(self.q.vlabel[u], [])

    def _count_flagged(self, flags: dict[int, int], v: int, lbl: int, reqs) -> int:
        """Flagged candidates with label lbl adjacent to v (edge-checked)."""
        bucket = self.g.nbr_by_label[v].get(lbl)
        if not bucket:
            return 0
        if self.simple:
            return sum(1 for w in bucket if flags[w])
        g = self.g
        return sum(1 for w in bucket if flags[w] and edge_compatible(g, v, w, reqs))

    def _build(self) -> None:
        dag, q = self.dag, self.q
        for u in range(len(q.vlabel)):
            npar = len(dag.parents[u])
            nnbr = len(dag.nbrs[u])
            n_up_u, n_up_par_u = self.n_up[u], self.n_up_par[u]
            n_full_u, n_full_child_u = self.n_full[u], self.n_full_child[u]
            up_u, full_u = self.up[u], self.full[u]
            for v in self.candidates(u):
                n_up_u[v] = [0] * npar
                n_up_par_u[v] = 0
                n_full_u[v] = [0] * nnbr
                n_full_child_u[v] = 0
                up_u[v] = 0
                full_u[v] = 0
        # top-down pass
        for u in dag.order:
            pars = dag.parents[u]
            up_u = self.up[u]
            if not pars:
                for v in up_u:
                    up_u[v] = 1
                continue
            reqs_u = self.reqs[u]
            for v in up_u:
                arr = self.n_up[u][v]
                sat = 0
                for i, p in enumerate(pars):
                    c = self._count_flagged(self.up[p], v, q.vlabel[p], reqs_u[i])
                    arr[i] = c
                    if c:
                        sat += 1
                self.n_up_par[u][v] = sat
                if sat == len(pars):
                    up_u[v] = 1
        # bottom-up pass (child slots come after the parent slots)
        for u in reversed(dag.order):
            pars, kids = dag.parents[u], dag.children[u]
            off = len(pars)
            reqs_u = self.reqs[u]
            up_u, full_u = self.up[u], self.full[u]
            for v in full_u:
                arr = self.n_full[u][v]
                sat = 0
                for k, c_q in enumerate(kids):
                    c = self._count_flagged(self.full[c_q], v, q.vlabel[c_q], reqs_u[off + k])
                    arr[off + k] = c
                    if c:
                        sat += 1
                self.n_full_child[u][v] = sat
                if up_u[v] and sat == len(kids):
                    full_u[v] = 1
        # parent slots of n_full need every flag finalized first
        for u in range(len(q.vlabel)):
            pars = dag.parents[u]
            if not pars:
                continue
            reqs_u = self.reqs[u]
            for v, arr in self.n_full[u].items():
                for i, p in enumerate(pars):
                    arr[i] = self._count_flagged(self.full[p], v, q.vlabel[p], reqs_u[i])

    # -- vertex maintenance --------------------------------------------------

    def add_vertex_pairs(self, v: int) -> None:
        """Register a fresh (edge-less) data vertex in every matching C(u)."""
        lbl = self.g.vlabel[v]
        dag = self.dag
        for u in range(len(self.q.vlabel)):
            if self.q.vlabel[u] != lbl:
                continue
            self.n_up[u][v] = [0] * len(dag.parents[u])
            self.n_up_par[u][v] = 0
            self.n_full[u][v] = [0] * len(dag.nbrs[u])
            self.n_full_child[u][v] = 0
            up = 1 if not dag.parents[u] else 0
            self.up[u][v] = up
            self.full[u][v] = 1 if up and not dag.children[u] else 0

    def remove_vertex_pairs(self, v: int) -> None:
        """Drop a (now edge-less) data vertex from every C(u)."""
        lbl = self.g.vlabel[v]
        for u in range(len(self.q.vlabel)):
            if self.q.vlabel[u] != lbl:
                continue
            del self.n_up[u][v]
            del self.n_up_par[u][v]
            del self.n_full[u][v]
            del self.n_full_child[u][v]
            del self.up[u][v]
            del self.full[u][v]

    # -- inspection ----------------------------------------------------------

    def counter_entries(self) -> int:
        """Allocated counter-array entries (the four N arrays)."""
        total = 0
        for per_u in self.n_up:
            total += sum(len(a) for a in per_u.values())
        for per_u in self.n_full:
            total += sum(len(a) for a in per_u.values())
        total += sum(len(per_u) for per_u in self.n_up_par)
        total += sum(len(per_u) for per_u in self.n_full_child)
        return total

    def snapshot(self):
        """Deep copy of all flags and counters, for exact state comparison."""
        return (
            [dict(d) for d in self.up],
            [dict(d) for d in self.full],
            [{v: list(a) for v, a in d.items()} for d in self.n_up],
            [dict(d) for d in self.n_up_par],
            [{v: list(a) for v, a in d.items()} for d in self.n_full],
            [dict(d) for d in self.n_full_child],
        )

    def same_state(self, other: "Dcs") -> bool:
        return (
            self.up == other.up
            and self.full == other.full
            and self.n_up == other.n_up
            and self.n_up_par == other.n_up_par
            and self.n_full == other.n_full
            and self.n_full_child == other.n_full_child
        )

    def pair_degree(self, u: int, v: int) -> int:
        """Number of index edges incident to pair (u, v)."""
        deg = 0
        for slot, w in enumerate(self.dag.nbrs[u]):
            bucket = self.g.nbr_by_label[v].get(self.q.vlabel[w], ())
            if self.simple:
                deg += len(bucket)
            else:
                reqs = self.reqs[u][slot]
                deg += sum(1 for x in bucket if edge_compatible(self.g, v, x, reqs))
        return deg

    def verify(self) -> None:
        """Recount every counter and flag from its definition; fail fast on drift."""
        fresh = Dcs(self.g, self.dag)
        if not self.same_state(fresh):
            raise AssertionError("candidate index inconsistent with a fresh rebuild")


def build_dcs(g: Graph, dag: QueryDag) -> Dcs:
    return Dcs(g, dag)


# -- changed-edge computation -----------------------------------------------


def _compat_with_insert(g: Graph, v: int, w: int, reqs, lab: int) -> bool:
    # evaluates compatibility as if the pending edge v->w (label lab) were applied
    for from_v, need in reqs:
        a, b = (v, w) if from_v else (w, v)
        have = g.out[a].get(b)
        if have is None:
            supplied = (a, b) == (v, w) if g.directed else True
            if not (supplied and lab == need):
                return False
        elif have != need:
            return False
    return True


def _compat_with_delete(g: Graph, v: int, w: int, reqs) -> bool:
    # evaluates compatibility as if the pending edge v->w were removed
    for from_v, need in reqs:
        a, b = (v, w) if from_v else (w, v)
        if g.out[a].get(b) != need:
            return False
        if not g.directed or (a, b) == (v, w):
            return False
    return True


def dcs_changed_edges(
    g: Graph, q: Graph, v: int, w: int, elabel: int = NO_LABEL, *, deleting: bool = False
) -> list[DcsEdge]:
    """Index edges toggled by updating data edge (v, w); internal ids.

    For insertion the edge must not be in g yet; for deletion it must still be
    present.  Both orientations of label-symmetric query edges are returned.
    """
    lv, lw = g.vlabel[v], g.vlabel[w]
    out: list[DcsEdge] = []
    for a in range(len(q.vlabel)):
        if q.vlabel[a] != lv:
            continue
        for b in q.neighbor_ids(a):
            if q.vlabel[b] != lw:
                continue
            reqs = pair_requirements(q, a, b)
            before = edge_compatible(g, v, w, reqs)
            if deleting:
                after = _compat_with_delete(g, v, w, reqs)
            else:
                after = _compat_with_insert(g, v, w, reqs, elabel)
            if before != after:
                out.append(((a, v), (b, w)))
    return out


# -- incremental maintenance --------------------------------------------------


class _Updater:
    """One maintenance run; seed gating uses flag values from the op start."""

    def __init__(self, dcs: Dcs, stats: UpdateStats):
        self.dcs = dcs
        self.stats = stats
        self.q1: deque[Pair] = deque()
        self.q2: deque[Pair] = deque()
        self._flipped: set[Pair] = set()

    def _flip(self, u: int, v: int) -> None:
        # a pair whose two flags both change still counts once
        if (u, v) not in self._flipped:
            self._flipped.add((u, v))
            self.stats.updated_vertices += 1
            self.stats.flipped.append((u, v))

    def _pre_flags(self, edges: list[DcsEdge]) -> dict[Pair, tuple[int, int]]:
        dcs = self.dcs
        pre = {}
        for e in edges:
            for u, v in e:
                if (u, v) not in pre:
                    pre[(u, v)] = (dcs.up[u][v], dcs.full[u][v])
        return pre

    def _orient(self, edge: DcsEdge) -> tuple[Pair, Pair]:
        (a, va), (b, vb) = edge
        if self.dcs.dag.is_parent(a, b):
            return (a, va), (b, vb)
        return (b, vb), (a, va)

    # insertion ----------------------------------------------------------

    def _ins_topdown(self, u: int, uc: int, vc: int) -> None:
        dcs = self.dcs
        slot = dcs.dag.parent_slot[uc][u]
        arr = dcs.n_up[uc][vc]
        if arr[slot] == 0:
            dcs.n_up_par[uc][vc] += 1
            if dcs.n_up_par[uc][vc] == len(dcs.dag.parents[uc]):
                dcs.up[uc][vc] = 1
                self._flip(uc, vc)
                self.q1.append((uc, vc))
                if dcs.n_full_child[uc][vc] == len(dcs.dag.children[uc]):
                    dcs.full[uc][vc] = 1
                    self._flip(uc, vc)
                    self.q2.append((uc, vc))
        arr[slot] += 1

    def _ins_bottomup(self, u: int, up_q: int, vp: int) -> None:
        dcs = self.dcs
        slot = dcs.dag.nbr_slot[up_q][u]
        arr = dcs.n_full[up_q][vp]
        if arr[slot] == 0:
            dcs.n_full_child[up_q][vp] += 1
            if (
                dcs.up[up_q][vp] == 1
                and dcs.n_full_child[up_q][vp] == len(dcs.dag.children[up_q])
            ):
                dcs.full[up_q][vp] = 1
                self._flip(up_q, vp)
                self.q2.append((up_q, vp))
        arr[slot] += 1

    def _nbr_pairs(self, u: int, v: int, w: int, slot: int):
        """Index-edge neighbors of pair (u, v) along query vertex w."""
        dcs = self.dcs
        bucket = dcs.g.nbr_by_label[v].get(dcs.q.vlabel[w])
        if not bucket:
            return ()
        if dcs.simple:
            return bucket
        reqs = dcs.reqs[u][slot]
        g = dcs.g
        return [x for x in bucket if edge_compatible(g, v, x, reqs)]

    def insert(self, edges: list[DcsEdge]) -> None:
        dcs, stats = self.dcs, self.stats
        dag = dcs.dag
        pre = self._pre_flags(edges)
        stats.e_dcs_size += len(edges)
        stats.visited_edges += len(edges)
        for edge in edges:
            (p, vp), (c, vc) = self._orient(edge)
            pre_p_up, pre_p_full = pre[(p, vp)]
            _, pre_c_full = pre[(c, vc)]
            if pre_p_up:
                self._ins_topdown(p, c, vc)
            if pre_c_full:
                self._ins_bottomup(c, p, vp)
            if pre_p_full:
                dcs.n_full[c][vc][dag.nbr_slot[c][p]] += 1
            while self.q1:
                u, v = self.q1.popleft()
                off = len(dag.parents[u])
                for k, uc in enumerate(dag.children[u]):
                    for x in self._nbr_pairs(u, v, uc, off + k):
                        stats.visited_edges += 1
                        self._ins_topdown(u, uc, x)
            while self.q2:
                u, v = self.q2.popleft()
                for i, up_q in enumerate(dag.parents[u]):
                    for x in self._nbr_pairs(u, v, up_q, i):
                        stats.visited_edges += 1
                        self._ins_bottomup(u, up_q, x)
                off = len(dag.parents[u])
                for k, uc in enumerate(dag.children[u]):
                    slot_back = dag.nbr_slot[uc][u]
                    for x in self._nbr_pairs(u, v, uc, off + k):
                        stats.visited_edges += 1
                        dcs.n_full[uc][x][slot_back] += 1

    # deletion -----------------------------------------------------------

    def _del_topdown(self, u: int, uc: int, vc: int) -> None:
        dcs = self.dcs
        slot = dcs.dag.parent_slot[uc][u]
        arr = dcs.n_up[uc][vc]
        if arr[slot] <= 0:
            raise RuntimeError(f"counter underflow in n_up[{uc}][{vc}]")
        arr[slot] -= 1
        if arr[slot] == 0:
            if dcs.up[uc][vc] == 1:
                dcs.up[uc][vc] = 0
                self._flip(uc, vc)
                self.q1.append((uc, vc))
                if dcs.full[uc][vc] == 1:
                    dcs.full[uc][vc] = 0
                    self._flip(uc, vc)
                    self.q2.append((uc, vc))
            dcs.n_up_par[uc][vc] -= 1

    def _del_bottomup(self, u: int, up_q: int, vp: int) -> None:
        dcs = self.dcs
        slot = dcs.dag.nbr_slot[up_q][u]
        arr = dcs.n_full[up_q][vp]
        if arr[slot] <= 0:
            raise RuntimeError(f"counter underflow in n_full[{up_q}][{vp}]")
        arr[slot] -= 1
        if arr[slot] == 0:
            if dcs.full[up_q][vp] == 1:
                dcs.full[up_q][vp] = 0
                self._flip(up_q, vp)
                self.q2.append((up_q, vp))
            dcs.n_full_child[up_q][vp] -= 1

    def delete(self, edges: list[DcsEdge]) -> None:
        dcs, stats = self.dcs, self.stats
        dag = dcs.dag
        pre = self._pre_flags(edges)
        stats.e_dcs_size += len(edges)
        stats.visited_edges += len(edges)
        for edge in edges:
            (p, vp), (c, vc) = self._orient(edge)
            pre_p_up, pre_p_full = pre[(p, vp)]
            _, pre_c_full = pre[(c, vc)]
            if pre_p_up:
                self._del_topdown(p, c, vc)
            if pre_c_full:
                self._del_bottomup(c, p, vp)
            if pre_p_full:
                slot = dag.nbr_slot[c][p]
                arr = dcs.n_full[c][vc]
                if arr[slot] <= 0:
                    raise RuntimeError(f"counter underflow in n_full[{c}][{vc}]")
                arr[slot] -= 1
            while self.q1:
                u, v = self.q1.popleft()
                off = len(dag.parents[u])
                for k, uc in enumerate(dag.children[u]):
                    for x in self._nbr_pairs(u, v, uc, off + k):
                        stats.visited_edges += 1
                        self._del_topdown(u, uc, x)
            while self.q2:
                u, v = self.q2.popleft()
                for i, up_q in enumerate(dag.parents[u]):
                    for x in self._nbr_pairs(u, v, up_q, i):
                        stats.visited_edges += 1
                        self._del_bottomup(u, up_q, x)
                off = len(dag.parents[u])
                for k, uc in enumerate(dag.children[u]):
                    slot_back = dag.nbr_slot[uc][u]
                    for x in self._nbr_pairs(u, v, uc, off + k):
                        stats.visited_edges += 1
                        arr = dcs.n_full[uc][x]
                        if arr[slot_back] <= 0:
                            raise RuntimeError(
                                f"counter underflow in n_full[{uc}][{x}]"
                            )
                        arr[slot_back] -= 1


def insertion_update(dcs: Dcs, e_dcs: list[DcsEdge], stats: UpdateStats | None = None) -> None:
    """Maintain flags and counters after the data edge has been inserted."""
    _Updater(dcs, stats if stats is not None else UpdateStats()).insert(e_dcs)


def deletion_update(dcs: Dcs, e_dcs: list[DcsEdge], stats: UpdateStats | None = None) -> None:
    """Maintain flags and counters after the data edge has been removed."""
    _Updater(dcs, stats if stats is not None else UpdateStats()).delete(e_dcs)
