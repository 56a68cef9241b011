"""Backtracking search for all matches that touch an updated index edge.

Each search is seeded with one updated edge whose two pairs both carry the
``full`` flag, then grown one extendable query vertex at a time.  The next
vertex is chosen by the smallest estimated candidate count, with vertices
whose neighbors are all mapped (their candidate set can no longer shrink)
postponed to the end.  When one data-edge update toggles several index edges,
an embedding is reported only from the lowest-index seed it contains, so every
match is emitted exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dcs import Dcs, DcsEdge
from .graph import edge_compatible

INF = float("inf")

#: selection outcome meaning "some finalized vertex has no usable candidate"
BACKTRACK = object()


@dataclass(frozen=True)
class MatcherConfig:
    mode: str = "iso"  # iso | hom
    order: str = "estimated"  # estimated | exact
    isolation: str = "isolated"  # isolated | leaf
    count_only: bool = False
    verify_estimates: bool = False

    def __post_init__(self):
        if self.mode not in ("iso", "hom"):
            raise ValueError(f"bad mode {self.mode!r}")
        if self.order not in ("estimated", "exact"):
            raise ValueError(f"bad order {self.order!r}")
        if self.isolation not in ("isolated", "leaf"):
            raise ValueError(f"bad isolation {self.isolation!r}")


@dataclass
class MatchReport:
    polarity: str = "+"
    count: int = 0
    matches: list[tuple[int, ...]] | None = None
    extensions: int = 0
    seeds_expanded: int = 0
    estimate_checks: int = 0
    estimate_violations: int = 0
    op_index: int | None = None


class PartialEmbedding:
    """Mapping under construction plus the bookkeeping the search needs."""

    def __init__(self, dcs: Dcs, iso: bool):
        self.dcs = dcs
        self.g = dcs.g
        self.q = dcs.q
        self.dag = dcs.dag
        self.iso = iso
        n = len(self.q.vlabel)
        self.mapping: list[int] = [-1] * n
        self.size = 0
        self.used: set[int] = set()
        self.mapped_nbrs: list[int] = [0] * n
        self.estimate: list[float] = [INF] * n
        self._undo: list[tuple[int, float]] = []
        self._frames: list[int] = []

    def assign(self, u: int, v: int) -> None:
        self.mapping[u] = v
        self.size += 1
        if self.iso:
            self.used.add(v)
        for w in self.dag.nbrs[u]:
            self.mapped_nbrs[w] += 1

    def unassign(self, u: int) -> None:
        v = self.mapping[u]
        self.mapping[u] = -1
        self.size -= 1
        if self.iso:
            self.used.discard(v)
        for w in self.dag.nbrs[u]:
            self.mapped_nbrs[w] -= 1

    def update_embedding(self, u: int) -> None:
        """Shrink the estimates of u's unmapped neighbors; remember old values."""
        mapping = self.mapping
        estimate = self.estimate
        undo = self._undo
        counts = self.dcs.n_full[u][mapping[u]]
        pushed = 0
        for slot, w in enumerate(self.dag.nbrs[u]):
            if mapping[w] >= 0:
                continue
            val = counts[slot]
            if val < estimate[w]:
                undo.append((w, estimate[w]))
                estimate[w] = val
                pushed += 1
        self._frames.append(pushed)

    def restore_embedding(self, u: int) -> None:
        """Pop exactly the estimate entries pushed by the matching update."""
        if not self._frames:
            raise RuntimeError("restore without matching update")
        for _ in range(self._frames.pop()):
            w, old = self._undo.pop()
            self.estimate[w] = old

    def extendable_vertices(self) -> list[int]:
        return [
            u
            for u in range(len(self.mapping))
            if self.mapping[u] < 0 and self.mapped_nbrs[u] > 0
        ]

    def is_isolated(self, u: int) -> bool:
        """Extendable with every neighbor mapped; its candidates are final."""
        return self.mapped_nbrs[u] == len(self.dag.nbrs[u])


def _pick_anchor(dcs: Dcs, pe: PartialEmbedding, u: int):
    """Mapped neighbor of u with the smallest candidate counter toward u."""
    dag = pe.dag
    mapping = pe.mapping
    n_full = dcs.n_full
    nbr_slot = dag.nbr_slot
    best_slot = -1
    best_u = -1
    best = None
    for slot, w in enumerate(dag.nbrs[u]):
        mw = mapping[w]
        if mw < 0:
            continue
        val = n_full[w][mw][nbr_slot[w][u]]
        if best is None or val < best or (val == best and w < best_u):
            best = val
            best_u = w
            best_slot = slot
    if best is None:
        raise ValueError(f"vertex {u} has no mapped neighbor")
    anchor = mapping[best_u]
    bucket = dcs.g.nbr_by_label[anchor].get(dcs.q.vlabel[u], ())
    return best_u, best_slot, anchor, bucket


def _other_checks(dcs: Dcs, pe: PartialEmbedding, u: int, best_u: int):
    """(image, reqs-or-None) for every mapped neighbor besides the anchor."""
    checks = []
    mapping = pe.mapping
    for slot, w in enumerate(pe.dag.nbrs[u]):
        if w == best_u or mapping[w] < 0:
            continue
        checks.append((mapping[w], None if dcs.simple else dcs.reqs[u][slot]))
    return checks


def compute_extendable_candidates(dcs: Dcs, pe: PartialEmbedding, u: int) -> list[int]:
    """Candidates of u adjacent to the images of all of u's mapped neighbors.

    Scans the neighborhood of the mapped neighbor with the smallest counter
    rather than the whole candidate set.  Used data vertices are not excluded
    here; the caller skips them when extending under isomorphism.
    """
    best_u, best_slot, anchor, bucket = _pick_anchor(dcs, pe, u)
    if not bucket:
        return []
    g = pe.g
    full_u = dcs.full[u]
    if dcs.simple:
        cands = [v for v in bucket if full_u[v]]
    else:
        # requirements are phrased from u's side: candidate first
        reqs = dcs.reqs[u][best_slot]
        cands = [
            v for v in bucket if full_u[v] and edge_compatible(g, v, anchor, reqs)
        ]
    checks = _other_checks(dcs, pe, u, best_u)
    if not checks or not cands:
        return cands
    out = []
    adj = g.out
    for v in cands:
        for mw, reqs in checks:
            if reqs is None:
                if mw not in adj[v]:
                    break
            elif not edge_compatible(g, v, mw, reqs):
                break
        else:
            out.append(v)
    return out


def count_extendable_candidates(dcs: Dcs, pe: PartialEmbedding, u: int) -> int:
    """len(compute_extendable_candidates(...)) without building the list."""
    best_u, best_slot, anchor, bucket = _pick_anchor(dcs, pe, u)
    if not bucket:
        return 0
    g = pe.g
    full_u = dcs.full[u]
    reqs0 = None if dcs.simple else dcs.reqs[u][best_slot]
    checks = _other_checks(dcs, pe, u, best_u)
    adj = g.out
    n = 0
    for v in bucket:
        if not full_u[v]:
            continue
        if reqs0 is not None and not edge_compatible(g, v, anchor, reqs0):
            continue
        for mw, reqs in checks:
            if reqs is None:
                if mw not in adj[v]:
                    break
            elif not edge_compatible(g, v, mw, reqs):
                break
        else:
            n += 1
    return n


def has_usable_candidate(
    dcs: Dcs, pe: PartialEmbedding, u: int, used: set[int] | None
) -> bool:
    """Early-exit probe: does u keep any candidate not ruled out (or used)?"""
    best_u, best_slot, anchor, bucket = _pick_anchor(dcs, pe, u)
    if not bucket:
        return False
    g = pe.g
    full_u = dcs.full[u]
    reqs0 = None if dcs.simple else dcs.reqs[u][best_slot]
    checks = _other_checks(dcs, pe, u, best_u)
    adj = g.out
    for v in bucket:
        if not full_u[v] or (used is not None and v in used):
            continue
        if reqs0 is not None and not edge_compatible(g, v, anchor, reqs0):
            continue
        for mw, reqs in checks:
            if reqs is None:
                if mw not in adj[v]:
                    break
            elif not edge_compatible(g, v, mw, reqs):
                break
        else:
            return True
    return False


class _Search:
    def __init__(self, dcs: Dcs, e_dcs: list[DcsEdge], config: MatcherConfig):
        self.dcs = dcs
        self.e_dcs = e_dcs
        self.config = config
        self.iso = config.mode == "iso"
        self.exact = config.order == "exact"
        self.leaf_only = config.isolation == "leaf"
        self.verify = config.verify_estimates
        self.pe = PartialEmbedding(dcs, self.iso)
        self.report = MatchReport(matches=None if config.count_only else [])
        if self.leaf_only:
            q = dcs.q
            self.is_leaf = [len(dcs.dag.nbrs[u]) == 1 for u in range(len(q.vlabel))]

    def run(self) -> MatchReport:
        full = self.dcs.full
        pe = self.pe
        for i, ((a, va), (b, vb)) in enumerate(self.e_dcs):
            if not (full[a][va] and full[b][vb]):
                continue
            self.report.seeds_expanded += 1
            pe.assign(a, va)
            pe.assign(b, vb)
            self.report.extensions += 2
            pe.update_embedding(a)
            pe.update_embedding(b)
            self._extend(i)
            pe.restore_embedding(b)
            pe.restore_embedding(a)
            pe.unassign(b)
            pe.unassign(a)
        return self.report

    def _usable(self, u: int) -> bool:
        """True unless every candidate of a finalized vertex is spoken for."""
        return has_usable_candidate(
            self.dcs, self.pe, u, self.pe.used if self.iso else None
        )

    def _postponable(self, u: int) -> bool:
        if self.leaf_only:
            return self.is_leaf[u]
        return self.pe.is_isolated(u)

    def _select(self):
        pe = self.pe
        extendable = pe.extendable_vertices()
        if self.verify:
            self.report.estimate_checks += len(extendable)
            for u in extendable:
                if count_extendable_candidates(self.dcs, pe, u) > pe.estimate[u]:
                    self.report.estimate_violations += 1
        if len(extendable) == 1 and not self._postponable(extendable[0]):
            return extendable[0]  # rule 2 with nothing to compare against
        late = []
        best = None
        best_key = None
        estimate = pe.estimate
        for u in extendable:
            if self._postponable(u):
                late.append(u)
                continue
            key = (
                count_extendable_candidates(self.dcs, pe, u)
                if self.exact
                else estimate[u]
            )
            if best is None or key < best_key or (key == best_key and u < best):
                best, best_key = u, key
        for u in late:
            if not self._usable(u):
                return BACKTRACK
        if best is not None:
            return best
        for u in late:
            key = (
                count_extendable_candidates(self.dcs, pe, u)
                if self.exact
                else estimate[u]
            )
            if best is None or key < best_key or (key == best_key and u < best):
                best, best_key = u, key
        return best

    def _record(self, seed_index: int) -> None:
        # report once per embedding: only from the lowest-index seed it
        # contains (the seed itself is always contained, so index 0 never
        # needs the scan)
        if seed_index:
            mapping = self.pe.mapping
            for (c, wc), (d, wd) in self.e_dcs[:seed_index]:
                if mapping[c] == wc and mapping[d] == wd:
                    return  # already reported from that earlier seed
        self.report.count += 1
        if self.report.matches is not None:
            self.report.matches.append(tuple(self.pe.mapping))

    def _extend(self, seed_index: int) -> None:
        pe = self.pe
        nq = len(pe.mapping)
        if pe.size == nq:
            self._record(seed_index)
            return
        u = self._select()
        if u is BACKTRACK or u is None:
            return
        cands = compute_extendable_candidates(self.dcs, pe, u)
        if not cands:
            return
        iso = self.iso
        used = pe.used
        report = self.report
        if pe.size == nq - 1:
            # completion level: each usable candidate is one full match, and
            # estimate bookkeeping has nothing left to shrink
            mapping = pe.mapping
            record = self._record
            for v in cands:
                if iso and v in used:
                    continue
                mapping[u] = v
                report.extensions += 1
                record(seed_index)
            mapping[u] = -1
            return
        assign, unassign = pe.assign, pe.unassign
        update, restore = pe.update_embedding, pe.restore_embedding
        extend = self._extend
        for v in cands:
            if iso and v in used:
                continue
            assign(u, v)
            report.extensions += 1
            update(u)
            extend(seed_index)
            restore(u)
            unassign(u)


def select_next_vertex(search: _Search):
    """Next query vertex to map, or BACKTRACK when a finalized one is stuck."""
    return search._select()


def find_matches(
    dcs: Dcs, e_dcs: list[DcsEdge], config: MatcherConfig | None = None
) -> MatchReport:
    """Enumerate every match containing at least one edge of e_dcs, once each."""
    return _Search(dcs, e_dcs, config if config is not None else MatcherConfig()).run()
