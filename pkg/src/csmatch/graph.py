"""Dynamic labeled graphs, update streams, and their text formats.

File formats (whitespace separated ASCII, ``#`` comment lines ignored):

graph file
    v <id> <label>            vertex lines first
    e <src> <dst> [<elabel>]  edge label only when edge labels are enabled

stream file
    + <src> <dst> [<elabel>]  edge insertion
    - <src> <dst>             edge deletion
    v+ <id> <label>           vertex insertion
    v- <id>                   vertex deletion (must have no incident edges)

Vertex ids in files are arbitrary non-negative integers; they are remapped
to dense internal ids and the mapping is kept for output.
"""

from __future__ import annotations

from dataclasses import dataclass

# Edge label value used on every edge when edge labels are disabled.
NO_LABEL = 0

EDGE_INSERT = "+"
EDGE_DELETE = "-"
VERTEX_INSERT = "v+"
VERTEX_DELETE = "v-"


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class StreamError(ValueError):
    """An update operation that is inconsistent with the current graph."""

    def __init__(self, message: str, op_index: int | None = None):
        if op_index is not None:
            message = f"op {op_index}: {message}"
        super().__init__(message)
        self.op_index = op_index


class LabelTable:
    """Bijective interning of label strings to small non-negative ints."""

    __slots__ = ("_ids", "_names")

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._names: list[str] = []

    def intern(self, name: str) -> int:
        lid = self._ids.get(name)
        if lid is None:
            lid = len(self._names)
            self._ids[name] = lid
            self._names.append(name)
        return lid

    def name(self, lid: int) -> str:
        return self._names[lid]

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids


@dataclass(frozen=True)
class UpdateOp:
    """One stream operation; vertex ids are external (file) ids."""

    kind: str  # one of "+", "-", "v+", "v-"
    u: int
    v: int | None = None
    edge_label: int = NO_LABEL
    vertex_label: int | None = None


class Graph:
    """Label-indexed adjacency graph with dense internal vertex ids.

    Undirected mode stores each edge symmetrically in ``out``.  Directed mode
    stores out- and in-adjacency separately; "neighbor" then means the union
    of both, with edge direction checked at match time.  At most one edge per
    ordered vertex pair (no multigraphs, no self loops).
    """

    def __init__(self, *, directed: bool = False, edge_labels: bool = False):
        self.directed = directed
        self.edge_labels = edge_labels
        self.frozen = False
        self.vlabel: list[int | None] = []  # None marks a deleted slot
        self.ext_of: list[int | None] = []
        self.id_of: dict[int, int] = {}
        self.out: list[dict[int, int]] = []  # v -> {w: edge label}
        self.inn: list[dict[int, int]] = []  # directed mode only
        self.nbr_by_label: list[dict[int, list[int]]] = []  # v -> {vertex label: [w]}
        self.of_label: dict[int, list[int]] = {}  # vertex label -> [v]
        self.n_edges = 0

    # -- lookups ----------------------------------------------------------

    def n_vertices(self) -> int:
        return len(self.id_of)

    def vertices(self) -> list[int]:
        return [v for v, lab in enumerate(self.vlabel) if lab is not None]

    def internal(self, ext_id: int) -> int:
        try:
            return self.id_of[ext_id]
        except KeyError:
            raise ValueError(f"unknown vertex {ext_id}") from None

    def external(self, v: int) -> int:
        ext = self.ext_of[v]
        assert ext is not None
        return ext

    def connected_pair(self, a: int, b: int) -> bool:
        """True if any edge joins a and b, in either direction."""
        return b in self.out[a] or (self.directed and b in self.inn[a])

    def neighbors_with_label(self, v: int, label: int) -> list[int]:
        return self.nbr_by_label[v].get(label, [])

    def neighbor_ids(self, v: int) -> list[int]:
        """Neighbor internal ids in ascending order (union in directed mode)."""
        if not self.directed:
            return sorted(self.out[v])
        return sorted(set(self.out[v]) | set(self.inn[v]))

    def degree(self, v: int) -> int:
        if not self.directed:
            return len(self.out[v])
        return len(set(self.out[v]) | set(self.inn[v]))

    def edge_set(self) -> set[tuple[int, int, int]]:
        """External-id edge set; undirected edges normalized small-id first."""
        edges = set()
        for v, adj in enumerate(self.out):
            for w, lab in adj.items():
                a, b = self.external(v), self.external(w)
                if self.directed:
                    edges.add((a, b, lab))
                elif a <= b:
                    edges.add((a, b, lab))
        return edges

    # -- mutation ---------------------------------------------------------

    def _check_mutable(self):
        if self.frozen:
            raise ValueError("graph is frozen")

    def add_vertex(self, ext_id: int, label: int) -> int:
        self._check_mutable()
        if ext_id < 0:
            raise ValueError(f"negative vertex id {ext_id}")
        if ext_id in self.id_of:
            raise ValueError(f"duplicate vertex {ext_id}")
        v = len(self.vlabel)
        self.vlabel.append(label)
        self.ext_of.append(ext_id)
        self.id_of[ext_id] = v
        self.out.append({})
        self.inn.append({})
        self.nbr_by_label.append({})
        self.of_label.setdefault(label, []).append(v)
        return v

    def delete_vertex(self, ext_id: int) -> None:
        self._check_mutable()
        v = self.internal(ext_id)
        if self.out[v] or self.inn[v]:
            raise ValueError(f"vertex {ext_id} still has incident edges")
        del self.id_of[ext_id]
        label = self.vlabel[v]
        bucket = self.of_label[label]
        bucket.remove(v)
        if not bucket:
            del self.of_label[label]
        if v == len(self.vlabel) - 1:
            self.vlabel.pop()
            self.ext_of.pop()
            self.out.pop()
            self.inn.pop()
            self.nbr_by_label.pop()
        else:
            self.vlabel[v] = None
            self.ext_of[v] = None

    def _link(self, a: int, b: int) -> None:
        label = self.vlabel[b]
        bucket = self.nbr_by_label[a].get(label)
        if bucket is None:
            self.nbr_by_label[a][label] = [b]
        else:
            bucket.append(b)

    def _unlink(self, a: int, b: int) -> None:
        label = self.vlabel[b]
        bucket = self.nbr_by_label[a][label]
        bucket.remove(b)
        if not bucket:
            del self.nbr_by_label[a][label]

    def add_edge(self, ext_u: int, ext_v: int, elabel: int = NO_LABEL) -> None:
        self._check_mutable()
        u, v = self.internal(ext_u), self.internal(ext_v)
        if u == v:
            raise ValueError(f"self loop at vertex {ext_u}")
        if v in self.out[u]:
            raise ValueError(f"duplicate edge ({ext_u}, {ext_v})")
        if not self.directed:
            self.out[u][v] = elabel
            self.out[v][u] = elabel
            self._link(u, v)
            self._link(v, u)
        else:
            already = self.connected_pair(u, v)
            self.out[u][v] = elabel
            self.inn[v][u] = elabel
            if not already:
                self._link(u, v)
                self._link(v, u)
        self.n_edges += 1

    def delete_edge(self, ext_u: int, ext_v: int) -> None:
        self._check_mutable()
        u, v = self.internal(ext_u), self.internal(ext_v)
        if v not in self.out[u]:
            raise ValueError(f"no edge ({ext_u}, {ext_v})")
        del self.out[u][v]
        if not self.directed:
            del self.out[v][u]
            self._unlink(u, v)
            self._unlink(v, u)
        else:
            del self.inn[v][u]
            if not self.connected_pair(u, v):
                self._unlink(u, v)
                self._unlink(v, u)
        self.n_edges -= 1

    # -- whole-graph helpers -----------------------------------------------

    def freeze(self) -> None:
        self.frozen = True

    def clone(self) -> "Graph":
        g = Graph(directed=self.directed, edge_labels=self.edge_labels)
        g.vlabel = list(self.vlabel)
        g.ext_of = list(self.ext_of)
        g.id_of = dict(self.id_of)
        g.out = [dict(d) for d in self.out]
        g.inn = [dict(d) for d in self.inn]
        g.nbr_by_label = [{k: list(b) for k, b in d.items()} for d in self.nbr_by_label]
        g.of_label = {k: list(b) for k, b in self.of_label.items()}
        g.n_edges = self.n_edges
        return g

    def same_structure(self, other: "Graph") -> bool:
        """Full structural equality, indices included."""
        return (
            self.directed == other.directed
            and self.edge_labels == other.edge_labels
            and self.vlabel == other.vlabel
            and self.ext_of == other.ext_of
            and self.id_of == other.id_of
            and self.out == other.out
            and self.inn == other.inn
            and self.nbr_by_label == other.nbr_by_label
            and self.of_label == other.of_label
            and self.n_edges == other.n_edges
        )

    def is_connected(self) -> bool:
        live = self.vertices()
        if not live:
            return False
        seen = {live[0]}
        stack = [live[0]]
        while stack:
            v = stack.pop()
            for w in self.out[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
            if self.directed:
                for w in self.inn[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return len(seen) == len(live)


def pair_requirements(q: Graph, a: int, b: int) -> tuple[tuple[bool, int], ...]:
    """Edge requirements between query vertices a and b, phrased from a's side.

    Each entry is (from_a, edge_label).  Undirected queries yield one entry;
    directed queries yield one per direction present.
    """
    reqs = []
    lab = q.out[a].get(b)
    if lab is not None:
        reqs.append((True, lab))
    if q.directed:
        lab2 = q.out[b].get(a)
        if lab2 is not None:
            reqs.append((False, lab2))
    return tuple(reqs)


def edge_compatible(g: Graph, v: int, w: int, reqs: tuple[tuple[bool, int], ...]) -> bool:
    """True if data pair (v, w) carries every required edge of a query pair."""
    for from_v, lab in reqs:
        if from_v:
            if g.out[v].get(w) != lab:
                return False
        elif g.out[w].get(v) != lab:
            return False
    return True


def apply_update(g: Graph, op: UpdateOp, op_index: int | None = None) -> None:
    """Apply one validated operation; raises StreamError on inconsistency."""
    try:
        if op.kind == EDGE_INSERT:
            g.add_edge(op.u, op.v, op.edge_label)
        elif op.kind == EDGE_DELETE:
            g.delete_edge(op.u, op.v)
        elif op.kind == VERTEX_INSERT:
            g.add_vertex(op.u, op.vertex_label)
        elif op.kind == VERTEX_DELETE:
            g.delete_vertex(op.u)
        else:
            raise ValueError(f"unknown op kind {op.kind!r}")
    except StreamError:
        raise
    except ValueError as exc:
        raise StreamError(str(exc), op_index) from exc


# -- parsing ---------------------------------------------------------------


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line.split()


def _parse_int(tok: str, no: int, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(no, f"bad {what} {tok!r}") from None
    if value < 0:
        raise ParseError(no, f"negative {what} {value}")
    return value


def _parse_edge_label(
    parts: list[str], base: int, no: int, edge_labels: bool, elabels: LabelTable
) -> int:
    extra = parts[base:]
    if edge_labels:
        if len(extra) != 1:
            raise ParseError(no, "edge label required when edge labels are enabled")
        return elabels.intern(extra[0])
    if extra:
        raise ParseError(no, "unexpected edge label (edge labels are disabled)")
    return NO_LABEL


def parse_graph(
    text: str,
    *,
    directed: bool = False,
    edge_labels: bool = False,
    vlabels: LabelTable | None = None,
    elabels: LabelTable | None = None,
) -> Graph:
    vlabels = vlabels if vlabels is not None else LabelTable()
    elabels = elabels if elabels is not None else LabelTable()
    g = Graph(directed=directed, edge_labels=edge_labels)
    for no, parts in _content_lines(text):
        kind = parts[0]
        if kind == "v":
            if len(parts) != 3:
                raise ParseError(no, "vertex line must be 'v <id> <label>'")
            ext = _parse_int(parts[1], no, "vertex id")
            try:
                g.add_vertex(ext, vlabels.intern(parts[2]))
            except ValueError as exc:
                raise ParseError(no, str(exc)) from exc
        elif kind == "e":
            if len(parts) < 3:
                raise ParseError(no, "edge line must be 'e <src> <dst> [<elabel>]'")
            src = _parse_int(parts[1], no, "vertex id")
            dst = _parse_int(parts[2], no, "vertex id")
            lab = _parse_edge_label(parts, 3, no, edge_labels, elabels)
            try:
                g.add_edge(src, dst, lab)
            except ValueError as exc:
                raise ParseError(no, str(exc)) from exc
        else:
            raise ParseError(no, f"unknown record {kind!r}")
    return g


def parse_query(
    text: str,
    *,
    directed: bool = False,
    edge_labels: bool = False,
    vlabels: LabelTable | None = None,
    elabels: LabelTable | None = None,
) -> Graph:
    """Parse a query graph; must be non-empty and connected.  Frozen on return."""
    q = parse_graph(
        text, directed=directed, edge_labels=edge_labels, vlabels=vlabels, elabels=elabels
    )
    if q.n_vertices() == 0:
        raise ValueError("query graph is empty")
    if not q.is_connected():
        raise ValueError("query graph is disconnected")
    q.freeze()
    return q


def parse_update_stream(
    text: str,
    *,
    edge_labels: bool = False,
    vlabels: LabelTable | None = None,
    elabels: LabelTable | None = None,
) -> list[UpdateOp]:
    """Parse a stream file; ops are validated against a graph only when applied."""
    vlabels = vlabels if vlabels is not None else LabelTable()
    elabels = elabels if elabels is not None else LabelTable()
    ops = []
    for no, parts in _content_lines(text):
        kind = parts[0]
        if kind == EDGE_INSERT:
            if len(parts) < 3:
                raise ParseError(no, "insertion must be '+ <src> <dst> [<elabel>]'")
            src = _parse_int(parts[1], no, "vertex id")
            dst = _parse_int(parts[2], no, "vertex id")
            lab = _parse_edge_label(parts, 3, no, edge_labels, elabels)
            ops.append(UpdateOp(EDGE_INSERT, src, dst, edge_label=lab))
        elif kind == EDGE_DELETE:
            if len(parts) != 3:
                raise ParseError(no, "deletion must be '- <src> <dst>'")
            ops.append(
                UpdateOp(EDGE_DELETE, _parse_int(parts[1], no, "vertex id"),
                         _parse_int(parts[2], no, "vertex id"))
            )
        elif kind == VERTEX_INSERT:
            if len(parts) != 3:
                raise ParseError(no, "vertex insertion must be 'v+ <id> <label>'")
            ops.append(
                UpdateOp(VERTEX_INSERT, _parse_int(parts[1], no, "vertex id"),
                         vertex_label=vlabels.intern(parts[2]))
            )
        elif kind == VERTEX_DELETE:
            if len(parts) != 2:
                raise ParseError(no, "vertex deletion must be 'v- <id>'")
            ops.append(UpdateOp(VERTEX_DELETE, _parse_int(parts[1], no, "vertex id")))
        else:
            raise ParseError(no, f"unknown op {kind!r}")
    return ops
