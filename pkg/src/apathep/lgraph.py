"""Group-labelled multigraphs with a terminal set, A-paths, shifting and I/O.

Text format (``#`` starts a comment)::

    group Z6
    vertex u A
    vertex w
    edge u w 4

Edges get ids 0, 1, 2, ... in file order unless a fifth ``id`` token is given.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .group import GroupElement, GroupSpec

__all__ = [
    "Edge",
    "LabelledGraph",
    "ApPath",
    "GraphError",
    "ParseError",
    "gamma_length",
    "shift",
    "is_allowable",
    "make_path",
    "parse",
    "serialize",
    "to_dot",
]

Vertex = Hashable


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class Edge:
    eid: int
    u: Vertex
    v: Vertex
    label: GroupElement

    def other(self, x: Vertex) -> Vertex:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise GraphError(f"{x!r} is not an endpoint of edge {self.eid}")

    @property
    def ends(self) -> frozenset:
        return frozenset((self.u, self.v))


class LabelledGraph:
    """Immutable Gamma-labelled multigraph with terminal set ``terminals``.

    Vertices keep their insertion order; that order is the canonical vertex
    order used for path orientation and tie-breaking.
    """

    def __init__(
        self,
        spec: GroupSpec,
        vertices: Iterable[Vertex],
        edges: Iterable,
        terminals: Iterable[Vertex] = (),
    ):
        self.spec = spec
        self.vertices: tuple = tuple(dict.fromkeys(vertices))
        self._index = {v: i for i, v in enumerate(self.vertices)}
        edict: dict[int, Edge] = {}
        auto = 0
        seen_labels: dict[tuple, set] = defaultdict(set)
        for item in edges:
            if isinstance(item, Edge):
                e = item
                e = Edge(e.eid, e.u, e.v, spec.element(e.label))
            else:
                if len(item) == 4:
                    eid, u, v, lab = item
                else:
                    u, v, lab = item
                    while auto in edict:
                        auto += 1
                    eid = auto
                e = Edge(int(eid), u, v, spec.element(lab))
            if e.eid in edict:
                raise GraphError(f"duplicate edge id {e.eid}")
            for x in (e.u, e.v):
                if x not in self._index:
                    raise GraphError(f"edge {e.eid} uses unknown vertex {x!r}")
            if e.u == e.v:
                raise GraphError(f"edge {e.eid} is a loop at {e.u!r}")
            key = self._pair_key(e.u, e.v)
            if e.label in seen_labels[key]:
                raise GraphError(f"parallel edges {e.u!r}-{e.v!r} share label {e.label}")
            seen_labels[key].add(e.label)
            edict[e.eid] = e
        self.edges: dict[int, Edge] = dict(sorted(edict.items()))
        terms = frozenset(terminals)
        unknown = [t for t in terms if t not in self._index]
        if unknown:
            raise GraphError(f"terminals not in graph: {unknown!r}")
        self.terminals: frozenset = terms

    def _pair_key(self, u, v):
        iu, iv = self._index[u], self._index[v]
        return (iu, iv) if iu < iv else (iv, iu)

    # -- queries ---------------------------------------------------------

    def index(self, v: Vertex) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def __contains__(self, v) -> bool:
        return v in self._index

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def adjacency(self) -> dict:
        """vertex -> list of (edge id, neighbour), in edge-id order."""
        adj: dict = {v: [] for v in self.vertices}
        for e in self.edges.values():
            adj[e.u].append((e.eid, e.v))
            adj[e.v].append((e.eid, e.u))
        return adj

    def degree(self, v) -> int:
        return len(self.adjacency[v])

    def edges_between(self, u, v) -> list[Edge]:
        return [self.edges[eid] for eid, w in self.adjacency[u] if w == v]

    def is_terminal(self, v) -> bool:
        return v in self.terminals

    # -- transformations -------------------------------------------------

    def replace(self, *, spec=None, vertices=None, edges=None, terminals=None) -> "LabelledGraph":
        return LabelledGraph(
            self.spec if spec is None else spec,
            self.vertices if vertices is None else vertices,
            self.edges.values() if edges is None else edges,
            self.terminals if terminals is None else terminals,
        )

    def delete_vertices(self, removed: Iterable[Vertex]) -> "LabelledGraph":
        removed = set(removed)
        return LabelledGraph(
            self.spec,
            [v for v in self.vertices if v not in removed],
            [e for e in self.edges.values() if e.u not in removed and e.v not in removed],
            self.terminals - removed,
        )

    def relabel(self, labels: Mapping[int, GroupElement], spec: Optional[GroupSpec] = None) -> "LabelledGraph":
        spec = self.spec if spec is None else spec
        return LabelledGraph(
            spec,
            self.vertices,
            [Edge(e.eid, e.u, e.v, labels.get(e.eid, e.label)) for e in self.edges.values()],
            self.terminals,
        )

    # -- comparison ------------------------------------------------------

    def _key(self):
        return (
            self.spec,
            self.vertices,
            tuple((e.eid, frozenset((e.u, e.v)), e.label) for e in self.edges.values()),
            self.terminals,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelledGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"LabelledGraph({self.spec}, n={self.n}, m={len(self.edges)}, |A|={len(self.terminals)})"


@dataclass(frozen=True)
class ApPath:
    vertices: tuple
    edge_ids: tuple
    gamma_length: GroupElement = field(compare=False)

    def __post_init__(self):
        if len(self.edge_ids) != len(self.vertices) - 1 or not self.edge_ids:
            raise GraphError("an A-path needs at least one edge and |edges| = |vertices| - 1")

    @property
    def ends(self) -> tuple:
        return self.vertices[0], self.vertices[-1]

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def reversed(self) -> "ApPath":
        return ApPath(self.vertices[::-1], self.edge_ids[::-1], self.gamma_length)

    def canonical(self, g: LabelledGraph) -> "ApPath":
        """Orientation whose first vertex comes earlier in the graph's vertex order."""
        if g.index(self.vertices[0]) <= g.index(self.vertices[-1]):
            return self
        return self.reversed()

    def __len__(self) -> int:
        return len(self.edge_ids)


def gamma_length(g: LabelledGraph, edge_ids: Sequence[int]) -> GroupElement:
    total = g.spec.zero
    for eid in edge_ids:
        try:
            total = total + g.edges[eid].label
        except KeyError:
            raise GraphError(f"unknown edge id {eid}") from None
    return total


def make_path(g: LabelledGraph, vertices: Sequence, edge_ids: Optional[Sequence[int]] = None) -> ApPath:
    """Validated A-path of ``g``; edge ids are inferred when every step is unambiguous."""
    vertices = tuple(vertices)
    if len(vertices) < 2:
        raise GraphError("an A-path has at least one edge")
    if len(set(vertices)) != len(vertices):
        raise GraphError("path vertices must be distinct")
    if edge_ids is None:
        eids = []
        for u, v in zip(vertices, vertices[1:]):
            between = g.edges_between(u, v)
            if len(between) != 1:
                raise GraphError(f"{len(between)} edges join {u!r} and {v!r}; pass edge ids")
            eids.append(between[0].eid)
        edge_ids = eids
    edge_ids = tuple(edge_ids)
    if len(edge_ids) != len(vertices) - 1:
        raise GraphError("need one edge id per step")
    for (u, v), eid in zip(zip(vertices, vertices[1:]), edge_ids):
        e = g.edges.get(eid)
        if e is None or e.ends != frozenset((u, v)):
            raise GraphError(f"edge {eid} does not join {u!r} and {v!r}")
    if not (g.is_terminal(vertices[0]) and g.is_terminal(vertices[-1])):
        raise GraphError("A-path endpoints must be terminals")
    if any(g.is_terminal(v) for v in vertices[1:-1]):
        raise GraphError("A-path interior must avoid the terminals")
    return ApPath(vertices, edge_ids, gamma_length(g, edge_ids))


def shift(g: LabelledGraph, v: Vertex, delta: GroupElement) -> LabelledGraph:
    """Add ``delta`` (with ``2*delta == 0``) to every label at ``v``."""
    if v not in g:
        raise GraphError(f"unknown vertex {v!r}")
    delta = g.spec.element(delta)
    if 2 * delta != g.spec.zero:
        raise GraphError(f"shift needs an element of order <= 2, got {delta}")
    return g.relabel({eid: g.edges[eid].label + delta for eid, _ in g.adjacency[v]})


def is_allowable(p: ApPath, lam) -> bool:
    if p.gamma_length.spec != lam.spec:
        raise ValueError(f"path lives in {p.gamma_length.spec}, Lambda in {lam.spec}")
    return p.gamma_length in lam.elements


# -- text format ---------------------------------------------------------


def parse(text: str) -> LabelledGraph:
    spec = None
    vertices, terminals, edges = [], [], []
    seen_vertices = set()
    seen_pairs: set = set()
    explicit_ids: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        try:
            if kw == "group":
                if spec is not None:
                    raise ParseError(lineno, "group declared twice")
                if len(tok) != 2:
                    raise ParseError(lineno, "expected: group <spec>")
                spec = GroupSpec.parse(tok[1])
            elif kw == "vertex":
                if len(tok) not in (2, 3) or (len(tok) == 3 and tok[2] != "A"):
                    raise ParseError(lineno, "expected: vertex <name> [A]")
                if tok[1] in seen_vertices:
                    raise ParseError(lineno, f"vertex {tok[1]!r} declared twice")
                seen_vertices.add(tok[1])
                vertices.append(tok[1])
                if len(tok) == 3:
                    terminals.append(tok[1])
            elif kw == "edge":
                if spec is None:
                    raise ParseError(lineno, "edge before group line")
                if len(tok) not in (4, 5):
                    raise ParseError(lineno, "expected: edge <u> <v> <label> [id]")
                u, v = tok[1], tok[2]
                for x in (u, v):
                    if x not in seen_vertices:
                        raise ParseError(lineno, f"unknown vertex {x!r}")
                if u == v:
                    raise ParseError(lineno, f"loop at {u!r}")
                lab = spec.parse_element(tok[3])
                key = (frozenset((u, v)), lab)
                if key in seen_pairs:
                    raise ParseError(lineno, f"parallel edges {u}-{v} share label {lab}")
                seen_pairs.add(key)
                eid = int(tok[4]) if len(tok) == 5 else None
                if eid is not None and eid in explicit_ids:
                    raise ParseError(lineno, f"duplicate edge id {eid}")
                if eid is not None:
                    explicit_ids.add(eid)
                edges.append((eid, u, v, lab))
            else:
                raise ParseError(lineno, f"unknown keyword {kw!r}")
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    if spec is None:
        raise ParseError(0, "missing group line")
    out, auto = [], 0
    for eid, u, v, lab in edges:
        if eid is None:
            while auto in explicit_ids:
                auto += 1
            eid = auto
            explicit_ids.add(eid)
        out.append(Edge(eid, u, v, lab))
    return LabelledGraph(spec, vertices, out, terminals)


def serialize(g: LabelledGraph) -> str:
    lines = [f"group {g.spec}"]
    for v in g.vertices:
        name = str(v)
        if not name or any(ch.isspace() for ch in name) or "#" in name:
            raise GraphError(f"vertex name {name!r} cannot be written")
        lines.append(f"vertex {name} A" if v in g.terminals else f"vertex {name}")
    for pos, e in enumerate(g.edges.values()):
        tail = "" if e.eid == pos else f" {e.eid}"
        lines.append(f"edge {e.u} {e.v} {e.label}{tail}")
    return "\n".join(lines) + "\n"


def to_dot(
    g: LabelledGraph,
    name: str = "G",
    node_attrs: Optional[Mapping] = None,
    show_zero: bool = False,
) -> str:
    """Graphviz text; terminals filled black, nonzero labels (or all, with show_zero) printed."""
    node_attrs = node_attrs or {}
    out = [f"graph {_dot_id(name)} {{", "  node [shape=circle, width=0.15, label=\"\"];"]
    for v in g.vertices:
        attrs = {"xlabel": str(v)}
        if v in g.terminals:
            attrs.update(style="filled", fillcolor="black")
        attrs.update(node_attrs.get(v, {}))
        out.append(f"  {_dot_id(v)} [{_dot_attrs(attrs)}];")
    for e in g.edges.values():
        attrs = {}
        if show_zero or e.label:
            attrs["label"] = str(e.label)
        tail = f" [{_dot_attrs(attrs)}]" if attrs else ""
        out.append(f"  {_dot_id(e.u)} -- {_dot_id(e.v)}{tail};")
    out.append("}")
    return "\n".join(out) + "\n"


def _dot_id(x) -> str:
    s = str(x).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{s}"'


def _dot_attrs(attrs: Mapping) -> str:
    return ", ".join(f"{k}={_dot_id(v)}" for k, v in attrs.items())
