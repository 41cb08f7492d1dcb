"""Elementary walls, the boundary order, pure pair systems and handlebars.

Wall vertices are named ``"w{x}.{j}"`` after their coordinates in the
``[2c] x [r]`` grid; a vertical edge joins ``(x, j)`` and ``(x, j+1)`` when
``x + j`` is odd.  Subwalls keep the coordinates of the wall they came from.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .group import GroupSpec
from .lgraph import LabelledGraph, _dot_attrs, _dot_id

__all__ = [
    "WallError",
    "Wall",
    "BoundaryOrder",
    "elementary_wall",
    "boundary_order",
    "classify_pair",
    "is_pure",
    "max_pure_subsets",
    "extract_pure",
    "Handle",
    "Handlebar",
    "AWHandle",
    "AWHandlebar",
    "join_handlebars",
    "split_handlebar",
    "non_mixing",
    "wall_to_dot",
]

KINDS = ("series", "nested", "crossing")


class WallError(ValueError):
    pass


def vertex_name(x: int, j: int) -> str:
    return f"w{x}.{j}"


class Wall:
    """Elementary (c, r)-wall, or a compact subwall of one.

    ``x_lo`` and ``j_lo`` place the wall inside the ambient coordinate grid.
    Every vertex is a nail.
    """

    def __init__(self, c: int, r: int, spec: Optional[GroupSpec] = None, x_lo: int = 1, j_lo: int = 1):
        if c < 3 or r < 3:
            raise WallError(f"a wall needs at least 3 columns and 3 rows, got ({c}, {r})")
        self.c, self.r = c, r
        self.spec = spec if spec is not None else GroupSpec(())
        self.x_lo, self.j_lo = x_lo, j_lo
        xs = range(x_lo, x_lo + 2 * c)
        js = range(j_lo, j_lo + r)
        box = {(x, j) for x in xs for j in js}
        edges = []
        for x, j in sorted(box, key=lambda p: (p[1], p[0])):
            if (x + 1, j) in box:
                edges.append(((x, j), (x + 1, j)))
            if (x + j) % 2 == 1 and (x, j + 1) in box:
                edges.append(((x, j), (x, j + 1)))
        deg = {p: 0 for p in box}
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        dropped = {p for p, d in deg.items() if d == 1}
        if len(dropped) != 2:
            raise WallError(f"expected two degree-1 corners, found {len(dropped)}")
        self.points = frozenset(box - dropped)
        self.coord_edges = [(u, v) for u, v in edges if u in self.points and v in self.points]

    # -- coordinates and names --------------------------------------------

    def name(self, x: int, j: int) -> str:
        if (x, j) not in self.points:
            raise WallError(f"({x}, {j}) is not a wall vertex")
        return vertex_name(x, j)

    @cached_property
    def coords(self) -> dict:
        return {vertex_name(x, j): (x, j) for x, j in self.points}

    @property
    def order(self) -> int:
        return min(self.c, self.r)

    @cached_property
    def vertices(self) -> list[str]:
        return [vertex_name(x, j) for x, j in sorted(self.points, key=lambda p: (p[1], p[0]))]

    @property
    def nails(self) -> frozenset:
        return frozenset(self.coords)

    @cached_property
    def graph(self) -> LabelledGraph:
        zero = self.spec.zero
        edges = [(vertex_name(*u), vertex_name(*v), zero) for u, v in self.coord_edges]
        return LabelledGraph(self.spec, self.vertices, edges)

    def degree(self, v: str) -> int:
        return self.graph.degree(v)

    # -- rows and columns ---------------------------------------------------

    def row(self, j: int) -> list[str]:
        """Row j (1-based, local) as a path from left to right."""
        if not 1 <= j <= self.r:
            raise WallError(f"row {j} out of range")
        y = self.j_lo + j - 1
        return [vertex_name(x, y) for x in range(self.x_lo, self.x_lo + 2 * self.c) if (x, y) in self.points]

    def column(self, i: int) -> list[str]:
        """Column i (1-based, local) as a path from bottom to top."""
        if not 1 <= i <= self.c:
            raise WallError(f"column {i} out of range")
        pair = (self.x_lo + 2 * i - 2, self.x_lo + 2 * i - 1)
        members = {(x, j) for x, j in self.points if x in pair}
        g = self.graph
        names = {vertex_name(*p) for p in members}
        ends = [v for v in names if sum(1 for _, w in g.adjacency[v] if w in names) == 1]
        start = min(ends, key=lambda v: (self.coords[v][1], self.coords[v][0]))
        path, prev = [start], None
        while True:
            nxt = [w for _, w in g.adjacency[path[-1]] if w in names and w != prev]
            if not nxt:
                break
            prev = path[-1]
            path.append(nxt[0])
        if len(path) != len(names):
            raise WallError(f"column {i} is not a path")
        return path

    def row_of(self, v: str) -> int:
        return self.coords[v][1] - self.j_lo + 1

    def column_of(self, v: str) -> int:
        return (self.coords[v][0] - self.x_lo) // 2 + 1

    def corner(self, i: int, j: int) -> str:
        """Corner nail in column i and row j (i in {1, c}, j in {1, r}); the outermost one."""
        if i not in (1, self.c) or j not in (1, self.r):
            raise WallError("corners live in the first/last column and row")
        cands = set(self.column(i)) & set(self.row(j))
        key = (lambda v: self.coords[v][0]) if i == 1 else (lambda v: -self.coords[v][0])
        return min(cands, key=key)

    @cached_property
    def boundary(self) -> list[str]:
        """The boundary cycle listed from the corner v11, up the first column first."""
        parts = [self.column(1), self.column(self.c), self.row(1), self.row(self.r)]
        adj: dict = {}
        for p in parts:
            for u, v in zip(p, p[1:]):
                adj.setdefault(u, set()).add(v)
                adj.setdefault(v, set()).add(u)
        if any(len(s) != 2 for s in adj.values()):
            raise WallError("boundary is not a cycle")
        start = self.corner(1, 1)
        first_col = set(self.column(1))
        nxt = sorted(w for w in adj[start] if w in first_col)
        cycle = [start, nxt[0]]
        while True:
            a, b = sorted(adj[cycle[-1]])
            w = a if a != cycle[-2] else b
            if w == start:
                break
            cycle.append(w)
        if len(cycle) != len(adj):
            raise WallError("boundary is not a single cycle")
        return cycle

    @cached_property
    def column_boundary(self) -> frozenset:
        return frozenset(self.column(1)) | frozenset(self.column(self.c))

    def column_slots(self) -> list[list[str]]:
        """Degree-2 column-boundary vertices, in boundary order, grouped by side (first, last column)."""
        order = boundary_order(self)
        out = []
        for i in (1, self.c):
            col = [v for v in self.column(i) if self.degree(v) == 2]
            out.append(sorted(col, key=order.position))
        return out

    # -- subwalls -------------------------------------------------------------

    def subwall(self, cols: tuple[int, int], rows: tuple[int, int]) -> "Wall":
        """Compact subwall on the (inclusive, local) column and row ranges."""
        (i0, i1), (j0, j1) = cols, rows
        if not (1 <= i0 <= i1 <= self.c and 1 <= j0 <= j1 <= self.r):
            raise WallError("subwall ranges fall outside the wall")
        sub = Wall(i1 - i0 + 1, j1 - j0 + 1, self.spec, self.x_lo + 2 * (i0 - 1), self.j_lo + j0 - 1)
        if not sub.points <= self.points:
            raise WallError("subwall range cuts a corner of the wall")
        return sub

    def contained_subwall(self, k: int) -> "Wall":
        """Largest compact subwall avoiding the first and last k rows and columns."""
        return self.subwall((k + 1, self.c - k), (k + 1, self.r - k))

    def column_slice(self, i0: int, i1: int) -> "Wall":
        """Compact subwall on columns i0..i1 using every row."""
        return self.subwall((i0, i1), (1, self.r))

    def __repr__(self) -> str:
        return f"Wall(c={self.c}, r={self.r}, origin=({self.x_lo}, {self.j_lo}))"


def elementary_wall(c: int, r: int, spec: Optional[GroupSpec] = None) -> Wall:
    return Wall(c, r, spec)


@dataclass(frozen=True)
class BoundaryOrder:
    vertices: tuple

    @cached_property
    def _pos(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def position(self, v) -> int:
        try:
            return self._pos[v]
        except KeyError:
            raise WallError(f"{v!r} is not a boundary nail") from None

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def precedes(self, u, v) -> bool:
        return self.position(u) < self.position(v)


def boundary_order(w: Wall) -> BoundaryOrder:
    cycle = w.boundary
    order = BoundaryOrder(tuple(v for v in cycle if v in w.nails))
    corners = [w.corner(1, 1), w.corner(1, w.r), w.corner(w.c, w.r), w.corner(w.c, 1)]
    pos = [order.position(v) for v in corners]
    if pos != sorted(pos):
        raise WallError(f"corner order broken: {corners}")
    return order


# -- pairs and purity --------------------------------------------------------


def _interval(p, order: Optional[BoundaryOrder]) -> tuple[int, int]:
    a, b = p
    if order is not None:
        a, b = order.position(a), order.position(b)
    if a == b:
        raise WallError(f"degenerate pair {p!r}")
    return (a, b) if a < b else (b, a)


def classify_pair(x, y, order: Optional[BoundaryOrder] = None) -> str:
    """'series', 'nested' or 'crossing'; without ``order`` the pair entries are compared directly."""
    x1, x2 = _interval(x, order)
    y1, y2 = _interval(y, order)
    if len({x1, x2, y1, y2}) != 4:
        raise WallError(f"pairs {x!r} and {y!r} share an endpoint")
    if x2 < y1 or y2 < x1:
        return "series"
    if x1 < y1 < y2 < x2 or y1 < x1 < x2 < y2:
        return "nested"
    return "crossing"


def is_pure(pairs: Iterable, kind: Optional[str] = None, order: Optional[BoundaryOrder] = None) -> bool:
    pairs = list(pairs)
    kinds = {classify_pair(p, q, order) for p, q in combinations(pairs, 2)}
    if kind is None:
        return len(kinds) <= 1
    return kinds <= {kind}


def _longest_increasing(seq: Sequence[int]) -> list[int]:
    """Indices of a longest strictly increasing subsequence (patience sorting)."""
    tails, tail_idx, prev = [], [], [-1] * len(seq)
    for i, v in enumerate(seq):
        k = bisect.bisect_left(tails, v)
        if k == len(tails):
            tails.append(v)
            tail_idx.append(i)
        else:
            tails[k] = v
            tail_idx[k] = i
        prev[i] = tail_idx[k - 1] if k else -1
    out, i = [], tail_idx[-1] if tail_idx else -1
    while i >= 0:
        out.append(i)
        i = prev[i]
    return out[::-1]


def max_pure_subsets(pairs: Iterable, order: Optional[BoundaryOrder] = None) -> dict:
    """A maximum pure subset of each kind.

    Series subsets are interval schedules, nested ones are containment
    chains and crossing ones always share a common point, so each reduces
    to a chain problem in the interval order.
    """
    pairs = list(pairs)
    ivs = [_interval(p, order) for p in pairs]
    ends = [e for iv in ivs for e in iv]
    if len(set(ends)) != len(ends):
        raise WallError("pairs must be pairwise disjoint")
    by_left = sorted(range(len(pairs)), key=lambda i: ivs[i][0])

    series, last = [], None
    for i in sorted(range(len(pairs)), key=lambda i: ivs[i][1]):
        if last is None or ivs[i][0] > last:
            series.append(i)
            last = ivs[i][1]

    nested = [by_left[t] for t in _longest_increasing([-ivs[i][1] for i in by_left])]

    crossing: list[int] = []
    for point in sorted(ends):
        inside = [i for i in by_left if ivs[i][0] <= point <= ivs[i][1]]
        chain = [inside[t] for t in _longest_increasing([ivs[i][1] for i in inside])]
        if len(chain) > len(crossing):
            crossing = chain

    pick = lambda idx: [pairs[i] for i in sorted(idx, key=lambda i: ivs[i])]
    return {"series": pick(series), "nested": pick(nested), "crossing": pick(crossing)}


def extract_pure(pairs: Iterable, k: int, order: Optional[BoundaryOrder] = None) -> Optional[tuple[str, list]]:
    """(kind, subset) of a largest pure subset if it has at least k pairs, else None."""
    best = max_pure_subsets(pairs, order)
    kind = max(KINDS, key=lambda kd: (len(best[kd]), -KINDS.index(kd)))
    if len(best[kind]) < k:
        return None
    return kind, best[kind]


# -- handles ------------------------------------------------------------------


@dataclass(frozen=True)
class Handle:
    """A W-path outside the wall, listed from one boundary endpoint to the other.

    ``joined`` holds the two A-W-handles it was made from, when it came from
    joining; the identified terminal keeps the name of the first one.
    """

    path: tuple
    joined: Optional[tuple] = None

    @property
    def ends(self) -> tuple:
        return self.path[0], self.path[-1]

    @property
    def interior(self) -> tuple:
        return self.path[1:-1]


@dataclass(frozen=True)
class AWHandle:
    """An A-W-path listed from its terminal to its wall endpoint."""

    path: tuple

    @property
    def terminal(self):
        return self.path[0]

    @property
    def end(self):
        return self.path[-1]


def _column_spans(w: Wall, points: Iterable[str]) -> frozenset:
    """Vertices of the shortest column subpaths covering ``points`` (one span per boundary column)."""
    points = set(points)
    out = set()
    for i in sorted({1, w.c}):
        col = w.column(i)
        idx = [t for t, v in enumerate(col) if v in points]
        if idx:
            out.update(col[min(idx) : max(idx) + 1])
    stray = points - w.column_boundary
    if stray:
        raise WallError(f"not on the column-boundary: {sorted(stray)}")
    return frozenset(out)


@dataclass
class Handlebar:
    handles: list
    kind: str
    wall: Optional[Wall] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WallError(f"kind must be one of {KINDS}")
        seen = set()
        for h in self.handles:
            if seen & set(h.path):
                raise WallError("handles of a handlebar must be vertex-disjoint")
            seen |= set(h.path)
        if self.wall is not None:
            order = boundary_order(self.wall)
            if not is_pure([h.ends for h in self.handles], self.kind, order):
                raise WallError(f"handle endpoints are not {self.kind}")

    def __len__(self) -> int:
        return len(self.handles)

    @property
    def endpoints(self) -> list:
        return [v for h in self.handles for v in h.ends]

    def span(self) -> frozenset:
        """Column subpaths spanning the endpoints; a superset of the minimal sides."""
        if self.wall is None:
            raise WallError("handlebar is not attached to a wall")
        return _column_spans(self.wall, self.endpoints)


@dataclass
class AWHandlebar:
    handles: list
    wall: Optional[Wall] = field(default=None, repr=False)

    def __post_init__(self):
        ends = [h.end for h in self.handles]
        if len(set(ends)) != len(ends) or len({h.terminal for h in self.handles}) != len(ends):
            raise WallError("A-W-handles must be disjoint")
        if self.wall is not None:
            sides = {self.wall.column_of(v) for v in ends}
            if not sides <= {1, self.wall.c} or len(sides) > 1:
                raise WallError("A-W-handlebar endpoints must all lie on one boundary column")

    def __len__(self) -> int:
        return len(self.handles)

    def span(self) -> frozenset:
        if self.wall is None:
            raise WallError("handlebar is not attached to a wall")
        return _column_spans(self.wall, [h.end for h in self.handles])


def non_mixing(*bars) -> bool:
    """True when the column spans of the given handlebars are pairwise disjoint."""
    spans = [b.span() for b in bars]
    return all(not (s & t) for s, t in combinations(spans, 2))


def join_handlebars(q1: AWHandlebar, q2: AWHandlebar, kind: str, wall: Optional[Wall] = None) -> Handlebar:
    """Join two A-W-handlebars (equal, or disjoint and non-mixing) into a W-handlebar of ``kind``."""
    wall = wall or q1.wall or q2.wall
    if wall is None:
        raise WallError("joining needs the wall's boundary order")
    order = boundary_order(wall)
    pos = lambda h: order.position(h.end)
    if kind not in KINDS:
        raise WallError(f"kind must be one of {KINDS}")
    if q1 is q2 or q1.handles == q2.handles:
        zs = sorted(q1.handles, key=pos)
        if len(zs) % 2:
            raise WallError("joining a handlebar with itself needs an even number of handles")
        half = len(zs) // 2
        if kind == "series":
            pairs = [(zs[2 * i], zs[2 * i + 1]) for i in range(half)]
        elif kind == "nested":
            pairs = [(zs[i], zs[-1 - i]) for i in range(half)]
        else:
            pairs = [(zs[i], zs[half + i]) for i in range(half)]
    else:
        if len(q1) != len(q2):
            raise WallError("disjoint handlebars must have equal sizes to be joined")
        if {h.path for h in q1.handles} & {h.path for h in q2.handles}:
            raise WallError("handlebars are neither equal nor disjoint")
        if not non_mixing(AWHandlebar(q1.handles, wall), AWHandlebar(q2.handles, wall)):
            raise WallError("handlebars mix")
        if kind == "series":
            raise WallError("two disjoint handlebars only join into nested or crossing handlebars")
        xs, ys = sorted(q1.handles, key=pos), sorted(q2.handles, key=pos)
        if pos(ys[0]) < pos(xs[0]):
            xs, ys = ys, xs
        n = len(xs)
        if kind == "nested":
            pairs = [(xs[n - 1 - i], ys[i]) for i in range(n)]
        else:
            pairs = [(xs[i], ys[i]) for i in range(n)]
    handles = []
    for first, second in pairs:
        # wall end of the first, through the shared terminal, to the wall end of the second
        path = tuple(reversed(first.path)) + tuple(second.path[1:])
        handles.append(Handle(path, joined=(first, second)))
    return Handlebar(handles, kind, wall)


def split_handlebar(p: Handlebar) -> tuple[AWHandlebar, AWHandlebar]:
    """Undo :func:`join_handlebars`; the halves come back sorted by boundary position."""
    if any(h.joined is None for h in p.handles):
        raise WallError("handle has no join provenance")
    firsts = [h.joined[0] for h in p.handles]
    seconds = [h.joined[1] for h in p.handles]
    for h, (a, b) in zip(p.handles, (h.joined for h in p.handles)):
        if tuple(reversed(a.path)) + tuple(b.path[1:]) != h.path:
            raise WallError("provenance does not match handle")
    return AWHandlebar(firsts, p.wall), AWHandlebar(seconds, p.wall)


# -- DOT -------------------------------------------------------------------------


def wall_to_dot(w: Wall, handlebars: Sequence = (), name: str = "wall") -> str:
    """Wall drawn on its grid, nails as points, handle endpoints labelled by boundary position."""
    order = boundary_order(w)
    marked = {}
    for bar in handlebars:
        ends = bar.endpoints if isinstance(bar, Handlebar) else [h.end for h in bar.handles]
        for v in ends:
            marked[v] = order.position(v)
    lines = [f"graph {_dot_id(name)} {{", '  node [shape=point, width=0.08];']
    for v in w.vertices:
        x, j = w.coords[v]
        attrs = {"pos": f"{x},{j}!"}
        if v in marked:
            attrs.update(shape="circle", width="0.25", label=str(marked[v]), fontsize="8")
        lines.append(f"  {_dot_id(v)} [{_dot_attrs(attrs)}];")
    for u, v in w.coord_edges:
        lines.append(f"  {_dot_id(vertex_name(*u))} -- {_dot_id(vertex_name(*v))};")
    for bar in handlebars:
        for h in bar.handles:
            for a, b in zip(h.path, h.path[1:]):
                lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [color=blue];")
    lines.append("}")
    return "\n".join(lines) + "\n"
