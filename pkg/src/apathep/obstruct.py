"""Ribboned walls: generators, condition checks and minimally allowable paths.

A ribboned wall is an elementary wall with

* handlebars ``P_1..P_m``: each handle is ``p - mid - q`` with the edge at ``p``
  carrying the handlebar's length and the edge at ``q`` carrying zero;
* A-W-handlebars ``Q_1, Q_2``: pendant terminals joined to the wall by one
  edge carrying ``h_1`` or ``h_2``.  In ``equal`` mode there is one
  Q-handlebar serving as both.

All handle endpoints are degree-2 vertices of the first or last column.
Each handlebar occupies its own run of consecutive such vertices; the runs
follow the boundary order as ``Q_1, P_1, ..., P_m, Q_2``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .epcond import LambdaSet, ObstructionParams, group_conditions
from .group import GroupElement, GroupSpec
from .lgraph import ApPath, LabelledGraph, gamma_length, make_path, parse, serialize
from .walls import (
    AWHandle,
    AWHandlebar,
    Handle,
    Handlebar,
    Wall,
    WallError,
    boundary_order,
    elementary_wall,
    is_pure,
)

__all__ = [
    "RibbonedWall",
    "build_ribboned_wall",
    "gen_fig1a",
    "gen_fig1b",
    "gen_from_params",
    "check_conditions",
    "is_minimally_allowable",
    "minimally_allowable_path",
    "dump_ribboned",
    "load_ribboned",
    "FLAG_NAMES",
]

FLAG_NAMES = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "irreducible", "obstruction")
RIBBON_TAG = "#!ribbon "


@dataclass
class RibbonedWall:
    wall: Wall
    handlebars: list  # list[Handlebar]
    q1: AWHandlebar
    q2: AWHandlebar
    g: tuple
    h1: GroupElement
    h2: GroupElement
    q_mode: str
    k: int
    graph: LabelledGraph = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.handlebars)

    @property
    def kinds(self) -> tuple:
        return tuple(p.kind for p in self.handlebars)

    @property
    def spec(self) -> GroupSpec:
        return self.graph.spec

    @property
    def terminals(self) -> frozenset:
        return self.graph.terminals

    def params(self) -> ObstructionParams:
        return ObstructionParams(tuple(self.g), self.kinds, self.h1, self.h2, self.q_mode)


def _pair_up(block: Sequence[str], kind: str) -> list[tuple[str, str]]:
    n = len(block) // 2
    if kind == "series":
        return [(block[2 * t], block[2 * t + 1]) for t in range(n)]
    if kind == "nested":
        return [(block[t], block[-1 - t]) for t in range(n)]
    return [(block[t], block[n + t]) for t in range(n)]


def _slots(wall: Wall, stride: int) -> list[list[str]]:
    """Every ``stride``-th degree-2 column-boundary vertex, away from the first and last rows.

    Adjacent attachments near a corner leave one-vertex bottlenecks, so the
    slots are spread out.
    """
    out = []
    for side in wall.column_slots():
        inner = [v for v in side if wall.row_of(v) not in (1, wall.r)]
        out.append(inner[::stride])
    return out


def _allocate(wall: Wall, sizes: Sequence[int], stride: int = 1) -> Optional[list[list[str]]]:
    """Consecutive runs of slots, one per size, in boundary order; None if they do not fit."""
    sides = _slots(wall, stride)
    blocks, side, at = [], 0, 0
    for size in sizes:
        while side < len(sides) and at + size > len(sides[side]):
            side, at = side + 1, 0
        if side == len(sides):
            return None
        blocks.append(sides[side][at : at + size])
        at += size
    return blocks


def build_ribboned_wall(
    spec: GroupSpec,
    g: Sequence,
    kinds: Sequence[str],
    h1,
    h2,
    q_mode: str,
    k: int,
    slack: int = 0,
    p_size: Optional[int] = None,
) -> RibbonedWall:
    """Ribboned wall of order at least ``k * (m + 2) + slack``.

    Each W-handlebar gets ``p_size`` handles (default ``k``), each Q side ``2k``.
    """
    g = tuple(spec.element(x) for x in g)
    h1, h2 = spec.element(h1), spec.element(h2)
    kinds = tuple(kinds)
    if len(kinds) != len(g):
        raise ValueError("one kind per handlebar")
    if k < 1:
        raise ValueError("k must be positive")
    if q_mode not in ("disjoint", "equal"):
        raise ValueError("q_mode must be 'disjoint' or 'equal'")
    if q_mode == "equal" and h1 != h2:
        raise ValueError("equal mode uses a single Q-length")
    p_size = k if p_size is None else p_size
    if p_size < k:
        raise ValueError("W-handlebars need at least k handles")
    m = len(g)
    theta = max(3, k * (m + 2) + slack)
    nq = 1 if q_mode == "equal" else 2
    sizes = [2 * k] + [2 * p_size] * m + [2 * k] * (nq - 1)
    r = theta
    while True:
        wall = elementary_wall(theta, r, spec)
        blocks = _allocate(wall, sizes)
        if blocks is not None:
            break
        r += 1

    zero = spec.zero
    vertices = list(wall.vertices)
    edges = [(u, v, lab) for u, v, lab in ((e.u, e.v, e.label) for e in wall.graph.edges.values())]
    terminals = []

    def q_bar(block, label, tag):
        handles = []
        for t, w in enumerate(block, 1):
            a = f"a{tag}.{t}"
            vertices.append(a)
            terminals.append(a)
            edges.append((a, w, label))
            handles.append(AWHandle((a, w)))
        return AWHandlebar(handles, wall)

    p_blocks = blocks[1 : 1 + m]
    q1 = q_bar(blocks[0], h1, "1" if q_mode == "disjoint" else "")
    q2 = q_bar(blocks[-1], h2, "2") if q_mode == "disjoint" else q1
    bars = []
    for i, (block, kind, gi) in enumerate(zip(p_blocks, kinds, g), 1):
        handles = []
        for t, (p, q) in enumerate(_pair_up(block, kind), 1):
            mid = f"p{i}.{t}"
            vertices.append(mid)
            edges.append((p, mid, gi))
            edges.append((mid, q, zero))
            handles.append(Handle((p, mid, q)))
        bars.append(Handlebar(handles, kind, wall))
    graph = LabelledGraph(spec, vertices, edges, terminals)
    return RibbonedWall(wall, bars, q1, q2, g, h1, h2, q_mode, k, graph)


def gen_fig1a(spec: GroupSpec, a, b, c, n: int, lam: Optional[LambdaSet] = None) -> RibbonedWall:
    """One series handlebar of length c between disjoint Q-handlebars of lengths a and b."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return build_ribboned_wall(spec, (c,), ("series",), a, b, "disjoint", n)


def gen_fig1b(spec: GroupSpec, a, b, c, n: int, lam: Optional[LambdaSet] = None) -> RibbonedWall:
    """Two series handlebars of lengths b and c and a single Q-handlebar of length a."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return build_ribboned_wall(spec, (b, c), ("series", "series"), a, a, "equal", n)


def gen_from_params(
    params: ObstructionParams, k: int, lam: Optional[LambdaSet] = None, slack: int = 0, p_size: Optional[int] = None
) -> RibbonedWall:
    return build_ribboned_wall(params.spec, params.g, params.kinds, params.h1, params.h2, params.q_mode, k, slack, p_size)


# -- checks -------------------------------------------------------------------


def _edge_ids(g: LabelledGraph, path: Sequence) -> Optional[list[int]]:
    out = []
    for u, v in zip(path, path[1:]):
        if u not in g or v not in g:
            return None
        between = g.edges_between(u, v)
        if len(between) != 1:
            return None
        out.append(between[0].eid)
    return out


def _common_length(g: LabelledGraph, paths: Sequence[Sequence]) -> Optional[GroupElement]:
    lengths = set()
    for p in paths:
        eids = _edge_ids(g, p)
        if eids is None:
            return None
        lengths.add(gamma_length(g, eids))
    return lengths.pop() if len(lengths) == 1 else None


def _a1(r: RibbonedWall) -> bool:
    w, g = r.wall, r.graph
    wall_vs = set(w.vertices)
    try:
        for bar in r.handlebars:
            if len(bar) < r.k:
                return False
            Handlebar(bar.handles, bar.kind, w)
            for h in bar.handles:
                if set(h.interior) & wall_vs or _edge_ids(g, h.path) is None:
                    return False
        qs = [r.q1] if r.q_mode == "equal" else [r.q1, r.q2]
        for q in qs:
            if len(q) < 2 * r.k:
                return False
            AWHandlebar(q.handles, w)
            for h in q.handles:
                if h.terminal not in r.terminals or _edge_ids(g, h.path) is None:
                    return False
                if set(h.path[:-1]) & wall_vs:
                    return False
        if r.q_mode == "disjoint":
            v1 = {v for h in r.q1.handles for v in h.path}
            v2 = {v for h in r.q2.handles for v in h.path}
            if v1 & v2:
                return False
        used = [{v for h in bar.handles for v in h.path} for bar in r.handlebars]
        used.append({v for q in qs for h in q.handles for v in h.path})
        for i in range(len(used)):
            for j in range(i + 1, len(used)):
                if used[i] & used[j]:
                    return False
        spans = [bar.span() for bar in r.handlebars]
        spans.append(frozenset().union(*(q.span() for q in qs)))
        for i in range(len(spans)):
            for j in range(i + 1, len(spans)):
                if spans[i] & spans[j]:
                    return False
    except WallError:
        return False
    return True


def _a2(r: RibbonedWall) -> tuple[bool, Optional[list], Optional[GroupElement], Optional[GroupElement]]:
    g = r.graph
    zero = g.spec.zero
    # every vertex of an elementary wall is a nail, so nail-to-nail paths are single wall edges
    for u, v in r.wall.coord_edges:
        eids = _edge_ids(g, [r.wall.name(*u), r.wall.name(*v)])
        if eids is None or g.edges[eids[0]].label != zero:
            return False, None, None, None
    gs = [_common_length(g, [h.path for h in bar.handles]) for bar in r.handlebars]
    h1 = _common_length(g, [h.path for h in r.q1.handles])
    h2 = _common_length(g, [h.path for h in r.q2.handles])
    ok = all(x is not None for x in gs) and h1 is not None and h2 is not None
    return ok, gs, h1, h2


def check_conditions(r: RibbonedWall, lam: LambdaSet) -> dict[str, bool]:
    """Each of A1-A7 decided on the actual graph, plus the derived irreducible / obstruction flags."""
    flags = {"A1": _a1(r)}
    a2, gs, h1, h2 = _a2(r)
    flags["A2"] = a2
    if a2:
        flags.update(group_conditions(lam, gs, r.kinds, h1, h2))
    else:
        flags.update({"A3": False, "A4": False, "A5": False})
        flags["A6"] = any(k == "series" for k in r.kinds)
        flags["A7"] = False
    flags["irreducible"] = all(flags[f"A{i}"] for i in range(1, 6))
    flags["obstruction"] = flags["irreducible"] and flags["A6"] and flags["A7"]
    return flags


def _contained(path_edges: set, g: LabelledGraph, handles) -> int:
    count = 0
    for h in handles:
        eids = _edge_ids(g, h.path)
        if eids and set(eids) <= path_edges:
            count += 1
    return count


def is_minimally_allowable(r: RibbonedWall, p: ApPath) -> bool:
    """Exactly one handle of each P_i, and one handle of each Q_j (two of Q_1 in equal mode)."""
    g = r.graph
    make_path(g, p.vertices, p.edge_ids)  # raises if p is not an A-path of the graph
    used = set(p.edge_ids)
    if any(_contained(used, g, bar.handles) != 1 for bar in r.handlebars):
        return False
    if r.q_mode == "equal":
        return _contained(used, g, r.q1.handles) == 2
    return _contained(used, g, r.q1.handles) == 1 and _contained(used, g, r.q2.handles) == 1


def minimally_allowable_path(r: RibbonedWall) -> ApPath:
    """A path walking the boundary cycle from Q_1, jumping over one handle of each P_i, to Q_2.

    In equal mode it leaves from the last Q-slot and returns, after wrapping
    around the cycle, to the first.
    """
    cycle = r.wall.boundary
    at = {v: i for i, v in enumerate(cycle)}
    q1 = sorted(r.q1.handles, key=lambda h: at[h.end])
    q2 = sorted(r.q2.handles, key=lambda h: at[h.end])
    if r.q_mode == "equal":
        start, stop = q1[-1], q1[0]
    else:
        start, stop = q1[-1], q2[0]
    jumps = {}
    for bar in r.handlebars:
        first = min(bar.handles, key=lambda h: min(at[h.ends[0]], at[h.ends[1]]))
        a, b = sorted(first.ends, key=lambda v: at[v])
        jumps[a] = first.path if first.path[0] == a else tuple(reversed(first.path))
    verts = [start.terminal, start.end]
    i = at[start.end]
    while verts[-1] != stop.end:
        here = verts[-1]
        if here in jumps:
            verts.extend(jumps.pop(here)[1:])
            i = at[verts[-1]]
            continue
        i = (i + 1) % len(cycle)
        verts.append(cycle[i])
    verts.append(stop.terminal)
    return make_path(r.graph, verts, _edge_ids(r.graph, verts))


# -- file round trip ------------------------------------------------------------


def dump_ribboned(r: RibbonedWall, lam: Optional[LambdaSet] = None) -> str:
    meta = {
        "c": r.wall.c,
        "r": r.wall.r,
        "k": r.k,
        "q_mode": r.q_mode,
        "g": [str(x) for x in r.g],
        "h1": str(r.h1),
        "h2": str(r.h2),
        "handlebars": [{"kind": b.kind, "handles": [list(h.path) for h in b.handles]} for b in r.handlebars],
        "q1": [list(h.path) for h in r.q1.handles],
        "q2": [list(h.path) for h in r.q2.handles],
    }
    if lam is not None:
        meta["lambda"] = [str(x) for x in lam]
    return RIBBON_TAG + json.dumps(meta, sort_keys=True) + "\n" + serialize(r.graph)


def load_ribboned(text: str) -> tuple[RibbonedWall, Optional[LambdaSet]]:
    """Inverse of :func:`dump_ribboned`; raises ValueError when the ribbon line is absent."""
    meta = None
    for line in text.splitlines():
        if line.startswith(RIBBON_TAG):
            meta = json.loads(line[len(RIBBON_TAG) :])
            break
    if meta is None:
        raise ValueError("no ribbon metadata line in graph file")
    graph = parse(text)
    spec = graph.spec
    wall = elementary_wall(meta["c"], meta["r"], spec)
    missing = [v for v in wall.vertices if v not in graph]
    if missing:
        raise ValueError(f"wall vertices missing from graph: {missing[:5]}")
    bars = [Handlebar([Handle(tuple(p)) for p in b["handles"]], b["kind"]) for b in meta["handlebars"]]
    for b in bars:
        b.wall = wall
    q1 = AWHandlebar([AWHandle(tuple(p)) for p in meta["q1"]], wall)
    q2 = q1 if meta["q_mode"] == "equal" else AWHandlebar([AWHandle(tuple(p)) for p in meta["q2"]], wall)
    r = RibbonedWall(
        wall,
        bars,
        q1,
        q2,
        tuple(spec.parse_element(x) for x in meta["g"]),
        spec.parse_element(meta["h1"]),
        spec.parse_element(meta["h2"]),
        meta["q_mode"],
        meta["k"],
        graph,
    )
    lam = LambdaSet.of(spec, [spec.parse_element(x) for x in meta["lambda"]]) if "lambda" in meta else None
    return r, lam
