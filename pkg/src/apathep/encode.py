"""Rewrite constrained path problems as plain allowable A-path problems.

Each encoder returns an :class:`Encoding` holding the target graph, the
target Lambda and the tables needed to map a target path back to the source
path with the same vertex sequence.  Target vertices keep their source
names except for the pendant copies added by :func:`encode_weak_ab`, which
are named ``A'v`` and ``B'v``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .epcond import LambdaSet
from .group import GroupElement, GroupSpec
from .lgraph import ApPath, LabelledGraph

__all__ = [
    "Encoding",
    "SourcePath",
    "encode_edge_sets",
    "encode_vertex_sets",
    "encode_ab_paths",
    "encode_weak_ab",
    "encode_h_feasible",
    "encode_modular",
    "product_spec",
]


class SourcePath(NamedTuple):
    """A path of the source graph; weak A-B-paths may have no edges."""

    vertices: tuple
    edge_ids: tuple


@dataclass
class Encoding:
    kind: str
    source: LabelledGraph
    constraint: dict
    target: LabelledGraph
    lambda_target: LambdaSet
    edge_map: dict  # target edge id -> source edge id, or None for added edges
    vertex_map: dict = field(default_factory=dict)  # target vertex -> source vertex, or None

    def back(self, p: ApPath) -> SourcePath:
        """Source path with the same vertex sequence, added pendants stripped."""
        verts, eids = list(p.vertices), list(p.edge_ids)
        vmap = self.vertex_map
        if vmap:
            while verts and vmap.get(verts[0], verts[0]) is None:
                verts.pop(0)
                eids.pop(0)
            while verts and vmap.get(verts[-1], verts[-1]) is None:
                verts.pop()
                eids.pop()
        src = tuple(self.edge_map[e] for e in eids)
        if any(e is None for e in src):
            raise ValueError("target path uses an added edge inside the source part")
        out = SourcePath(tuple(verts), src)
        g = self.source
        if len(verts) > 1 and g.index(verts[0]) > g.index(verts[-1]):
            out = SourcePath(tuple(reversed(verts)), tuple(reversed(src)))
        return out


def product_spec(*specs: GroupSpec) -> GroupSpec:
    return GroupSpec(tuple(m for s in specs for m in s.moduli))


def _pair(spec: GroupSpec, x: GroupElement, tail: Sequence[int]) -> GroupElement:
    return spec.element(tuple(x.residues) + tuple(tail))


def encode_edge_sets(g: LabelledGraph, fsets: Sequence[Iterable[int]], lam: Optional[LambdaSet] = None) -> Encoding:
    """A-paths using at least one edge of every ``F_i`` (edge ids of ``g``).

    Without ``lam`` labels are ignored and the target group is ``(Z/2)^k``.
    With ``lam`` the source labels are kept as a first factor and the target
    Lambda becomes ``lam x {sum g_i}``.
    """
    k = len(fsets)
    if k == 0:
        raise ValueError("need at least one edge set")
    fsets = [frozenset(f) for f in fsets]
    for f in fsets:
        bad = f - set(g.edges)
        if bad:
            raise ValueError(f"unknown edge ids {sorted(bad)}")
    base = g.spec if lam is not None else GroupSpec(())
    if lam is None:
        pairs = [frozenset(e.ends) for e in g.edges.values()]
        if len(pairs) != len(set(pairs)):
            raise ValueError("the label-free variant needs a simple source graph")
    spec = product_spec(base, GroupSpec((2,) * k))
    edges, emap = [], {}
    eid = 0
    for e in g.edges.values():
        members = [i for i in range(k) if e.eid in fsets[i]]
        head = e.label.residues if lam is not None else ()
        for size in range(len(members) + 1):
            for sub in itertools.combinations(members, size):
                tail = [1 if i in sub else 0 for i in range(k)]
                edges.append((eid, e.u, e.v, spec.element(tuple(head) + tuple(tail))))
                emap[eid] = e.eid
                eid += 1
    target = LabelledGraph(spec, g.vertices, edges, g.terminals)
    heads = [x.residues for x in lam] if lam is not None else [()]
    lam_t = LambdaSet.of(spec, [tuple(h) + (1,) * k for h in heads])
    constraint = {"edge_sets": [sorted(f) for f in fsets]}
    return Encoding("edges", g, constraint, target, lam_t, emap)


def encode_vertex_sets(g: LabelledGraph, usets: Sequence[Iterable], lam: Optional[LambdaSet] = None) -> Encoding:
    """A-paths meeting every ``U_i``, via the edges incident to ``U_i``."""
    usets = [frozenset(u) for u in usets]
    for u in usets:
        bad = [v for v in u if v not in g]
        if bad:
            raise ValueError(f"unknown vertices {bad}")
    fsets = [{e.eid for e in g.edges.values() if e.u in u or e.v in u} for u in usets]
    enc = encode_edge_sets(g, fsets, lam)
    enc.kind = "vertices"
    enc.constraint = {"vertex_sets": [sorted(u, key=g.index) for u in usets]}
    return enc


def encode_ab_paths(g: LabelledGraph, a_set: Iterable, b_set: Iterable, lam: LambdaSet) -> Encoding:
    """Allowable A-B-paths as allowable (A u B)-paths over ``Gamma x (Z/2)^2``."""
    a_set, b_set = frozenset(a_set), frozenset(b_set)
    ab = a_set | b_set
    spec = product_spec(g.spec, GroupSpec((2, 2)))
    edges, emap = [], {}
    eid = 0

    def put(e, tail):
        nonlocal eid
        edges.append((eid, e.u, e.v, _pair(spec, e.label, tail)))
        emap[eid] = e.eid
        eid += 1

    for e in g.edges.values():
        u, v = e.u, e.v
        if u not in ab and v not in ab:
            put(e, (0, 0))
        elif (u in ab) != (v in ab):
            end = u if u in ab else v
            if end in a_set:
                put(e, (1, 0))
            if end in b_set:
                put(e, (0, 1))
        elif (u in a_set and v in b_set) or (u in b_set and v in a_set):
            put(e, (1, 1))
        # both ends in A - B, or both in B - A: such an edge lies on no A-B-path
    target = LabelledGraph(spec, g.vertices, edges, ab)
    lam_t = LambdaSet.of(spec, [tuple(x.residues) + (1, 1) for x in lam])
    constraint = {"A": sorted(a_set, key=g.index), "B": sorted(b_set, key=g.index), "lambda": [str(x) for x in lam]}
    return Encoding("ab", g, constraint, target, lam_t, emap)


def encode_weak_ab(g: LabelledGraph, a_set: Iterable, b_set: Iterable, lam: LambdaSet) -> Encoding:
    """Allowable weak A-B-paths (interior may meet A u B) via pendant copies.

    A vertex of A and B gets both pendants, so the one-vertex path at it is
    represented too (by ``A'-v-B'``).
    """
    a_set, b_set = frozenset(a_set), frozenset(b_set)
    spec = product_spec(g.spec, GroupSpec((2, 2)))
    edges, emap = [], {}
    for e in g.edges.values():
        edges.append((e.eid, e.u, e.v, _pair(spec, e.label, (0, 0))))
        emap[e.eid] = e.eid
    eid = max(g.edges, default=-1) + 1
    vertices = list(g.vertices)
    vmap = {v: v for v in g.vertices}
    terms = []
    for tag, side, tail in (("A'", a_set, (1, 0)), ("B'", b_set, (0, 1))):
        for v in sorted(side, key=g.index):
            x = f"{tag}{v}"
            if x in vmap:
                raise ValueError(f"pendant name {x!r} clashes with a source vertex")
            vertices.append(x)
            terms.append(x)
            vmap[x] = None
            edges.append((eid, x, v, spec.element((0,) * g.spec.rank + tail)))
            emap[eid] = None
            eid += 1
    target = LabelledGraph(spec, vertices, edges, terms)
    lam_t = LambdaSet.of(spec, [tuple(x.residues) + (1, 1) for x in lam])
    constraint = {"A": sorted(a_set, key=g.index), "B": sorted(b_set, key=g.index), "lambda": [str(x) for x in lam]}
    return Encoding("weak-ab", g, constraint, target, lam_t, emap, vmap)


def encode_h_feasible(
    g: LabelledGraph,
    partition: Sequence[Iterable],
    h_edges: Iterable[tuple[int, int]],
    lambda_fn: Mapping[tuple[int, int], Iterable],
) -> Encoding:
    """(H, Lambda)-feasible A-paths over ``Gamma x (Z/3)^k``.

    ``partition`` lists the parts ``S_0..S_{k-1}`` of the terminal set,
    ``h_edges`` the edges ``(i, j)`` of H (``i == j`` is a loop) and
    ``lambda_fn[(i, j)]`` the allowed lengths for paths between those parts.
    """
    parts = [frozenset(s) for s in partition]
    k = len(parts)
    where = {}
    for i, s in enumerate(parts):
        for v in s:
            if v in where:
                raise ValueError(f"vertex {v!r} lies in two parts")
            where[v] = i
    missing = [a for a in g.terminals if a not in where]
    if missing:
        raise ValueError(f"terminals missing from the partition: {sorted(missing, key=g.index)}")
    extra = [v for v in where if v not in g.terminals]
    if extra:
        raise ValueError(f"partition holds non-terminals: {extra}")
    h = {tuple(sorted(f)) for f in h_edges}
    for i, j in h:
        if not (0 <= i < k and 0 <= j < k):
            raise ValueError(f"H edge {(i, j)} names a missing part")
    spec = product_spec(g.spec, GroupSpec((3,) * k))

    def unit(i):
        return [1 if t == i else 0 for t in range(k)]

    def plus(x, y):
        return [(p + q) % 3 for p, q in zip(x, y)]

    edges, emap = [], {}
    for e in g.edges.values():
        tail = [0] * k
        for x in (e.u, e.v):
            if x in where:
                tail = plus(tail, unit(where[x]))
        edges.append((e.eid, e.u, e.v, _pair(spec, e.label, tail)))
        emap[e.eid] = e.eid
    target = LabelledGraph(spec, g.vertices, edges, g.terminals)
    allowed = []
    fn = {tuple(sorted(f)): vals for f, vals in lambda_fn.items()}
    for i, j in sorted(h):
        tail = plus(unit(i), unit(j))
        for x in fn.get((i, j), ()):
            allowed.append(tuple(g.spec.element(x).residues) + tuple(tail))
    lam_t = LambdaSet.of(spec, allowed)
    constraint = {
        "partition": [sorted(s, key=g.index) for s in parts],
        "H": sorted(h),
        "lambda": {f"{i},{j}": [str(g.spec.element(x)) for x in fn.get((i, j), ())] for i, j in sorted(h)},
    }
    return Encoding("hfeasible", g, constraint, target, lam_t, emap)


def encode_modular(g: LabelledGraph, m: int, residues: Iterable[int]) -> Encoding:
    """A-paths whose number of edges lies in ``residues`` modulo ``m``."""
    if m < 1:
        raise ValueError("modulus must be positive")
    pairs = [frozenset(e.ends) for e in g.edges.values()]
    if len(pairs) != len(set(pairs)):
        raise ValueError("edge counting needs a simple source graph")
    spec = GroupSpec((m,) if m > 1 else ())
    one = spec.element(1) if m > 1 else spec.zero
    edges = [(e.eid, e.u, e.v, one) for e in g.edges.values()]
    target = LabelledGraph(spec, g.vertices, edges, g.terminals)
    res = sorted({int(r) % m for r in residues})
    lam_t = LambdaSet.of(spec, [spec.element(r) if m > 1 else spec.zero for r in res])
    emap = {e.eid: e.eid for e in g.edges.values()}
    return Encoding("mod", g, {"m": m, "residues": res}, target, lam_t, emap)
