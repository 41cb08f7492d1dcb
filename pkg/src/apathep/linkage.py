"""Exact packing for graphs made of an identity-labelled disk and exterior attachments.

The graphs of ribboned walls have this shape: the wall is drawn in a closed
disk whose boundary is its outer cycle, every wall edge carries the identity,
and everything else is a vertex outside the disk whose neighbours all lie on
that cycle (pendant terminals and two-ended handle midpoints).

An A-path then alternates between exterior vertices and segments inside the
disk.  Its length depends only on the exterior edges it uses, so it is
determined by a short *plan*: the exterior vertices in order plus the
boundary vertices (ports) it enters and leaves the disk at.  Disjoint paths
give disjoint segments inside the disk, and two disjoint curves in a disk
cannot join interleaved boundary points.  The search below enumerates
families of plans whose segments pairwise do not interleave, then asks an
ILP to route the segments.  Families that fail the interleaving test are
discarded without any flow computation, which is what makes wall instances
with a single allowable path per crossing pattern cheap to settle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .epcond import LambdaSet
from .lgraph import ApPath, LabelledGraph, make_path
from .milp import SolverFailure, _solve

__all__ = ["DiskGraph", "Plan", "max_packing", "min_cover", "from_ribboned"]


@dataclass(frozen=True)
class Plan:
    """Exterior skeleton of an A-path.

    ``hops`` lists ``(port_in, exterior_vertex, edge_in, edge_out, port_out)``
    for every pass through a non-terminal exterior vertex; ``chords`` are the
    port pairs that must be joined inside the disk.
    """

    start: object
    start_edge: int
    hops: tuple
    end: object
    end_edge: int
    chords: tuple
    ports: frozenset
    outside: frozenset


class DiskGraph:
    def __init__(self, g: LabelledGraph, disk: Sequence, cycle: Sequence):
        self.g = g
        self.disk = frozenset(disk)
        self.cycle = tuple(cycle)
        self.pos = {v: i for i, v in enumerate(self.cycle)}
        if set(self.cycle) - self.disk:
            raise ValueError("boundary cycle leaves the disk")
        zero = g.spec.zero
        self.attach: dict = {}  # exterior vertex -> [(eid, port, label index)]
        for e in g.edges.values():
            inside = (e.u in self.disk, e.v in self.disk)
            if all(inside):
                if e.label != zero:
                    raise ValueError(f"disk edge {e.eid} carries {e.label}, expected the identity")
                continue
            if not any(inside):
                raise ValueError(f"edge {e.eid} joins two exterior vertices")
            x, p = (e.v, e.u) if inside[0] else (e.u, e.v)
            if p not in self.pos:
                raise ValueError(f"exterior vertex {x!r} attaches off the boundary cycle at {p!r}")
            self.attach.setdefault(x, []).append((e.eid, p, e.label.index))
        inner_terms = self.disk & g.terminals
        if inner_terms:
            raise ValueError(f"terminals inside the disk: {sorted(map(str, inner_terms))[:5]}")
        self.at_port: dict = {}
        for x, lst in self.attach.items():
            for eid, p, lab in lst:
                self.at_port.setdefault(p, []).append((eid, x, lab))
        for lst in self.at_port.values():
            lst.sort(key=lambda t: (g.index(t[1]), t[0]))

    def delete_vertices(self, removed) -> "DiskGraph":
        removed = set(removed)
        return DiskGraph(
            self.g.delete_vertices(removed),
            [v for v in self.disk if v not in removed],
            [v for v in self.cycle if v not in removed],
        )

    def interleaved(self, c1: tuple, c2: tuple) -> bool:
        a, b = sorted((self.pos[c1[0]], self.pos[c1[1]]))
        c, d = self.pos[c2[0]], self.pos[c2[1]]
        if len({a, b, c, d}) < 4:
            return False
        return (a < c < b) != (a < d < b)


def from_ribboned(r) -> DiskGraph:
    return DiskGraph(r.graph, r.wall.vertices, r.wall.boundary)


def _crosses(dg: DiskGraph, chord, chords) -> bool:
    if chord[0] == chord[1]:
        return False
    return any(c[0] != c[1] and dg.interleaved(chord, c) for c in chords)


def _plans_from(dg: DiskGraph, lam: LambdaSet, t0, taken_ports, taken_out, fixed_chords):
    """Yield every plan starting at terminal ``t0`` compatible with the given reservations."""
    g = dg.g
    add = g.spec.add_table.tolist()
    in_lam = lam.mask.tolist()
    terms = g.terminals
    i0 = g.index(t0)

    def grow(at, gamma, ports, outside, chords, hops, start_edge):
        # standing on port ``at``; pick the port where the path leaves the disk
        candidates = [at] + [p for p in dg.at_port if p not in ports and p not in taken_ports]
        for b in candidates:
            chord = (at, b)
            if _crosses(dg, chord, fixed_chords) or _crosses(dg, chord, chords):
                continue
            ports2 = ports | {b}
            for eid, y, lab in dg.at_port.get(b, ()):
                if y in outside or y in taken_out:
                    continue
                gam = add[gamma][lab]
                if y in terms:
                    if g.index(y) > i0 and in_lam[gam]:
                        yield Plan(t0, start_edge, hops, y, eid, chords + (chord,), frozenset(ports2), frozenset(outside | {y}))
                    continue
                for eid2, c, lab2 in dg.attach[y]:
                    if eid2 == eid or c in ports2 or c in taken_ports:
                        continue
                    yield from grow(
                        c,
                        add[gam][lab2],
                        ports2 | {c},
                        outside | {y},
                        chords + (chord,),
                        hops + ((b, y, eid, eid2, c),),
                        start_edge,
                    )

    for eid, p, lab in dg.attach.get(t0, ()):
        if p in taken_ports:
            continue
        yield from grow(p, lab, frozenset({p}), frozenset({t0}), (), (), eid)


def _route(dg: DiskGraph, plans: Sequence[Plan], time_limit) -> Optional[list[ApPath]]:
    """Route every chord of every plan through the disk with vertex-disjoint paths, or None."""
    g = dg.g
    disk = sorted(dg.disk, key=g.index)
    vid = {v: i for i, v in enumerate(disk)}
    darcs = []
    for e in g.edges.values():
        if e.u in dg.disk and e.v in dg.disk:
            darcs.append((vid[e.u], vid[e.v], e.eid))
            darcs.append((vid[e.v], vid[e.u], e.eid))
    chords = [(pi, c) for pi, p in enumerate(plans) for c in p.chords]
    moving = [(pi, c) for pi, c in chords if c[0] != c[1]]
    m = len(darcs)
    nvar = m * len(moving)
    n = len(disk)
    usage = [[] for _ in range(n)]
    fixed_use = [0] * n
    for _, (a, b) in chords:
        if a == b:
            fixed_use[vid[a]] += 1
    rows = []
    for k, (_, (a, b)) in enumerate(moving):
        bal = [[] for _ in range(n)]
        for j, (t, h, _) in enumerate(darcs):
            col = k * m + j
            bal[t].append((col, 1.0))
            bal[h].append((col, -1.0))
            usage[h].append((col, 1.0))
        for v in range(n):
            want = 1.0 if v == vid[a] else -1.0 if v == vid[b] else 0.0
            rows.append((bal[v], want, want))
        fixed_use[vid[a]] += 1
    for v in range(n):
        if usage[v] or fixed_use[v]:
            rows.append((usage[v], -np.inf, 1.0 - fixed_use[v]))
    if any(u > 1 for u in fixed_use):
        return None
    if nvar == 0:
        x = np.zeros(0, dtype=int)
    else:
        x = _solve(np.ones(nvar), np.ones(nvar), np.zeros(nvar), np.ones(nvar), rows, time_limit)
        if x is None:
            return None
    segments = {}
    for k, (pi, (a, b)) in enumerate(moving):
        nxt = {}
        for j, (t, h, eid) in enumerate(darcs):
            if x[k * m + j]:
                nxt[t] = (h, eid)
        verts, eids, here = [a], [], vid[a]
        while here != vid[b]:
            here, eid = nxt[here]
            verts.append(disk[here])
            eids.append(eid)
        segments[(pi, (a, b))] = (verts, eids)
    out = []
    for pi, p in enumerate(plans):
        verts, eids = [p.start], [p.start_edge]
        legs = list(p.hops) + [None]
        for chord, hop in zip(p.chords, legs):
            if chord[0] == chord[1]:
                sv, se = [chord[0]], []
            else:
                sv, se = segments[(pi, chord)]
            verts += sv
            eids += se
            if hop is not None:
                _, y, e_in, e_out, _ = hop
                verts.append(y)
                eids += [e_in, e_out]
        verts.append(p.end)
        eids.append(p.end_edge)
        out.append(make_path(g, verts, eids))
    return out


def max_packing(dg: DiskGraph, lam: LambdaSet, upper: Optional[int] = None, time_limit: Optional[float] = None):
    """Maximum number of disjoint allowable A-paths, with a realising packing.

    ``upper`` is an optional known bound (a cover size, say) that lets the
    search stop as soon as it is met.
    """
    from .paths import PackingResult

    g = dg.g
    if lam.spec != g.spec:
        raise ValueError(f"Lambda lives in {lam.spec}, graph in {g.spec}")
    terms = sorted((t for t in g.terminals if t in dg.attach), key=g.index)
    limit = len(terms) // 2 if upper is None else min(upper, len(terms) // 2)
    best: list = []

    def search(family, ports, outside, chords, after):
        nonlocal best
        if len(best) >= limit:
            return
        free = sum(1 for t in terms if t not in outside and g.index(t) > after)
        # every further path starts after ``after`` and needs two fresh terminals
        if len(family) + free // 2 <= len(best):
            return
        for t0 in terms:
            if g.index(t0) <= after or t0 in outside:
                continue
            for plan in _plans_from(dg, lam, t0, ports, outside, chords):
                fam = family + [plan]
                if len(fam) > len(best):
                    routed = _route(dg, fam, time_limit)
                    if routed is None:
                        continue
                    best = routed
                    if len(best) >= limit:
                        return
                search(fam, ports | plan.ports, outside | plan.outside, chords + plan.chords, g.index(t0))
                if len(best) >= limit:
                    return

    search([], frozenset(), frozenset(), (), -1)
    return PackingResult(sorted(best, key=lambda p: [g.index(v) for v in p.vertices]), "integral")


def min_cover(dg: DiskGraph, lam: LambdaSet, time_limit: Optional[float] = None, max_rounds: int = 10_000):
    """Minimum cover by cutting planes, with the plan search as the separation oracle."""
    from .milp import _hitting_set
    from .paths import CoverResult

    g = dg.g
    pool: list[frozenset] = []
    cover = frozenset()
    for _ in range(max_rounds):
        found = max_packing(dg.delete_vertices(cover), lam, upper=1, time_limit=time_limit).paths
        if not found:
            return CoverResult(cover, True)
        pool.append(found[0].vertex_set)
        cover = _hitting_set(g, pool, time_limit)
    raise SolverFailure(f"cover search did not converge in {max_rounds} rounds")
