"""Integer programmes for packing and covering allowable A-paths.

Paths are modelled as flows in the product of the graph with the group: a
node ``(v, x)`` means "standing at non-terminal ``v`` having accumulated
``x``".  A unit of flow leaves a source node ``S(a)``, walks through product
nodes and enters a sink node ``T(b)`` only if its accumulated length lands in
Lambda.  Vertex capacities are charged over all states of a vertex, so with
capacity 1 every unit of flow traces a simple path and paths are pairwise
disjoint.  Half-integral packings use one commodity per path so that two
paths may share a vertex but no path may reuse one.

Covers are found by cutting planes: solve a hitting-set ILP over a pool of
paths, look for allowable paths avoiding the current set, add them, repeat.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_array

from .epcond import LambdaSet
from .lgraph import ApPath, LabelledGraph, make_path

__all__ = ["SolverFailure", "ProductNetwork", "max_packing", "packing_of_size", "min_cover", "walk_cut"]


class SolverFailure(RuntimeError):
    """The MILP solver stopped without a proven optimum (time limit or numerical trouble)."""


@dataclass
class Arc:
    tail: object
    head: object
    eid: int
    charges: tuple  # vertex indices this arc uses up


class ProductNetwork:
    """Pruned product of ``g`` with its label group; only nodes on some source-sink route survive."""

    def __init__(self, g: LabelledGraph, lam: LambdaSet):
        if lam.spec != g.spec:
            raise ValueError(f"Lambda lives in {lam.spec}, graph in {g.spec}")
        self.g = g
        spec = g.spec
        add = spec.add_table.tolist()
        neg = spec.neg_table.tolist()
        in_lam = lam.mask.tolist()
        n = g.n
        term = [v in g.terminals for v in g.vertices]
        adj = [[] for _ in range(n)]
        for e in g.edges.values():
            iu, iv = g.index(e.u), g.index(e.v)
            adj[iu].append((e.eid, iv, e.label.index))
            adj[iv].append((e.eid, iu, e.label.index))

        # forward reachability from the sources
        fwd = set()
        queue = deque()
        for a in range(n):
            if term[a]:
                for _, w, lab in adj[a]:
                    if not term[w] and (w, lab) not in fwd:
                        fwd.add((w, lab))
                        queue.append((w, lab))
        while queue:
            v, x = queue.popleft()
            for _, w, lab in adj[v]:
                node = (w, add[x][lab])
                if not term[w] and node not in fwd:
                    fwd.add(node)
                    queue.append(node)

        # backward reachability from the sinks, restricted to forward nodes
        good = set()
        for node in fwd:
            v, x = node
            if any(term[b] and in_lam[add[x][lab]] for _, b, lab in adj[v]):
                good.add(node)
                queue.append(node)
        while queue:
            u, y = queue.popleft()
            for _, v, lab in adj[u]:
                node = (v, add[y][neg[lab]])
                if not term[v] and node in fwd and node not in good:
                    good.add(node)
                    queue.append(node)

        arcs: list[Arc] = []
        for a in range(n):
            if not term[a]:
                continue
            for eid, w, lab in adj[a]:
                if term[w]:
                    if w > a and in_lam[lab]:
                        arcs.append(Arc(("S", a), ("T", w), eid, (a, w)))
                elif (w, lab) in good:
                    arcs.append(Arc(("S", a), ("N", w, lab), eid, (a, w)))
        for v, x in sorted(good):
            for eid, w, lab in adj[v]:
                y = add[x][lab]
                if term[w]:
                    if in_lam[y]:
                        arcs.append(Arc(("N", v, x), ("T", w), eid, (w,)))
                elif (w, y) in good:
                    arcs.append(Arc(("N", v, x), ("N", w, y), eid, (w,)))
        self.arcs = arcs
        self.nodes = sorted(("N", v, x) for v, x in good)
        self.terminals = [i for i in range(n) if term[i]]

    @property
    def empty(self) -> bool:
        return not self.arcs

    def _rows(self):
        """(conservation rows, vertex-usage rows, source arcs) over one copy of the arc variables."""
        node_id = {nd: i for i, nd in enumerate(self.nodes)}
        cons = [[] for _ in self.nodes]
        usage: dict[int, list] = {}
        sources = []
        for i, arc in enumerate(self.arcs):
            if arc.tail[0] == "N":
                cons[node_id[arc.tail]].append((i, -1.0))
            else:
                sources.append(i)
            if arc.head[0] == "N":
                cons[node_id[arc.head]].append((i, 1.0))
            for v in arc.charges:
                usage.setdefault(v, []).append(i)
        return cons, sorted(usage.items()), sources


def _solve(c, integrality, lb, ub, rows, time_limit):
    """rows: list of (list of (col, coef), lo, hi)."""
    nvar = len(c)
    data, ri, ci, lo, hi = [], [], [], [], []
    for r, (terms, l, h) in enumerate(rows):
        for col, coef in terms:
            ri.append(r)
            ci.append(col)
            data.append(coef)
        lo.append(l)
        hi.append(h)
    cons = []
    if rows:
        A = coo_array((data, (ri, ci)), shape=(len(rows), nvar)).tocsr()
        cons.append(LinearConstraint(A, lo, hi))
    options = {"disp": False, "mip_rel_gap": 0.0}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    res = milp(
        c=np.asarray(c, dtype=float),
        integrality=np.asarray(integrality),
        bounds=Bounds(lb, ub),
        constraints=cons,
        options=options,
    )
    if res.status == 2:
        return None
    if res.status != 0 or res.x is None:
        raise SolverFailure(f"MILP solver stopped: {res.message}")
    return np.round(res.x).astype(int)


def _trace(net: ProductNetwork, values) -> list[ApPath]:
    """Turn one commodity's 0/1 arc values into A-paths."""
    g = net.g
    out_arcs: dict = {}
    starts = []
    for i, arc in enumerate(net.arcs):
        if values[i] <= 0:
            continue
        if arc.tail[0] == "S":
            starts.append(i)
        else:
            out_arcs.setdefault(arc.tail, []).append(i)
    paths = []
    for i in starts:
        arc = net.arcs[i]
        verts = [g.vertices[arc.tail[1]]]
        eids = []
        while True:
            verts.append(g.vertices[arc.head[1]])
            eids.append(arc.eid)
            if arc.head[0] == "T":
                break
            nxt = out_arcs[arc.head]
            arc = net.arcs[nxt.pop()]
        paths.append(make_path(g, verts, eids).canonical(g))
    return paths


def _sort_paths(g: LabelledGraph, paths: list[ApPath]) -> list[ApPath]:
    return sorted(paths, key=lambda p: ([g.index(v) for v in p.vertices], p.edge_ids))


def _single_commodity(net: ProductNetwork, cap: int, time_limit, fixed: Optional[int] = None):
    cons, usage, sources = net._rows()
    m = len(net.arcs)
    rows = [(terms, 0.0, 0.0) for terms in cons if terms]
    rows += [([(i, 1.0) for i in arcs], 0.0, float(cap)) for _, arcs in usage]
    if fixed is None:
        c = np.zeros(m)
        c[sources] = -1.0
    else:
        # a prescribed amount of flow: prefer short routes, which also keeps stray cycles out
        c = np.ones(m)
        rows.append(([(i, 1.0) for i in sources], float(fixed), float(fixed)))
    return _solve(c, np.ones(m), np.zeros(m), np.full(m, float(cap)), rows, time_limit)


def _multi_commodity(net: ProductNetwork, K: int, time_limit, lower: int = 0, fixed: bool = False):
    """K commodities, one path each, vertex capacity 1 per commodity and 2 overall."""
    cons, usage, sources = net._rows()
    m = len(net.arcs)
    nvar = K * m + K
    y0 = K * m

    def col(j, i):
        return j * m + i

    rows = []
    for j in range(K):
        rows += [([(col(j, i), s) for i, s in terms], 0.0, 0.0) for terms in cons if terms]
        rows.append(([(col(j, i), 1.0) for i in sources] + [(y0 + j, -1.0)], 0.0, 0.0))
        rows += [([(col(j, i), 1.0) for i in arcs], 0.0, 1.0) for _, arcs in usage]
        if j + 1 < K:
            rows.append(([(y0 + j, 1.0), (y0 + j + 1, -1.0)], 0.0, np.inf))
    for _, arcs in usage:
        rows.append(([(col(j, i), 1.0) for j in range(K) for i in arcs], 0.0, 2.0))
    if lower:
        rows.append(([(y0 + j, 1.0) for j in range(K)], float(lower), np.inf))
    c = np.zeros(nvar)
    c[y0:] = -1.0
    lb = np.zeros(nvar)
    if fixed:
        lb[y0:] = 1.0
    x = _solve(c, np.ones(nvar), lb, np.ones(nvar), rows, time_limit)
    if x is None:
        return None
    paths = []
    for j in range(K):
        if x[y0 + j]:
            paths += _trace(net, x[j * m : (j + 1) * m])
    return paths


def max_packing(
    g: LabelledGraph,
    lam: LambdaSet,
    mode: str = "integral",
    upper: Optional[int] = None,
    lower: Optional[int] = None,
    time_limit: Optional[float] = None,
):
    """Exact maximum packing via MILP; ``upper``/``lower`` are optional known bounds (half mode).

    In half mode with ``upper`` set, sizes are tried downward from the bound
    and the integral solve is skipped, so ``upper`` must be a true bound
    (twice a cover size, say) and ``lower`` a size known to be attained.
    """
    from .paths import PackingResult

    net = ProductNetwork(g, lam)
    if net.empty:
        return PackingResult([], mode)
    if mode == "half_integral" and upper is not None:
        return _half_by_descent(net, upper, lower or 0, time_limit)
    x = _single_commodity(net, 1, time_limit)
    integral = _sort_paths(g, _trace(net, x))
    if mode == "integral":
        return PackingResult(integral, mode)
    if mode != "half_integral":
        raise ValueError(f"unknown mode {mode!r}")
    base = max(2 * len(integral), lower or 0)
    # walks with capacity 2 bound the half-integral optimum from above
    relaxed = _single_commodity(net, 2, time_limit)
    _, _, sources = net._rows()
    ub = int(sum(relaxed[i] for i in sources))
    ub = min(ub, len(g.terminals))
    if upper is not None:
        ub = min(ub, upper)
    if ub <= 2 * len(integral):
        return PackingResult(_sort_paths(g, integral + integral), mode)
    paths = _multi_commodity(net, ub, time_limit, lower=base)
    if paths is None or len(paths) < 2 * len(integral):
        return PackingResult(_sort_paths(g, integral + integral), mode)
    return PackingResult(_sort_paths(g, paths), mode)


def _half_by_descent(net: ProductNetwork, upper: int, lower: int, time_limit):
    # with a true outside bound, fixed-size feasibility from the top is far cheaper than optimising
    from .paths import PackingResult

    g = net.g
    relaxed = _single_commodity(net, 2, time_limit)
    _, _, sources = net._rows()
    top = min(upper, len(g.terminals), int(sum(relaxed[i] for i in sources)))
    for size in range(top, max(lower, 0), -1):
        paths = _multi_commodity(net, size, time_limit, fixed=True)
        if paths is not None:
            return PackingResult(_sort_paths(g, paths), "half_integral")
    if lower <= 0:
        return PackingResult([], "half_integral")
    paths = _multi_commodity(net, lower, time_limit, fixed=True)
    if paths is None:
        raise SolverFailure(f"no half-integral packing of the promised size {lower}")
    return PackingResult(_sort_paths(g, paths), "half_integral")


def packing_of_size(g: LabelledGraph, lam: LambdaSet, k: int, mode: str = "integral", time_limit=None):
    """Some packing of exactly ``k`` paths, or None if there is none."""
    from .paths import PackingResult

    if k <= 0:
        return PackingResult([], mode)
    net = ProductNetwork(g, lam)
    if net.empty:
        return None
    if mode == "integral":
        x = _single_commodity(net, 1, time_limit, fixed=k)
        return None if x is None else PackingResult(_sort_paths(g, _trace(net, x)), mode)
    paths = _multi_commodity(net, k, time_limit, fixed=True)
    return None if paths is None else PackingResult(_sort_paths(g, paths), mode)


def _hitting_set(g: LabelledGraph, pool: list[frozenset], time_limit) -> frozenset:
    n = g.n
    rows = [([(g.index(v), 1.0) for v in sorted(ps, key=g.index)], 1.0, np.inf) for ps in pool]
    x = _solve(np.ones(n), np.ones(n), np.zeros(n), np.ones(n), rows, time_limit)
    if x is None:
        raise SolverFailure("hitting-set ILP reported infeasible")
    return frozenset(g.vertices[i] for i in range(n) if x[i])


def walk_cut(g: LabelledGraph, lam: LambdaSet, time_limit=None) -> frozenset:
    """Minimum vertex set blocking every allowable walk of the product network.

    Walks may revisit a vertex in a different state, so this is an upper
    bound on the cover number and its solution is always a valid cover.
    Reachability potentials ``p`` on product nodes are pushed to 1 along
    every uncut arc; a sink may only be reached through a deleted terminal.
    """
    net = ProductNetwork(g, lam)
    n = g.n
    if net.empty:
        return frozenset()
    node_id = {nd: n + i for i, nd in enumerate(net.nodes)}
    nvar = n + len(net.nodes)
    rows = []
    for arc in net.arcs:
        t, h = arc.tail, arc.head
        if t[0] == "S" and h[0] == "T":
            rows.append(([(t[1], 1.0), (h[1], 1.0)], 1.0, np.inf))
        elif t[0] == "S":
            rows.append(([(node_id[h], 1.0), (t[1], 1.0), (h[1], 1.0)], 1.0, np.inf))
        elif h[0] == "T":
            rows.append(([(h[1], 1.0), (node_id[t], -1.0)], 0.0, np.inf))
        else:
            rows.append(([(node_id[h], 1.0), (node_id[t], -1.0), (h[1], 1.0)], 0.0, np.inf))
    c = np.zeros(nvar)
    c[:n] = 1.0
    integrality = np.zeros(nvar)
    integrality[:n] = 1
    x = _solve(c, integrality, np.zeros(nvar), np.ones(nvar), rows, time_limit)
    if x is None:
        raise SolverFailure("walk-cut ILP reported infeasible")
    return frozenset(g.vertices[i] for i in range(n) if x[i])


def _quick_paths(net: ProductNetwork, max_steps: int = 20_000) -> list[ApPath]:
    """Depth-first search for simple allowable paths through live product nodes, one per source.

    Each source gets ``max_steps`` arc extensions; an empty answer proves nothing.
    """
    g = net.g
    out: dict = {}
    back: dict = {}
    for arc in net.arcs:
        out.setdefault(arc.tail, []).append(arc)
        back.setdefault(arc.head, []).append(arc)
    # steer towards the sinks: try arcs in order of remaining product distance
    dist = {nd: 0 for nd in back if nd[0] == "T"}
    queue = deque(dist)
    while queue:
        nd = queue.popleft()
        for arc in back.get(nd, ()):
            if arc.tail not in dist:
                dist[arc.tail] = dist[nd] + 1
                queue.append(arc.tail)
    for arcs in out.values():
        arcs.sort(key=lambda arc: dist.get(arc.head, len(dist)))
    found = []
    for a in net.terminals:
        stack = [iter(out.get(("S", a), ()))]
        on_path = {a}
        trail: list[Arc] = []
        steps = 0
        while stack and steps < max_steps:
            arc = next(stack[-1], None)
            if arc is None:
                stack.pop()
                if trail:
                    on_path.discard(trail.pop().head[1])
                continue
            steps += 1
            head = arc.head
            v = head[1]
            if v in on_path:
                continue
            if head[0] == "T":
                verts = [a] + [t.head[1] for t in trail] + [v]
                eids = [t.eid for t in trail] + [arc.eid]
                found.append(make_path(g, [g.vertices[i] for i in verts], eids))
                break
            trail.append(arc)
            on_path.add(v)
            stack.append(iter(out.get(head, ())))
    return found


def min_cover(g: LabelledGraph, lam: LambdaSet, time_limit=None, max_rounds: int = 10_000):
    """Minimum vertex cover of allowable A-paths by cutting planes.

    Each round takes a minimum hitting set of the paths collected so far and
    looks for an allowable path avoiding it: a bounded depth-first search
    first, an ILP for a single path when that gives up.  The first hitting set with
    nothing left to hit is a minimum cover.
    """
    from .paths import CoverResult

    pool: list[frozenset] = []
    seen = set()
    cover = frozenset()
    for _ in range(max_rounds):
        rest = g.delete_vertices(cover)
        net = ProductNetwork(rest, lam)
        if net.empty:
            return CoverResult(cover, True)
        found = [p.vertex_set for p in _quick_paths(net)]
        if not found:
            x = _single_commodity(net, 1, time_limit, fixed=1)
            if x is None:
                return CoverResult(cover, True)
            found = [p.vertex_set for p in _trace(net, x)]
        fresh = [vs for vs in found if vs not in seen]
        if not fresh:
            raise SolverFailure("separation returned a path that is already hit")
        for vs in fresh:
            seen.add(vs)
            pool.append(vs)
        cover = _hitting_set(g, pool, time_limit)
    raise SolverFailure(f"cover search did not converge in {max_rounds} rounds")
