"""Independent reference implementations used by the tests.

Nothing here imports the package's path search or solvers: paths come from
networkx's simple-path enumeration and packings / covers from plain subset
enumeration.  Only the graph container and group arithmetic are shared.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from typing import Optional

import networkx as nx

from apathep.group import GroupSpec
from apathep.lgraph import LabelledGraph


def random_graph(rng: random.Random, spec: GroupSpec, n: int, p: float, n_terms: int, multi: float = 0.15):
    """Seeded random labelled multigraph on ``v0..v{n-1}`` with ``n_terms`` terminals."""
    names = [f"v{i}" for i in range(n)]
    edges = []
    for u, v in itertools.combinations(names, 2):
        if rng.random() >= p:
            continue
        labels = [rng.randrange(spec.order)]
        if spec.order > 1 and rng.random() < multi:
            labels.append(rng.randrange(spec.order))
        for lab in dict.fromkeys(labels):
            edges.append((u, v, spec.from_index(lab)))
    terms = rng.sample(names, n_terms)
    return LabelledGraph(spec, names, edges, terms)


def nx_graph(g: LabelledGraph) -> nx.MultiGraph:
    G = nx.MultiGraph()
    G.add_nodes_from(g.vertices)
    for e in g.edges.values():
        G.add_edge(e.u, e.v, key=e.eid, label=e.label)
    return G


def oracle_paths(g: LabelledGraph, accept=lambda gamma: True, interior_ok=None) -> set:
    """(vertex tuple, edge-id tuple, gamma) for every path between two terminals, read from the lower-index end.

    ``interior_ok(v)`` decides which vertices may be interior; by default
    exactly the non-terminals.
    """
    if interior_ok is None:
        interior_ok = lambda v: v not in g.terminals  # noqa: E731
    G = nx_graph(g)
    out = set()
    terms = sorted(g.terminals, key=g.index)
    for s, t in itertools.combinations(terms, 2):
        keep = [v for v in g.vertices if v in (s, t) or interior_ok(v)]
        H = G.subgraph(keep)
        for epath in nx.all_simple_edge_paths(H, s, t):
            verts = [s] + [e[1] for e in epath]
            eids = tuple(e[2] for e in epath)
            gamma = g.spec.zero
            for eid in eids:
                gamma = gamma + g.edges[eid].label
            if accept(gamma):
                out.add((tuple(verts), eids, gamma))
    return out


def allowable(g: LabelledGraph, lam) -> set:
    return oracle_paths(g, lambda x: x in lam)


def max_disjoint(vertex_sets, bound: Optional[int] = None) -> int:
    """Largest pairwise-disjoint subfamily: take-or-skip recursion over the distinct sets."""
    sets = sorted({frozenset(s) for s in vertex_sets}, key=sorted)

    def best(rest):
        if not rest:
            return 0
        head, tail = rest[0], rest[1:]
        return max(best(tail), 1 + best([s for s in tail if not s & head]))

    out = best(sets)
    return out if bound is None else min(out, bound)


def max_half(vertex_sets, bound: Optional[int] = None) -> int:
    """Largest multiset with every vertex in at most two members (so each set at most twice)."""
    sets = sorted({frozenset(s) for s in vertex_sets}, key=sorted)

    def best(i, use):
        if i == len(sets):
            return 0
        out = best(i + 1, use)
        for times in (1, 2):
            if all(use[v] + times <= 2 for v in sets[i]):
                nxt = Counter(use)
                for v in sets[i]:
                    nxt[v] += times
                out = max(out, times + best(i + 1, nxt))
        return out

    out = best(0, Counter())
    return out if bound is None else min(out, bound)


def min_transversal(vertices, vertex_sets) -> int:
    sets = [frozenset(s) for s in vertex_sets]
    if not sets:
        return 0
    for k in range(1, len(vertices) + 1):
        for combo in itertools.combinations(vertices, k):
            c = set(combo)
            if all(s & c for s in sets):
                return k
    raise AssertionError("unreachable: the whole vertex set is a transversal")


def pair_relation(p, q):
    """series / nested / crossing, read from how many ends of ``q`` fall strictly inside ``p``."""
    a, b = sorted(p)
    inside = sum(a < x < b for x in q)
    if inside == 1:
        return "crossing"
    if inside == 2:
        return "nested"
    c, d = sorted(q)
    return "nested" if c < a < d else "series"


def random_pairs(rng, n):
    """``n`` pairwise-disjoint pairs of distinct integers, in random order."""
    pts = rng.sample(range(4 * n + 4), 2 * n)
    rng.shuffle(pts)
    return [(pts[2 * i], pts[2 * i + 1]) for i in range(n)]
