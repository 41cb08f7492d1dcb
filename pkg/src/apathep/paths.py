"""Lambda-allowable A-paths: enumeration and exact packing / covering.

Two exact routes are available:

* ``method="enumerate"`` lists every allowable A-path (up to the ``cap``) and
  runs branch-and-bound over the list; this is the reference route for small
  graphs.
* ``method="ilp"`` solves integer programmes over the product of the graph
  with the group (see :mod:`apathep.milp`); it never lists paths and is what
  makes wall-sized instances tractable.

``method="auto"`` enumerates and falls back to the ILP on explosion.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .epcond import LambdaSet
from .lgraph import ApPath, LabelledGraph

__all__ = [
    "DEFAULT_CAP",
    "PathExplosion",
    "PackingResult",
    "CoverResult",
    "enumerate_allowable",
    "enumerate_apaths",
    "max_packing",
    "min_cover",
    "duality_report",
    "packing_at_least",
    "max_packing_of",
    "min_hitting_set",
]

DEFAULT_CAP = 200_000
METHODS = ("enumerate", "ilp", "auto")
MODES = ("integral", "half_integral")


class PathExplosion(RuntimeError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"more than {cap} paths (stopped at {count}); raise the cap or use method='ilp'")
        self.count = count
        self.cap = cap


@dataclass
class PackingResult:
    paths: list[ApPath]
    mode: str
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not self.certificate:
            cert: dict = {}
            for p in self.paths:
                for v in p.vertices:
                    cert[v] = cert.get(v, 0) + 1
            self.certificate = cert
        bound = 1 if self.mode == "integral" else 2
        if any(c > bound for c in self.certificate.values()):
            raise ValueError(f"{self.mode} packing uses a vertex more than {bound} times")

    @property
    def size(self) -> int:
        return len(self.paths)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "size": self.size,
            "paths": [[str(v) for v in p.vertices] for p in self.paths],
        }


@dataclass
class CoverResult:
    vertices: frozenset
    verified: bool = False

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {"size": self.size, "vertices": sorted(map(str, self.vertices)), "verified": self.verified}


# -- enumeration -----------------------------------------------------------


def _compile(g: LabelledGraph):
    spec = g.spec
    T = spec.add_table.tolist()
    adj = [[] for _ in g.vertices]
    for e in g.edges.values():
        iu, iv, lab = g.index(e.u), g.index(e.v), e.label.index
        adj[iu].append((e.eid, iv, lab))
        adj[iv].append((e.eid, iu, lab))
    term = [v in g.terminals for v in g.vertices]
    return T, adj, term


def _dfs_apaths(g: LabelledGraph, accept: Callable[[int], bool], cap: int, max_steps: Optional[int]):
    """Yield (vertex indices, edge ids, gamma index) of A-paths in canonical orientation."""
    T, adj, term = _compile(g)
    n = len(g.vertices)
    found = 0
    steps = 0
    limit = max_steps if max_steps is not None else 100 * cap
    out = []
    for s in range(n):
        if not term[s]:
            continue
        vpath, epath = [s], []
        on_path = [False] * n
        on_path[s] = True
        # explicit stack of neighbour iterators to avoid recursion limits
        stack = [(iter(adj[s]), 0)]
        while stack:
            it, gam = stack[-1]
            step = next(it, None)
            if step is None:
                stack.pop()
                if epath:
                    epath.pop()
                w = vpath.pop()
                on_path[w] = False
                continue
            eid, w, lab = step
            if on_path[w]:
                continue
            steps += 1
            if steps > limit:
                raise PathExplosion(found, cap)
            g2 = T[gam][lab]
            if term[w]:
                if w > s and accept(g2):
                    found += 1
                    if found > cap:
                        raise PathExplosion(found, cap)
                    out.append((tuple(vpath) + (w,), tuple(epath) + (eid,), g2))
                continue
            vpath.append(w)
            epath.append(eid)
            on_path[w] = True
            stack.append((iter(adj[w]), g2))
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def _to_paths(g: LabelledGraph, raw) -> list[ApPath]:
    verts = g.vertices
    return [ApPath(tuple(verts[i] for i in vs), es, g.spec.from_index(gi)) for vs, es, gi in raw]


def enumerate_allowable(
    g: LabelledGraph, lam: LambdaSet, cap: int = DEFAULT_CAP, max_steps: Optional[int] = None
) -> list[ApPath]:
    """Every Lambda-allowable A-path once (reversals identified), in canonical order.

    Raises :class:`PathExplosion` when more than ``cap`` paths exist or the
    search takes more than ``max_steps`` (default ``100 * cap``) extensions.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    if lam.spec != g.spec:
        raise ValueError(f"Lambda lives in {lam.spec}, graph in {g.spec}")
    mask = lam.mask.tolist()
    return _to_paths(g, _dfs_apaths(g, lambda x: mask[x], cap, max_steps))


def enumerate_apaths(g: LabelledGraph, cap: int = DEFAULT_CAP) -> list[ApPath]:
    """Every A-path regardless of gamma-length."""
    return _to_paths(g, _dfs_apaths(g, lambda x: True, cap, None))


# -- branch and bound over an explicit path list ----------------------------


def _masks(g: LabelledGraph, paths: Sequence[ApPath]) -> list[int]:
    return [sum(1 << g.index(v) for v in p.vertices) for p in paths]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bb_integral(masks: list[int], term_mask: int) -> list[int]:
    best: list[int] = []
    chosen: list[int] = []

    def rec(cands: list[int], used: int):
        nonlocal best
        if len(chosen) > len(best):
            best = chosen.copy()
        if not cands:
            return
        ub = len(chosen) + min(len(cands), _popcount(term_mask & ~used) // 2)
        if ub <= len(best):
            return
        i = cands[0]
        mi = masks[i]
        chosen.append(i)
        rec([j for j in cands[1:] if not masks[j] & mi], used | mi)
        chosen.pop()
        rec(cands[1:], used)

    rec(list(range(len(masks))), 0)
    return best


def _bb_half(masks: list[int], term_mask: int) -> list[int]:
    best: list[int] = []
    chosen: list[int] = []
    n_terms = _popcount(term_mask)

    def rec(cands: list[int], once: int, twice: int):
        nonlocal best
        if len(chosen) > len(best):
            best = chosen.copy()
        if not cands:
            return
        spare = 2 * n_terms - _popcount(once & term_mask) - _popcount(twice & term_mask)
        ub = len(chosen) + min(2 * len(cands), spare // 2)
        if ub <= len(best):
            return
        i = cands[0]
        mi = masks[i]
        t2 = twice | (once & mi)
        o2 = once | mi
        chosen.append(i)
        rec([j for j in cands if not masks[j] & t2], o2, t2)
        chosen.pop()
        rec(cands[1:], once, twice)

    rec(list(range(len(masks))), 0, 0)
    return best


def max_packing_of(g: LabelledGraph, paths: Sequence[ApPath], mode: str = "integral") -> PackingResult:
    """Maximum packing drawn from an explicit path list (canonical-order-first optimum)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    masks = _masks(g, paths)
    term_mask = sum(1 << g.index(t) for t in g.terminals)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * len(paths) + 1000))
    try:
        pick = _bb_integral(masks, term_mask) if mode == "integral" else _bb_half(masks, term_mask)
    finally:
        sys.setrecursionlimit(old)
    return PackingResult([paths[i] for i in pick], mode)


def min_hitting_set(g: LabelledGraph, paths: Sequence[ApPath]) -> frozenset:
    """Minimum vertex set meeting every path in ``paths`` (branch and bound)."""
    masks = sorted(set(_masks(g, paths)), key=lambda m: (_popcount(m), m))
    if not masks:
        return frozenset()
    # greedy upper bound
    greedy, hit = 0, 0
    for m in masks:
        if not m & hit:
            greedy |= m & -m
            hit = greedy
    best = [greedy]

    def lower_bound(chosen: int) -> int:
        lb, used = 0, 0
        for m in masks:
            if not m & chosen and not m & used:
                lb += 1
                used |= m
        return lb

    def rec(chosen: int, forbidden: int):
        size = _popcount(chosen)
        if size + lower_bound(chosen) >= _popcount(best[0]):
            return
        target = next((m for m in masks if not m & chosen), None)
        if target is None:
            best[0] = chosen
            return
        options = target & ~forbidden
        banned = forbidden
        while options:
            bit = options & -options
            options ^= bit
            rec(chosen | bit, banned)
            banned |= bit
        return

    # the greedy solution is feasible; search strictly smaller ones
    rec(0, 0)
    bits = best[0]
    return frozenset(g.vertices[i] for i in range(g.n) if bits >> i & 1)


# -- public solvers ------------------------------------------------------------


def _check_method(method: str):
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")


def _enumerate_or_none(g, lam, cap, method):
    if method == "ilp":
        return None
    try:
        return enumerate_allowable(g, lam, cap)
    except PathExplosion:
        if method == "enumerate":
            raise
        return None


def max_packing(
    g: LabelledGraph,
    lam: LambdaSet,
    mode: str = "integral",
    cap: int = DEFAULT_CAP,
    method: str = "enumerate",
) -> PackingResult:
    """Maximum integral or half-integral packing of Lambda-allowable A-paths."""
    _check_method(method)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    paths = _enumerate_or_none(g, lam, cap, method)
    if paths is not None:
        return max_packing_of(g, paths, mode)
    from . import milp

    return milp.max_packing(g, lam, mode)


def packing_at_least(
    g: LabelledGraph, lam: LambdaSet, k: int, mode: str = "integral", cap: int = DEFAULT_CAP, method: str = "auto"
) -> Optional[PackingResult]:
    """A packing of exactly ``k`` allowable A-paths if one exists, else None."""
    _check_method(method)
    paths = _enumerate_or_none(g, lam, cap, method)
    if paths is not None:
        best = max_packing_of(g, paths, mode)
        return PackingResult(best.paths[:k], mode) if best.size >= k else None
    from . import milp

    return milp.packing_of_size(g, lam, k, mode)


def min_cover(g: LabelledGraph, lam: LambdaSet, cap: int = DEFAULT_CAP, method: str = "enumerate") -> CoverResult:
    """Minimum vertex set meeting every Lambda-allowable A-path, re-verified."""
    _check_method(method)
    paths = _enumerate_or_none(g, lam, cap, method)
    if paths is not None:
        cover = min_hitting_set(g, paths)
        rest = g.delete_vertices(cover)
        try:
            verified = not enumerate_allowable(rest, lam, cap)
        except PathExplosion:
            from . import milp

            verified = not milp.max_packing(rest, lam, "integral").paths
        return CoverResult(cover, verified)
    from . import milp

    return milp.min_cover(g, lam)


def duality_report(
    g: LabelledGraph, lam: LambdaSet, cap: int = DEFAULT_CAP, method: str = "enumerate"
) -> tuple[int, int, Fraction]:
    """(nu, tau, nu_half) with nu_half half the maximum half-integral packing."""
    _check_method(method)
    paths = _enumerate_or_none(g, lam, cap, method)
    if paths is not None:
        nu = max_packing_of(g, paths, "integral").size
        half = max_packing_of(g, paths, "half_integral").size
        tau = len(min_hitting_set(g, paths))
    else:
        from . import milp

        nu = milp.max_packing(g, lam, "integral").size
        cover = milp.min_cover(g, lam)
        tau = cover.size
        half = milp.max_packing(g, lam, "half_integral", upper=2 * tau, lower=2 * nu).size
    return nu, tau, Fraction(half, 2)
