import random

import pytest

from apathep import linkage, paths
from apathep.epcond import LambdaSet
from apathep.group import GroupSpec
from apathep.lgraph import LabelledGraph
from apathep.obstruct import gen_fig1a
from apathep.walls import elementary_wall


def rand_disk(rng):
    """A small wall with identity labels plus random exterior terminals and connectors on its boundary."""
    spec = GroupSpec((rng.choice([2, 3, 4, 6]),))
    w = elementary_wall(3, rng.choice([3, 4]), spec)
    cyc = w.boundary
    verts = list(w.vertices)
    edges = [(e.u, e.v, 0) for e in w.graph.edges.values()]
    terms = []
    for t in range(rng.randint(2, 6)):
        a = f"t{t}"
        verts.append(a)
        terms.append(a)
        for p in rng.sample(cyc, rng.choice([1, 1, 1, 2])):
            edges.append((a, p, rng.randrange(spec.order)))
    for t in range(rng.randint(0, 4)):
        x = f"x{t}"
        verts.append(x)
        for p in rng.sample(cyc, rng.choice([2, 2, 3])):
            edges.append((x, p, rng.randrange(spec.order)))
    g = LabelledGraph(spec, verts, edges, terms)
    lam = LambdaSet.of(spec, rng.sample(range(spec.order), rng.randint(1, spec.order)))
    return g, lam, linkage.DiskGraph(g, w.vertices, w.boundary)


@pytest.mark.parametrize("seed", range(4))
def test_packing_matches_enumeration(seed):
    rng = random.Random(seed)
    for _ in range(15):
        g, lam, dg = rand_disk(rng)
        got = linkage.max_packing(dg, lam)
        assert got.size == paths.max_packing(g, lam).size
        seen = set()
        for p in got.paths:
            assert p.gamma_length in lam
            assert not seen & p.vertex_set
            seen |= p.vertex_set


@pytest.mark.parametrize("seed", range(3))
def test_cover_matches_enumeration(seed):
    rng = random.Random(50 + seed)
    for _ in range(12):
        g, lam, dg = rand_disk(rng)
        got = linkage.min_cover(dg, lam)
        assert got.size == paths.min_cover(g, lam).size
        assert not paths.enumerate_allowable(g.delete_vertices(got.vertices), lam)


def test_disk_graph_validation():
    z2 = GroupSpec((2,))
    w = elementary_wall(3, 3, z2)
    cyc = w.boundary
    inner = [v for v in w.vertices if v not in cyc]
    edges = [(e.u, e.v, 0) for e in w.graph.edges.values()]
    bad_label = [(e.u, e.v, 1) if i == 0 else (e.u, e.v, 0) for i, e in enumerate(w.graph.edges.values())]
    with pytest.raises(ValueError):
        linkage.DiskGraph(LabelledGraph(z2, w.vertices, bad_label), w.vertices, cyc)
    g = LabelledGraph(z2, list(w.vertices) + ["t"], edges + [("t", inner[0], 0)], ["t"])
    with pytest.raises(ValueError):
        linkage.DiskGraph(g, w.vertices, cyc)
    g = LabelledGraph(z2, list(w.vertices) + ["t", "u"], edges + [("t", "u", 0)], ["t"])
    with pytest.raises(ValueError):
        linkage.DiskGraph(g, w.vertices, cyc)


def test_upper_bound_shortcut():
    z6 = GroupSpec((6,))
    r = gen_fig1a(z6, 0, 1, 3, 2)
    dg = linkage.from_ribboned(r)
    lam = LambdaSet.of(z6, [4])
    assert linkage.max_packing(dg, lam).size == 1
    assert linkage.max_packing(dg, lam, upper=1).size == 1
