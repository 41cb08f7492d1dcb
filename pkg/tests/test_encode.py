import random

import pytest
from hypothesis import given, settings, strategies as st

from apathep.encode import (
    encode_ab_paths,
    encode_edge_sets,
    encode_h_feasible,
    encode_modular,
    encode_vertex_sets,
    encode_weak_ab,
    product_spec,
)
from apathep.epcond import LambdaSet
from apathep.group import GroupSpec
from apathep.lgraph import LabelledGraph, make_path
from apathep.paths import enumerate_allowable, max_packing

from encode_cases import (
    KINDS,
    _source,
    _subset,
    back_mapped,
    oracle_ab,
    oracle_h_feasible,
    oracle_weak_ab,
    random_case,
)
from oracles import max_disjoint


@pytest.mark.parametrize("kind", KINDS)
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_round_trip(kind, seed):
    enc, oracle = random_case(kind, seed)
    assert back_mapped(enc) == oracle


@pytest.mark.parametrize("kind", KINDS)
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_packing_transfer(kind, seed):
    enc, oracle = random_case(kind, seed)
    source_nu = max_disjoint([set(vs) for vs, _ in oracle])
    assert max_packing(enc.target, enc.lambda_target).size == source_nu


# -- worked examples -------------------------------------------------------------


def test_edge_set_power_set_copies():
    z2 = GroupSpec((2,))
    g = LabelledGraph(z2, ["a", "b"], [("a", "b", 0)], ["a", "b"])
    enc = encode_edge_sets(g, [{0}])
    labels = sorted(e.label.residues for e in enc.target.edges.values())
    assert labels == [(0,), (1,)]
    assert set(enc.lambda_target) == {GroupSpec((2,)).element(1)}
    with pytest.raises(ValueError):
        encode_edge_sets(g, [])
    with pytest.raises(ValueError):
        encode_edge_sets(g, [{5}])


def test_edge_sets_avoiding_path_is_not_allowable():
    z2 = GroupSpec((2,))
    g = LabelledGraph(z2, ["a", "x", "b"], [("a", "x", 0), ("x", "b", 0), ("a", "b", 0)], ["a", "b"])
    enc = encode_edge_sets(g, [{2}])
    got = back_mapped(enc)
    assert got == {(("a", "b"), (2,))}


def test_vertex_set_example():
    z2 = GroupSpec((2,))
    g = LabelledGraph(z2, ["a", "v", "w", "b"], [("a", "v", 0), ("v", "b", 0), ("a", "w", 0), ("w", "b", 0)], ["a", "b"])
    enc = encode_vertex_sets(g, [{"v"}])
    assert {vs for vs, _ in back_mapped(enc)} == {("a", "v", "b")}


def test_ab_examples():
    z3 = GroupSpec((3,))
    g = LabelledGraph(z3, ["a", "b", "c"], [("a", "b", 2), ("a", "c", 1)])
    enc = encode_ab_paths(g, {"a", "c"}, {"b"}, LambdaSet.of(z3, [2]))
    spec = product_spec(z3, GroupSpec((2, 2)))
    ab_edge = [e for e in enc.target.edges.values() if e.ends == {"a", "b"}]
    assert [e.label for e in ab_edge] == [spec.element((2, 1, 1))]
    # a-c has both ends in A - B and lies on no A-B-path
    assert not [e for e in enc.target.edges.values() if e.ends == {"a", "c"}]
    assert back_mapped(enc) == {(("a", "b"), (0,))}
    # a vertex in both A and B gets both parallel copies, with distinct labels
    enc2 = encode_ab_paths(g, {"a"}, {"a", "b"}, LambdaSet.of(z3, [1, 2]))
    copies = enc2.target.edges_between("a", "c")
    assert len(copies) == 2 and copies[0].label != copies[1].label
    assert back_mapped(enc2) == {(("a", "b"), (0,))}
    g3 = LabelledGraph(z3, ["u", "x", "v"], [("u", "x", 1), ("x", "v", 0)])
    enc3 = encode_ab_paths(g3, {"u"}, {"u", "v"}, LambdaSet.of(z3, [1]))
    assert len(enc3.target.edges_between("u", "x")) == 2
    assert back_mapped(enc3) == {(("u", "x", "v"), (0, 1))}


def test_weak_ab_examples():
    z3 = GroupSpec((3,))
    g = LabelledGraph(z3, ["a", "b", "a2"], [("a", "a2", 1), ("a2", "b", 1), ("a", "b", 1)])
    enc = encode_weak_ab(g, {"a", "a2"}, {"b"}, LambdaSet.of(z3, [1, 2]))
    spec = product_spec(z3, GroupSpec((2, 2)))
    p = make_path(enc.target, ["A'a", "a", "b", "B'b"], None)
    assert p.gamma_length == spec.element((1, 1, 1))
    got = back_mapped(enc)
    # a - a2 - b passes through a2 in A and is still a weak A-B-path
    assert (("a", "a2", "b"), (0, 1)) in got
    assert got == oracle_weak_ab(g, {"a", "a2"}, {"b"}, LambdaSet.of(z3, [1, 2]))
    enc2 = encode_weak_ab(g, {"b"}, {"b"}, LambdaSet.of(z3, [0]))
    assert back_mapped(enc2) == {(("b",), ())}


def test_h_feasible_mod3_example():
    # paths from A must reach C with length 2 mod 3 and reach B with length 1 mod 3
    z3 = GroupSpec((3,))
    names = ["a", "b", "c", "x", "y"]
    edges = [("a", "x", 1), ("x", "b", 0), ("x", "c", 1), ("a", "y", 0), ("y", "c", 0), ("b", "y", 1)]
    g = LabelledGraph(z3, names, edges, ["a", "b", "c"])
    parts = [["a"], ["b"], ["c"]]
    lam_fn = {(0, 1): [z3.element(1)], (0, 2): [z3.element(2)]}
    enc = encode_h_feasible(g, parts, {(0, 1), (0, 2)}, lam_fn)
    got = {vs for vs, _ in back_mapped(enc)}
    assert got == {("a", "x", "b"), ("a", "x", "c"), ("a", "y", "b")}
    assert got == {vs for vs, _ in oracle_h_feasible(g, [{"a"}, {"b"}, {"c"}], {(0, 1), (0, 2)}, lam_fn)}
    # no loop at part 1: b-y-c style paths inside one part never appear
    with pytest.raises(ValueError):
        encode_h_feasible(g, [["a"], ["b"]], {(0, 1)}, lam_fn)


def test_modular_examples():
    z4 = GroupSpec((4,))
    g = LabelledGraph(z4, ["a", "x", "y", "b"], [("a", "x", 2), ("x", "y", 3), ("y", "b", 1)], ["a", "b"])
    assert back_mapped(encode_modular(g, 3, [0])) == {(("a", "x", "y", "b"), (0, 1, 2))}
    assert back_mapped(encode_modular(g, 3, [1])) == set()
    assert back_mapped(encode_modular(g, 1, [0])) == {(("a", "x", "y", "b"), (0, 1, 2))}
    with pytest.raises(ValueError):
        encode_modular(g, 0, [0])


def test_ab_and_modular_compose_by_direct_product():
    rng = random.Random(2024)
    checked = 0
    for _ in range(30):
        g, lam = _source(rng, simple=True, n_terms=0)
        a_set, b_set = _subset(rng, g.vertices), _subset(rng, g.vertices)
        m, res = 2, {rng.randrange(2)}
        ab = encode_ab_paths(g, a_set, b_set, lam)
        # stack an edge-count factor Z/m onto the A-B target; parallel copies stay distinct
        count = GroupSpec((m,))
        spec = product_spec(ab.target.spec, count)
        edges = [(e.eid, e.u, e.v, spec.element(tuple(e.label.residues) + (1,))) for e in ab.target.edges.values()]
        stacked = LabelledGraph(spec, ab.target.vertices, edges, ab.target.terminals)
        lam_t = LambdaSet.of(spec, [tuple(x.residues) + (r,) for x in ab.lambda_target for r in res])
        got = set()
        for p in enumerate_allowable(stacked, lam_t):
            sp = ab.back(p)
            got.add((sp.vertices, sp.edge_ids))
        want = {(vs, es) for vs, es in oracle_ab(g, a_set, b_set, lam) if len(es) % m in res}
        assert got == want
        checked += bool(want)
    assert checked
