import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from apathep.epcond import LambdaSet
from apathep.group import GroupSpec
from apathep.lgraph import LabelledGraph
from apathep.paths import (
    PackingResult,
    PathExplosion,
    duality_report,
    enumerate_allowable,
    enumerate_apaths,
    max_packing,
    min_cover,
    packing_at_least,
)

from oracles import allowable, max_disjoint, max_half, min_transversal, oracle_paths, random_graph

GROUPS = [GroupSpec((2,)), GroupSpec((3,)), GroupSpec((4,)), GroupSpec((6,)), GroupSpec((2, 2))]


def _instance(seed, max_n=8):
    rng = random.Random(seed)
    spec = rng.choice(GROUPS)
    n = rng.randint(2, max_n)
    g = random_graph(rng, spec, n, rng.uniform(0.2, 0.6), rng.randint(2, n))
    lam = LambdaSet.of(spec, rng.sample(spec.elements(), rng.randint(1, spec.order)))
    return g, lam


def _key(p):
    return p.vertices, p.edge_ids, p.gamma_length


def test_star_example():
    # four terminals hanging off one hub: every pair is an A-path through the hub
    z2 = GroupSpec((2,))
    g = LabelledGraph(z2, ["h", "a", "b", "c", "d"], [("h", t, 1 if t in "ab" else 0) for t in "abcd"], "abcd")
    odd, even = LambdaSet.of(z2, [1]), LambdaSet.of(z2, [0])
    assert len(enumerate_allowable(g, odd)) == 4
    assert len(enumerate_allowable(g, even)) == 2
    assert max_packing(g, odd).size == 1
    assert max_packing(g, odd, "half_integral").size == 2
    assert min_cover(g, odd).vertices == {"h"}
    assert duality_report(g, odd) == (1, 1, Fraction(1))


def test_odd_cycle_half_integral_gap():
    # terminals on a triangle joined pairwise: three allowable paths, each pair shares a terminal
    z3 = GroupSpec((3,))
    g = LabelledGraph(z3, ["a", "b", "c"], [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)], "abc")
    lam = LambdaSet.of(z3, [1])
    nu, tau, half = duality_report(g, lam)
    assert (nu, tau, half) == (1, 2, Fraction(3, 2))


def test_single_edge_path_and_terminal_interior():
    z2 = GroupSpec((2,))
    g = LabelledGraph(z2, ["a", "b", "c"], [("a", "b", 0), ("b", "c", 0)], "abc")
    paths = enumerate_apaths(g)
    # a-b-c passes through terminal b and is not an A-path
    assert sorted(p.vertices for p in paths) == [("a", "b"), ("b", "c")]


def test_explosion_and_bad_arguments():
    spec = GroupSpec((2,))
    names = [f"v{i}" for i in range(9)]
    import itertools

    edges = [(u, v, 0) for u, v in itertools.combinations(names, 2)]
    g = LabelledGraph(spec, names, edges, names[:2])
    lam = LambdaSet.of(spec, [0])
    with pytest.raises(PathExplosion):
        enumerate_allowable(g, lam, cap=10)
    with pytest.raises(ValueError):
        enumerate_allowable(g, lam, cap=0)
    with pytest.raises(ValueError):
        enumerate_allowable(g, LambdaSet.of(GroupSpec((3,)), [0]))
    with pytest.raises(ValueError):
        max_packing(g, lam, method="magic")
    with pytest.raises(ValueError):
        max_packing(g, lam, mode="fractional")
    with pytest.raises(ValueError):
        PackingResult(enumerate_allowable(g, lam)[:2], "integral")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_enumeration_matches_networkx(seed):
    g, lam = _instance(seed, max_n=7)
    ours = {_key(p.canonical(g)) for p in enumerate_allowable(g, lam)}
    assert ours == allowable(g, lam)
    assert {_key(p) for p in enumerate_apaths(g)} == oracle_paths(g)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_packing_and_cover_match_brute_force(seed):
    g, lam = _instance(seed, max_n=7)
    sets = [vs for vs, _, _ in allowable(g, lam)]
    bound = len(g.terminals)
    nu = max_packing(g, lam)
    half = max_packing(g, lam, "half_integral")
    cover = min_cover(g, lam)
    assert nu.size == max_disjoint(sets, bound // 2)
    assert half.size == max_half(sets, bound)
    assert cover.size == min_transversal(list(g.vertices), sets)
    assert cover.verified
    assert all(any(v in cover.vertices for v in s) for s in sets)
    assert nu.size <= Fraction(half.size, 2) <= cover.size


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_packing_at_least_is_consistent(seed):
    g, lam = _instance(seed, max_n=7)
    nu = max_packing(g, lam).size
    assert packing_at_least(g, lam, nu, method="enumerate").size == nu
    assert packing_at_least(g, lam, nu + 1, method="enumerate") is None
