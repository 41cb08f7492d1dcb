import itertools
import math

import pytest
from hypothesis import given, strategies as st

from apathep.group import GroupSpec, add, coset_add, enumerate_abelian_groups, generate_subgroup


def test_add_examples():
    z6, v4, z15 = GroupSpec((6,)), GroupSpec((2, 2)), GroupSpec((15,))
    assert add(z6.element(4), z6.element(3)) == z6.element(1)
    assert add(v4.element((1, 0)), v4.element((1, 1))) == v4.element((0, 1))
    assert add(z15.element(8), z15.element(7)) == z15.zero


def test_add_rejects_mixed_groups():
    with pytest.raises(ValueError):
        add(GroupSpec((6,)).element(1), GroupSpec((3,)).element(1))


def test_parse_and_format():
    assert str(GroupSpec.parse("Z2*Z2*Z3")) == "Z2*Z2*Z3"
    assert GroupSpec.parse("Z1").order == 1
    assert str(GroupSpec(())) == "Z1"
    for bad in ("", "Z0", "Y3", "Z3*"):
        with pytest.raises(ValueError):
            GroupSpec.parse(bad)
    with pytest.raises(ValueError):
        GroupSpec((1,))
    v4 = GroupSpec((2, 2))
    assert v4.parse_element("(1,3)") == v4.element((1, 1))
    assert v4.parse_elements("(1,0),(0,1)") == [v4.element((1, 0)), v4.element((0, 1))]
    with pytest.raises(ValueError):
        v4.parse_element("1")


def test_generate_subgroup_examples():
    z15 = GroupSpec((15,))
    assert sorted(x.residues[0] for x in generate_subgroup(z15, [3])) == [0, 3, 6, 9, 12]
    assert sorted(x.residues[0] for x in generate_subgroup(z15, [5])) == [0, 5, 10]
    for spec in (z15, GroupSpec((2, 2)), GroupSpec(())):
        assert set(generate_subgroup(spec, [])) == {spec.zero}


def test_coset_add_examples():
    z6 = GroupSpec((6,))
    h = generate_subgroup(z6, [3])
    assert coset_add(h.coset(z6.element(1)), h.coset(z6.element(2))) == h.coset(z6.zero)
    z4 = GroupSpec((4,))
    triv = generate_subgroup(z4, [])
    assert coset_add(triv.coset(z4.element(1)), triv.coset(z4.element(2))) == triv.coset(z4.element(3))
    # the set sum of the two cosets, compared element by element
    z15 = GroupSpec((15,))
    h5 = generate_subgroup(z15, [5])
    a, b = h5.coset(z15.element(2)), h5.coset(z15.element(4))
    setsum = {x + y for x in a.elements for y in b.elements}
    assert setsum == set(coset_add(a, b).elements) == set(h5.coset(z15.element(1)).elements)
    with pytest.raises(ValueError):
        coset_add(h5.coset(z15.zero), generate_subgroup(z15, [3]).coset(z15.zero))


def test_enumerate_abelian_groups():
    names = [str(s) for s in enumerate_abelian_groups(4)]
    assert names == ["Z1", "Z2", "Z3", "Z4", "Z2*Z2"]
    names8 = {str(s) for s in enumerate_abelian_groups(8)}
    assert {"Z8", "Z2*Z4", "Z2*Z2*Z2"} <= names8
    assert [str(s) for s in enumerate_abelian_groups(1)] == ["Z1"]
    with pytest.raises(ValueError):
        enumerate_abelian_groups(0)


def _count_abelian(n):
    # number of abelian groups of order n: product of partition counts of the prime exponents
    def partitions(k):
        p = [1] + [0] * k
        for part in range(1, k + 1):
            for s in range(part, k + 1):
                p[s] += p[s - part]
        return p[k]

    out, m, d = 1, n, 2
    while m > 1:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e:
            out *= partitions(e)
        d += 1
    return out


def test_enumeration_counts_and_distinctness():
    groups = enumerate_abelian_groups(32)
    for n in range(1, 33):
        here = [g for g in groups if g.order == n]
        assert len(here) == _count_abelian(n)
        for a, b in itertools.combinations(here, 2):
            assert not a.is_isomorphic(b)


SMALL = [g for g in enumerate_abelian_groups(16)]


@pytest.mark.parametrize("spec", SMALL, ids=str)
def test_group_axioms_exhaustive(spec):
    elems = spec.elements()
    zero = spec.zero
    for x in elems:
        assert x + zero == x
        assert x + (-x) == zero
        for y in elems:
            assert x + y == y + x
    if spec.order <= 8:
        for x, y, z in itertools.product(elems, repeat=3):
            assert (x + y) + z == x + (y + z)


@pytest.mark.parametrize("spec", [g for g in SMALL if g.order <= 12], ids=str)
def test_subgroups_closed_and_lagrange(spec):
    elems = spec.elements()
    for gens in itertools.chain(((x,) for x in elems), itertools.combinations(elems, 2)):
        h = generate_subgroup(spec, gens)
        members = set(h)
        assert spec.order % len(members) == 0
        for u in members:
            assert -u in members
            for v in members:
                assert u + v in members
        cosets = h.cosets()
        assert len(cosets) == spec.order // len(members)
        covered = [x for c in cosets for x in c.elements]
        assert sorted(covered) == sorted(elems)


@given(st.sampled_from(SMALL), st.data())
def test_coset_equality_matches_difference(spec, data):
    elems = spec.elements()
    gen = data.draw(st.sampled_from(elems))
    x, y = data.draw(st.sampled_from(elems)), data.draw(st.sampled_from(elems))
    h = generate_subgroup(spec, [gen])
    assert (h.coset(x) == h.coset(y)) == ((x - y) in h)


def test_orders_and_invariant_factors():
    z12 = GroupSpec((12,))
    assert z12.element_order(z12.element(8)) == 3
    assert GroupSpec((2, 3)).invariant_factors() == (6,)
    assert GroupSpec((2, 4, 2)).invariant_factors() == (2, 2, 4)
    assert GroupSpec((6,)).is_isomorphic(GroupSpec((3, 2)))
    assert math.prod(GroupSpec((2, 2, 3)).moduli) == GroupSpec((2, 2, 3)).order
