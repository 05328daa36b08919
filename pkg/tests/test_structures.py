from itertools import product

import pytest
from hypothesis import given, strategies as st

from prelie_posets import (
    EMPTY,
    OrderError,
    Topology,
    antichain,
    bags_and_quotient,
    chain,
    class_key,
    connected_components,
    graft_at,
    hasse,
    induced,
    is_connected,
    max_set,
    min_set,
    order_reverse,
    poset,
    topology,
    upper_ideals,
)
from prelie_posets.structures import disjoint_union, transitive_closure

from shapes import BAG2, BAG2_UNDER_POINT, C2, C3, DIAMOND, DOT, V, W


def names(t, idx):
    return {t.label(i) for i in idx}


# -- closure and validation -------------------------------------------------

def test_closure_identity_is_fixed():
    eye = [[i == j for j in range(3)] for i in range(3)]
    assert transitive_closure(eye) == eye


def test_closure_adds_forced_pair():
    rel = [[True, True, False], [False, True, True], [False, False, True]]
    assert transitive_closure(rel)[0][2]


def test_closure_keeps_two_cycle():
    rel = [[True, True], [True, True]]
    assert transitive_closure(rel) == rel


def test_constructor_rejects_non_transitive_rows():
    with pytest.raises(OrderError):
        Topology((0b011, 0b110, 0b100))


def test_constructor_rejects_missing_reflexivity():
    with pytest.raises(OrderError):
        Topology((0b10, 0b10))


def test_poset_entry_point_rejects_cycles():
    with pytest.raises(OrderError):
        poset("ab", [("a", "b"), ("b", "a")])
    assert not topology("ab", [("a", "b"), ("b", "a")]).is_t0


def test_unknown_element_is_reported():
    with pytest.raises(OrderError, match="unknown"):
        poset("ab", [("a", "z")])


# -- covers, extrema, components ------------------------------------------------

def test_hasse_chain():
    assert hasse(C3) == {(0, 1), (1, 2)}


def test_hasse_drops_implied_pair():
    assert {(DIAMOND.label(a), DIAMOND.label(b)) for a, b in hasse(DIAMOND)} == {
        ("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")}


def test_hasse_of_antichain_is_empty():
    assert hasse(antichain(3)) == frozenset()


def test_min_sets():
    assert names(W, min_set(W)) == {"a", "b"}
    assert names(V, min_set(V)) == {"a"}
    t = topology("abc", [("a", "b"), ("b", "a"), ("a", "c"), ("b", "c")])
    assert names(t, min_set(t)) == {"a", "b"}


def test_connectivity():
    assert is_connected(DOT)
    assert len(connected_components(disjoint_union(C2, C3))) == 2
    assert is_connected(DIAMOND)


def test_upper_ideals():
    assert sorted(map(sorted, upper_ideals(C2))) == [[], [0, 1], [1]]
    assert len(upper_ideals(antichain(2))) == 4
    got = {frozenset(names(W, i)) for i in upper_ideals(W)}
    assert got == {frozenset(), frozenset("c"), frozenset("ac"), frozenset("bc"), frozenset("abc")}


def test_upper_ideals_match_subset_filter():
    for t in (DIAMOND, W, V, C3, antichain(3)):
        brute = set()
        for mask in range(1 << t.n):
            members = [i for i in range(t.n) if mask >> i & 1]
            if all(j in members for i in members for j in range(t.n) if t.leq(i, j)):
                brute.add(frozenset(members))
        assert set(upper_ideals(t)) == brute


# -- restriction, reversal, quotient -----------------------------------------

def test_induced_diamond_top_is_wedge():
    sub = induced(DIAMOND, [1, 2, 3])
    assert class_key(sub.structure) == class_key(W)
    assert sub.index_map == (1, 2, 3)


def test_induced_extremes():
    assert induced(DIAMOND, []).structure.n == 0
    assert class_key(induced(DIAMOND, range(4)).structure) == class_key(DIAMOND)


def test_reverse():
    assert class_key(order_reverse(V)) == class_key(W)
    assert order_reverse(antichain(3)) == antichain(3)
    assert class_key(order_reverse(C3)) == class_key(C3)


def test_bags_of_poset_are_singletons():
    bq = bags_and_quotient(DIAMOND)
    assert all(len(b) == 1 for b in bq.bags)
    assert class_key(bq.quotient) == class_key(DIAMOND)


def test_bag_of_two_cycle():
    bq = bags_and_quotient(BAG2)
    assert len(bq.bags) == 1 and bq.quotient.n == 1


def test_bag_under_point():
    bq = bags_and_quotient(BAG2_UNDER_POINT)
    assert sorted(map(len, bq.bags)) == [1, 2]
    assert class_key(bq.quotient) == class_key(C2)


# -- grafting ---------------------------------------------------------------

def test_graft_point_on_point():
    assert class_key(graft_at(DOT, 0, DOT)) == class_key(C2)


def test_graft_point_on_chain_bottom_is_vee():
    assert class_key(graft_at(DOT, 0, C2)) == class_key(V)


def test_graft_chain_on_point():
    assert class_key(graft_at(C2, 0, DOT)) == class_key(C3)


def test_graft_bad_vertex():
    with pytest.raises(IndexError):
        graft_at(DOT, 5, C2)


def test_graft_layout_and_restrictions():
    g = graft_at(W, 1, C2)  # W above the top of C2
    assert g.n == 5
    assert induced(g, [0, 1]).structure == C2
    assert class_key(induced(g, [2, 3, 4]).structure) == class_key(W)
    assert min_set(g) == min_set(C2)
    assert is_connected(g)
    new_covers = hasse(g) - hasse(C2) - {(a + 2, b + 2) for a, b in hasse(W)}
    assert new_covers == {(1, 2 + m) for m in min_set(W)}


# -- properties -------------------------------------------------------------

@st.composite
def relations(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12))
    return n, pairs


@given(relations())
def test_closure_is_quasi_order(data):
    n, pairs = data
    t = topology(n, pairs)
    for i, j, l in product(range(n), repeat=3):
        assert t.leq(i, i)
        if t.leq(i, j) and t.leq(j, l):
            assert t.leq(i, l)


@given(relations())
def test_reverse_is_involution_and_swaps_extrema(data):
    t = topology(*data)
    r = order_reverse(t)
    assert order_reverse(r) == t
    assert min_set(r) == max_set(t)


@given(relations())
def test_hasse_reclosure_roundtrip(data):
    t = topology(*data)
    q = bags_and_quotient(t).quotient
    assert q.is_t0
    assert topology(q.n, hasse(q)) == q


@given(relations())
def test_components_partition(data):
    t = topology(*data)
    comps = connected_components(t)
    assert sorted(v for c in comps for v in c) == list(range(t.n))
    assert is_connected(t) == (len(comps) == 1)


def test_empty_structure_is_not_connected():
    assert EMPTY.n == 0
    assert not is_connected(EMPTY)


def test_chain_and_antichain():
    assert len(hasse(chain(5))) == 4
    assert len(min_set(antichain(4))) == 4
