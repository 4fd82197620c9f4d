from itertools import combinations, product

import networkx as nx
import pytest
from hypothesis import given

from finsites import duality as du

from conftest import diamond
from strategies import posets

# unlabelled posets, lattices and distributive lattices by size
POSET_COUNTS = [1, 2, 5, 16, 63]
LATTICE_COUNTS = [1, 1, 1, 2, 5, 15]
DISTRIBUTIVE_COUNTS = [1, 1, 1, 2, 3, 5]


def brute_force_posets(n):
    """Every strict order on range(n), deduplicated by graph isomorphism."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    found = []
    for bits in product([0, 1], repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
            continue
        G = nx.DiGraph()
        G.add_nodes_from(range(n))
        G.add_edges_from(rel)
        if not any(nx.is_isomorphic(G, H) for H in found):
            found.append(G)
    return found


@pytest.mark.parametrize("n", range(1, 5))
def test_poset_enumeration_matches_brute_force(n):
    assert len(du.enumerate_posets(n)) == len(brute_force_posets(n)) == POSET_COUNTS[n - 1]


def test_five_element_posets():
    assert len(du.enumerate_posets(5)) == POSET_COUNTS[4]


def test_lattice_counts():
    assert [len(du.enumerate_join_semilattices(n)) for n in range(1, 7)] == LATTICE_COUNTS
    assert [len(du.enumerate_distributive(n)) for n in range(1, 7)] == DISTRIBUTIVE_COUNTS


def test_enumerated_posets_are_pairwise_non_isomorphic():
    for n in range(1, 5):
        graphs = []
        for P in du.enumerate_posets(n):
            G = nx.DiGraph(P.strict_pairs())
            G.add_nodes_from(P.elements)
            assert not any(nx.is_isomorphic(G, H) for H in graphs)
            graphs.append(G)


@pytest.mark.parametrize("n", range(1, 7))
def test_stone_round_trip_for_distributive_lattices(n):
    for S in du.enumerate_distributive(n):
        assert du.stone_round_trip(S).ok


def test_non_distributive_lattices_fail_round_trip():
    for n in range(1, 7):
        for S in du.enumerate_join_semilattices(n):
            if not du.is_distributive(S)[0]:
                assert not du.stone_round_trip(S).ok


def test_diamond_has_two_prime_filters():
    S = du.JoinSemilattice(diamond())
    assert du.prime_filters(S) == [frozenset({"a", "1"}), frozenset({"b", "1"})]


def test_m3_is_not_distributive():
    M3 = du.JoinSemilattice.from_order(
        ["0", "a", "b", "c", "1"], [("0", x) for x in "abc1"] + [(x, "1") for x in "abc"])
    assert du.is_distributive(M3) == (False, ("c", "a", "b"))


def test_prime_filters_are_frame_points_of_the_ideal_frame():
    for n in range(1, 7):
        for S in du.enumerate_distributive(n):
            L = du.ideal_frame(S)
            assert len(du.prime_filters(S)) == len(du.frame_points(L))
            # brute force: nonempty, up-closed, join-prime, proper
            brute = []
            for r in range(len(S.elements) + 1):
                for F in combinations(S.elements, r):
                    F = frozenset(F)
                    up = all(y in F for x in F for y in S.elements if S.leq(x, y))
                    prime = all((S.join(a, b) in F) == (a in F or b in F)
                                for a in S.elements for b in S.elements)
                    meets = all(any(z in F and S.leq(z, x) and S.leq(z, y) for z in S.elements)
                                for x in F for y in F)
                    if F and up and prime and meets and S.bottom not in F:
                        brute.append(F)
            assert set(du.prime_filters(S)) == set(brute)


@given(posets())
def test_alexandroff_round_trip(P):
    assert du.alexandroff_round_trip(P).ok


@given(posets(max_size=4))
def test_downsets_are_closed_under_union_and_intersection(P):
    ds = set(P.downsets())
    assert frozenset() in ds and frozenset(P.elements) in ds
    for a in ds:
        for b in ds:
            assert a | b in ds and a & b in ds


def test_flat_map_from_empty_poset_fails():
    pt = du.FinPoset(["*"], [])
    assert not du.is_flat_map({}, du.FinPoset([], []), pt)
    assert du.is_flat_map({"*": "*"}, pt, pt)


def test_non_monotone_map_is_rejected():
    two = du.FinPoset(["0", "1"], [("0", "1")])
    with pytest.raises(du.OrderError):
        du.is_flat_map({"0": "1", "1": "0"}, two, two)


def test_frame_map_checks():
    P = diamond()
    L = du.alexandroff(P)
    ident = {x: x for x in L.elements}
    assert du.is_completely_continuous(ident, L, L)
    const = {x: L.bottom for x in L.elements}
    with pytest.raises(du.NotAFrameMap):
        du.is_completely_continuous({x: L.top for x in L.elements}, L, L)
    assert not du.is_completely_continuous(const, L, L)


def test_invalid_poset_is_rejected():
    with pytest.raises(du.OrderError):
        du.FinPoset(["a", "b"], [("a", "b"), ("b", "a")])


def _brute_force_ideals(S):
    out = []
    for r in range(1, len(S.elements) + 1):
        for I in map(frozenset, combinations(S.elements, r)):
            down = all(y in I for x in I for y in S.elements if S.leq(y, x))
            if down and S.bottom in I and all(S.join(a, b) in I for a in I for b in I):
                out.append(I)
    return out


def test_ideal_frame_matches_subset_enumeration():
    chain2 = du.JoinSemilattice(du.FinPoset(["0", "1"], [("0", "1")]))
    point = du.JoinSemilattice(du.FinPoset(["0"], []))
    S = du.JoinSemilattice(diamond())
    assert [len(du.ideal_frame(x)) for x in (point, chain2, S)] == [1, 2, 4]
    for n in range(1, 7):
        for T in du.enumerate_distributive(n):
            assert set(du.ideal_frame(T).elements) == set(_brute_force_ideals(T))


def test_ideal_frame_rejects_non_distributive_input():
    M3 = du.JoinSemilattice.from_order(
        ["0", "a", "b", "c", "1"], [("0", x) for x in "abc1"] + [(x, "1") for x in "abc"])
    with pytest.raises(du.OrderError, match=r"\('c', 'a', 'b'\)"):
        du.ideal_frame(M3)
