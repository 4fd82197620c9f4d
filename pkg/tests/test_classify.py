import pytest
from hypothesis import given

from finsites import classify as cl, duality as du, fincat as fc, sheaf as sh, site as st
from finsites.corpus import classifier_implications

from conftest import CATEGORY_SUBJECTS, category, corpus_site, diamond, parallel_pair
from strategies import posets, transformation_monoids


@pytest.mark.parametrize("name", sorted(CATEGORY_SUBJECTS))
def test_implications_hold_on_corpus_categories(name):
    assert classifier_implications(CATEGORY_SUBJECTS[name].cat) == []


@given(posets(max_size=4))
def test_implications_hold_on_random_posets(P):
    assert classifier_implications(P.category()) == []


@given(transformation_monoids())
def test_implications_hold_on_random_monoids(M):
    assert classifier_implications(M) in ([], None)


def test_every_poset_is_reductive_and_effectual():
    for n in range(1, 5):
        for P in du.enumerate_posets(n):
            r = cl.classify(P.category())
            assert r["reductive"].holds and r["effectual"].holds


@pytest.mark.parametrize("n", range(1, 6))
def test_posets_are_recovered_from_their_supercompact_objects(n):
    for P in du.enumerate_posets(n):
        assert cl.correspondence_round_trip(P.category()).ok


def test_tworel_C_is_not_effectual_but_C_prime_is():
    C = CATEGORY_SUBJECTS["tworel_C"].cat
    v = cl.is_effectual(C)
    assert v.status == "false"
    w = v.witness
    assert C.compose(cl.funnel_colimit(C, w["apex"], w["pairs"]), w["g1"]) == \
        C.compose(cl.funnel_colimit(C, w["apex"], w["pairs"]), w["g2"])
    Cp = CATEGORY_SUBJECTS["tworel_Cprime"].cat
    assert cl.is_effectual(Cp).holds
    assert cl.correspondence_round_trip(Cp).ok


def test_tworel_supercompacts_form_C_prime():
    sc = sh.supercompact_category(corpus_site("tworel_C")).category
    assert fc.find_equivalence(sc, CATEGORY_SUBJECTS["tworel_Cprime"].cat) is not None


def test_discrete_category_is_locally_regular_but_not_regular():
    r = cl.classify(fc.FiniteCategory.discrete(["x", "y"]))
    assert r["reductive"].holds
    assert r["locallyRegular"].holds
    assert r["regular"].status == "false"


def test_parallel_pair_is_not_reductive():
    r = cl.classify(parallel_pair())
    assert r["funnelingColimits"].status == "false"
    assert r["effectual"].status == "undefined"
    assert not cl.correspondence_round_trip(parallel_pair()).ok


def test_coequalizer_diagram_lacks_pullbacks():
    cat = category(["A", "B", "Q"], [("f", "A", "B"), ("g", "A", "B"), ("q", "B", "Q"), ("h", "A", "Q")],
                   {("q", "f"): "h", ("q", "g"): "h"})
    r = cl.classify(cat)
    assert r["reductive"].holds
    assert r["pullbacks"].status == "false"
    assert r["equalizers"].status == "false"
    assert r["locallyRegular"].status == "false"


def test_diamond_verdicts():
    r = cl.classify(diamond().category())
    for k in ("reductive", "coalescent", "effectual", "locallyRegular", "regular", "strictInitial"):
        assert r[k].holds, k
    assert r["positive"].status == "false"
    assert r["positive"].witness == ("a", "a")


def test_coalescent_categories_are_reductive():
    for n in range(1, 6):
        for S in du.enumerate_join_semilattices(n):
            r = cl.classify(S.poset.category())
            if r["coalescent"].holds:
                assert r["reductive"].holds and r["strictInitial"].holds


def test_coalescent_site_exists_exactly_when_coalescent():
    cat = diamond().category()
    assert cl.is_coalescent(cat).holds
    assert st.coalescent_site(cat).check_topology() is None


def test_tiny_funnel_cap_gives_inconclusive():
    r = cl.classify(CATEGORY_SUBJECTS["tworel_C"].cat, funnel_cap=1)
    assert r.inconclusive()
    assert classifier_implications(CATEGORY_SUBJECTS["tworel_C"].cat, funnel_cap=1) is None


def test_report_serializes_witnesses():
    d = cl.classify(diamond().category()).as_dict()
    assert d["positive"] == {"status": "false", "witness": ["a", "a"], "note": "summands not disjoint"}
