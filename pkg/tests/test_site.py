from itertools import product

import pytest
from hypothesis import given

from finsites import duality as du, fincat as fc, sheaf as sh, site as st
from finsites.site import PrincipalSite, SiteError

from conftest import CATEGORY_SUBJECTS, SITE_ENTRIES, category, corpus_site, diamond, parallel_pair
from strategies import posets, transformation_monoids


def split_epis(cat):
    return [m for m in cat.morphisms if fc.is_split_epi(cat, m)]


@pytest.mark.parametrize("name", sorted(CATEGORY_SUBJECTS))
def test_split_epimorphisms_form_a_stable_class(name):
    cat = CATEGORY_SUBJECTS[name].cat
    rep = st.check_stable_class(cat, split_epis(cat))
    assert rep.ok(["ax1", "ax2", "ax3", "ax4"])


@given(transformation_monoids())
def test_split_epimorphisms_stable_in_monoids(M):
    assert st.check_stable_class(M, split_epis(M)).ok(["ax1", "ax2", "ax3", "ax4"])


@pytest.mark.parametrize("name", sorted(CATEGORY_SUBJECTS))
def test_saturation_is_idempotent(name):
    site = corpus_site(name)
    cat = site.cat
    classes = [split_epis(cat), [cat.identity[o] for o in cat.objects]]
    if isinstance(site, PrincipalSite):
        classes.append(site.tclass)
    for T in classes:
        once = st.saturate(cat, T)
        assert st.saturate(cat, once) == once
        assert set(T) <= set(once)


def test_corpus_site_satisfies_topology_axioms(corpus_site_entry):
    _, site = corpus_site_entry
    assert site.check_topology() is None


def test_covering_is_monotone_and_pullback_stable(corpus_site_entry):
    _, site = corpus_site_entry
    cat = site.cat
    for c in cat.objects:
        sieves = st.all_sieves(cat, c)
        for S in sieves:
            if not site.is_covering(S):
                continue
            for R in sieves:
                if S.arrows <= R.arrows:
                    assert site.is_covering(R)
            for f in cat.into(c):
                assert site.is_covering(st.pullback_sieve(cat, S, f))


def test_subcanonical_matches_representable_sheaves(corpus_site_entry):
    _, site = corpus_site_entry
    yoneda_ok = all(sh.is_sheaf(site, sh.yoneda(site.cat, A)) for A in site.cat.objects)
    assert st.is_subcanonical(site) == yoneda_ok


def test_minimal_covering_sieve_is_least(corpus_site_entry):
    _, site = corpus_site_entry
    for c in site.cat.objects:
        M = site.minimal_covering_sieve(c)
        assert all(M.arrows <= S.arrows for S in site.covering_sieves(c))


def test_unstable_class_is_rejected_at_load():
    P = parallel_pair()
    with pytest.raises(SiteError):
        PrincipalSite(P, ["id_A", "id_B", "f"])


def test_empty_cover_must_be_down_closed():
    D = diamond().category()
    with pytest.raises(SiteError):
        PrincipalSite(D, [D.identity[o] for o in D.objects], ["a"])


def test_diamond_effective_epimorphic_sieve():
    D = diamond().category()
    S = st.generated_sieve(D, ["a->1", "b->1"], "1")
    assert st.is_effective_epimorphic_sieve(D, S)
    assert not st.is_effective_epimorphic_sieve(D, st.generated_sieve(D, ["a->1"], "1"))


def test_canonical_congruence_identifies_locally_equal_pair():
    site = corpus_site("congruence")
    cong = st.canonical_congruence(site)
    assert cong.classes["v"] == cong.classes["u"] == "u"
    assert cong.classes["w"] == "w"
    assert len(cong.quotient.cat.morphisms) == 6
    assert fc.is_epi(cong.quotient.cat, "t")


def test_njsl5_join_covers_fail_third_family_axiom():
    M3 = du.JoinSemilattice.from_order(
        ["0", "a", "b", "c", "1"], [("0", x) for x in "abc1"] + [(x, "1") for x in "abc"])
    site = du.finite_join_site(M3, check=False)
    rep = st.check_stable_family_class(site.cat, site.family_class)
    assert rep.holds["ax3'"] is False
    assert rep.witnesses["ax3'"] == (("a->1", "b->1"), "c->1")
    with pytest.raises(SiteError):
        du.finite_join_site(M3)


def _monotone_maps(P, Q):
    for vals in product(Q.elements, repeat=len(P.elements)):
        f = dict(zip(P.elements, vals))
        if all(Q.leq(f[a], f[b]) for a, b in P.strict_pairs()):
            yield f


def test_join_homomorphisms_are_exactly_morphisms_of_join_sites():
    lats = [S for n in range(1, 5) for S in du.enumerate_distributive(n)]
    checked = 0
    for S, T in product(lats, repeat=2):
        src, tgt = du.finite_join_site(S), du.finite_join_site(T)
        for f in _monotone_maps(S.poset, T.poset):
            F = du.poset_functor(f, S.poset, T.poset)
            assert du.is_dist_join_hom(f, S, T) == st.is_morphism_of_sites(F, src, tgt).ok
            checked += 1
    assert checked > 200


@given(posets(max_size=3), posets(max_size=3))
def test_flat_maps_are_morphisms_of_trivial_sites(P, Q):
    src, tgt = st.trivial_site(P.category()), st.trivial_site(Q.category())
    for f in _monotone_maps(P, Q):
        F = du.poset_functor(f, P, Q)
        assert du.is_flat_map(f, P, Q) == st.is_morphism_of_sites(F, src, tgt).ok


def test_identity_functor_is_morphism_and_comorphism(corpus_site_entry):
    _, site = corpus_site_entry
    F = fc.identity_functor(site.cat)
    assert st.is_morphism_of_sites(F, site, site).ok
    assert st.is_comorphism_of_sites(F, site, site)[0]


def test_collapse_of_antichain_fails_condition_three():
    P = du.FinPoset(["p", "q"], [])
    pt = du.FinPoset(["*"], [])
    F = du.poset_functor({"p": "*", "q": "*"}, P, pt)
    rep = st.is_morphism_of_sites(F, st.trivial_site(P.category()), st.trivial_site(pt.category()))
    assert rep.conditions == {1: True, 2: True, 3: False, 4: True}


def test_coalescent_site_on_diamond_has_empty_cover_at_bottom():
    site = st.coalescent_site(diamond().category())
    assert site.empty_covered == frozenset({"0"})
    assert site.is_covering(st.generated_sieve(site.cat, ["a->1", "b->1"], "1"))


def test_atomic_site_needs_ore_condition():
    # a cospan a → 1 ← b with no completing square once the bottom is removed
    cat = category(["a", "b", "1"], [("i", "a", "1"), ("j", "b", "1")], {})
    with pytest.raises(SiteError):
        PrincipalSite(cat, cat.morphisms)


FAMILY_SITES = [e["name"] for e in SITE_ENTRIES if isinstance(corpus_site(e["name"]), st.FGSite)]


@pytest.mark.parametrize("name", FAMILY_SITES)
def test_canonical_congruence_on_family_sites(name):
    cong = st.canonical_congruence(corpus_site(name))
    assert isinstance(cong.quotient, st.FGSite)
    assert cong.quotient.check_topology() is None
    assert fc.check_functor(cong.functor) == []
