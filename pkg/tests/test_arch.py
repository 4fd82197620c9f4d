from itertools import product

import pytest

from finsites import arch, fincat as fc, sheaf as sh, site as st
from finsites.corpus import cross_oracle, quotient_agreement

from conftest import SITE_ENTRIES, corpus_site, parallel_pair


def test_arches_agree_with_sheaf_morphisms(corpus_site_entry):
    name, site = corpus_site_entry
    assert cross_oracle(site) == [], name


def test_parallel_pair_has_two_arch_components():
    site = st.trivial_site(parallel_pair())
    assert len(arch.arch_components(site, "A", "B")) == 2
    assert arch.arch_components(site, "B", "A") == []
    assert len(sh.hom_sheaves(site, "A", "B")) == 2


def test_identity_arch_is_an_arch(corpus_site_entry):
    _, site = corpus_site_entry
    for A in site.cat.objects:
        i = site.cat.identity[A]
        assert arch.is_arch(site, i, i)
        M = arch.identity_arch(site, A)
        assert M in arch.enumerate_arches(site, A, A)


def test_composition_is_well_defined_on_components(corpus_site_entry):
    """Any composite choice lands in the same component."""
    _, site = corpus_site_entry
    cat = site.cat
    for A, B, C in product(cat.objects, repeat=3):
        for c1 in arch.arch_components(site, A, B):
            for c2 in arch.arch_components(site, B, C):
                idx = {arch.component_index(site, h)
                       for f in c1[:2] for g in c2[:2]
                       for h in arch.composition_options(site, g, f)}
                assert len(idx) == 1


def test_identity_arches_are_units(corpus_site_entry):
    _, site = corpus_site_entry
    cat = site.cat
    for A, B in product(cat.objects, repeat=2):
        for comp in arch.arch_components(site, A, B):
            f = comp[0]
            n = arch.component_index(site, f)
            left = arch.compose_arches(site, arch.identity_arch(site, B), f)
            right = arch.compose_arches(site, f, arch.identity_arch(site, A))
            assert arch.component_index(site, left) == n == arch.component_index(site, right)


def test_representable_category_is_a_category(corpus_site_entry):
    _, site = corpus_site_entry
    R = arch.representable_category(site).category
    assert fc.validate(R) == []
    assert list(R.objects) == list(site.cat.objects)


def test_composing_mismatched_arches_raises():
    site = st.trivial_site(parallel_pair())
    f = arch.enumerate_arches(site, "A", "B")[0]
    with pytest.raises(fc.CategoryError):
        arch.compose_arches(site, f, f)


PRINCIPAL = [e["name"] for e in SITE_ENTRIES if isinstance(corpus_site(e["name"]), st.PrincipalSite)]


@pytest.mark.parametrize("name", PRINCIPAL)
def test_quotient_by_local_equality_keeps_representable_category(name):
    assert quotient_agreement(corpus_site(name)) == []


def test_local_equality_is_symmetric_and_reflexive(corpus_site_entry):
    _, site = corpus_site_entry
    cat = site.cat
    for m in cat.morphisms:
        assert arch.locally_equal(site, m, m)
    for a, b in product(cat.objects, repeat=2):
        for h, k in product(cat.hom(a, b), repeat=2):
            assert site.locally_equal(h, k) == site.locally_equal(k, h)
