import pytest
from hypothesis import given, strategies as hs

from finsites import fincat as fc, sheaf as sh, site as st
from finsites.corpus import generated_cocones
from finsites.sheaf import FinPresheaf, NatTransformation

from conftest import SITE_ENTRIES, corpus_site, diamond, parallel_pair

SMALL_SITES = [e["name"] for e in SITE_ENTRIES if len(corpus_site(e["name"]).cat.objects) <= 4]


@hs.composite
def presheaves(draw, site):
    """Quotients of coproducts of at most two representables."""
    cat = site.cat
    objs = draw(hs.lists(hs.sampled_from(cat.objects), min_size=0, max_size=2))
    X = sh.coproduct_presheaf(cat, [sh.yoneda(cat, A) for A in objs])
    E = draw(hs.sampled_from(sh.congruences(X)))
    return sh.quotient_presheaf(X, E)[0]


@hs.composite
def site_and_presheaf(draw):
    site = corpus_site(draw(hs.sampled_from(SMALL_SITES)))
    return site, draw(presheaves(site))


@given(site_and_presheaf())
def test_sheafification_is_a_sheaf(sp):
    site, F = sp
    S, unit = sh.sheafify(site, F)
    assert sh.presheaf_issues(S) == []
    assert sh.is_natural(unit)
    assert sh.is_sheaf(site, S)


@given(site_and_presheaf())
def test_sheafifying_a_sheaf_changes_nothing(sp):
    site, F = sp
    S, _ = sh.sheafify(site, F)
    S2, unit = sh.sheafify(site, S)
    assert sh.is_iso_nt(unit)
    assert sh.find_iso(S, S2) is not None


@given(site_and_presheaf(), hs.data())
def test_sheafification_is_universal(sp, data):
    site, F = sp
    B = data.draw(hs.sampled_from(site.cat.objects))
    L = sh.ell(site, B)[0]
    S, unit = sh.sheafify(site, F)
    into_L = sh.nat_transformations(F, L)
    via = {sh.compose_nt(a, unit).components for a in sh.nat_transformations(S, L)}
    assert len(via) == len(sh.nat_transformations(S, L))
    assert via == {a.components for a in into_L}


@given(site_and_presheaf())
def test_plus_is_separated_after_one_step(sp):
    site, F = sp
    P, _ = sh.plus(site, F)
    for c in site.cat.objects:
        M = site.minimal_covering_sieve(c)
        families = {}
        for x in range(P.sizes[c]):
            key = tuple(P.action[g][x] for g in M.sorted(site.cat))
            assert key not in families
            families[key] = x


def test_trivial_site_sheaves_are_all_presheaves():
    site = st.trivial_site(parallel_pair())
    X = sh.coproduct_presheaf(site.cat, [sh.yoneda(site.cat, "B"), sh.yoneda(site.cat, "A")])
    for E in sh.congruences(X):
        assert sh.is_sheaf(site, sh.quotient_presheaf(X, E)[0])


def test_parallel_pair_supercompact_category_is_the_coequalizer_diagram():
    site = st.trivial_site(parallel_pair())
    sc = sh.supercompact_category(site)
    assert list(sc.category.objects) == ["A", "B", "B/1"]
    coeq = fc.FiniteCategory(
        ["A", "B", "Q"],
        [("id_A", "A", "A"), ("id_B", "B", "B"), ("id_Q", "Q", "Q"), ("f", "A", "B"), ("g", "A", "B"),
         ("q", "B", "Q"), ("h", "A", "Q")],
        {"A": "id_A", "B": "id_B", "Q": "id_Q"}, {("q", "f"): "h", ("q", "g"): "h"})
    assert fc.find_equivalence(sc.category, coeq) is not None


def test_diamond_presheaves_have_the_diamond_as_supercompacts():
    P = diamond()
    sc = sh.supercompact_category(st.trivial_site(P.category()))
    assert fc.find_equivalence(sc.category, P.category()) is not None


@pytest.mark.parametrize("name", [n for n in SMALL_SITES if isinstance(corpus_site(n), st.PrincipalSite)])
def test_representables_are_supercompact_on_principal_sites(name):
    site = corpus_site(name)
    for A in site.cat.objects:
        L = sh.ell(site, A)[0]
        assert sh.is_supercompact_object(site, L) != sh.is_initial_sheaf(site, L)


def test_coalescent_diamond_top_is_compact_but_not_supercompact():
    site = corpus_site("diamond_coalescent")
    top = sh.ell(site, "1")[0]
    assert not sh.is_supercompact_object(site, top)
    assert sh.is_jointly_epic(site, [sh.ell_map(site, "a->1"), sh.ell_map(site, "b->1")], top)


def test_subobject_lattice_of_representable_on_chain():
    site = corpus_site("chain3")
    lattice = sh.subobject_lattice(site, sh.ell(site, "2")[0])
    # sieves on the top of a three-chain: empty, ↓0, ↓1, ↓2
    assert len(lattice) == 4


def test_compact_objects_on_a_point_are_finite_sets():
    site = corpus_site("point")
    found = sh.compact_objects_bounded(site, 2)
    assert sorted(S.sizes["*"] for _, S in found) == [0, 1, 2]
    stable, subterminal = sh.compact_stabilization(site, 2)
    assert stable and len(subterminal) == 2


def _sheafified_comparison_is_iso(site, D, cocone):
    """Oracle: sheafify the presheaf colimit and test the induced map."""
    cat = site.cat
    P, phi = sh._presheaf_colimit_map(site, D, cocone)
    V = sh.ell(site, cocone.vertex)[0]
    alpha = NatTransformation(P, V, tuple(phi[c] for c in cat.objects))
    m = sh.sheafify_map(site, alpha, sh.sheafify_full(site, P), sh.sheafify_full(site, V))
    return sh.is_iso_nt(m)


@pytest.mark.parametrize("name", [e["name"] for e in SITE_ENTRIES])
def test_colimit_preservation_three_ways(name):
    site = corpus_site(name)
    for _, D, cc in generated_cocones(site):
        a = sh.preserves_funnel_colimit(site, D, cc)
        assert a == sh.check_colim_criteria(site, D, cc)[0]
        assert a == _sheafified_comparison_is_iso(site, D, cc)


def test_ell_fails_to_preserve_a_coequalizer_in_tworel_C():
    site = corpus_site("tworel_C")
    cat = site.cat
    D = fc.funnel_diagram(cat, "A", [("x1", "y1")])
    cc = fc.colimit(cat, D)
    assert cc.vertex == "B"
    assert not sh.preserves_funnel_colimit(site, D, cc)
    ok, why = sh.check_colim_criteria(site, D, cc)
    assert not ok and why[0] == "not locally connected"


def test_presheaf_validation_catches_broken_action():
    cat = parallel_pair()
    with pytest.raises(fc.CategoryError, match="wrong shape"):
        FinPresheaf(cat, {"A": 1, "B": 1}, {"id_A": (0,), "id_B": (0,), "f": (1,), "g": (0,)})
