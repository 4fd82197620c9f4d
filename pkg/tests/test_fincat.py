from itertools import product

import pytest
from hypothesis import given, strategies as hs

from finsites import fincat as fc
from finsites.classify import funnel_colimit, funnels
from finsites.fincat import CategoryError, FiniteCategory

from conftest import CATEGORY_SUBJECTS, category, diamond, parallel_pair
from strategies import posets, transformation_monoids


def naive_cocones(cat, D):
    """Every choice of legs, filtered by commutativity (no propagation)."""
    S = D.source
    out = []
    for W in cat.objects:
        for legs in product(*[cat.hom(D.obj[i], W) for i in S.objects]):
            L = dict(zip(S.objects, legs))
            if all(cat.compose(L[S.cod[a]], D.mor[a]) == L[S.dom[a]] for a in S.morphisms):
                out.append((W, legs))
    return out


def naive_colimit_exists(cat, D):
    cs = naive_cocones(cat, D)
    for W, legs in cs:
        if all(sum(1 for u in cat.hom(W, W2)
                   if all(cat.compose(u, l) == l2 for l, l2 in zip(legs, legs2))) == 1
               for W2, legs2 in cs):
            return True
    return False


def test_minimal_category_parses():
    cat = FiniteCategory(["*"], [("id", "*", "*")], {"*": "id"}, {})
    assert cat.compose("id", "id") == "id"


def test_missing_composite_is_reported():
    with pytest.raises(CategoryError) as err:
        FiniteCategory(["A", "B", "C"], [("i", "A", "A"), ("j", "B", "B"), ("k", "C", "C"),
                                         ("f", "A", "B"), ("g", "B", "C")],
                       {"A": "i", "B": "j", "C": "k"}, {})
    assert any("missing composite at (g, f)" in s for s in err.value.issues)


def test_associativity_failure_is_reported():
    # x∘(y∘x) = x but (x∘y)∘x = y
    with pytest.raises(CategoryError) as err:
        FiniteCategory.from_monoid(
            ["1", "x", "y"],
            lambda g, f: f if g == "1" else g if f == "1" else {("x", "x"): "y", ("x", "y"): "x",
                                                                 ("y", "x"): "y", ("y", "y"): "y"}[(g, f)],
            "1")
    assert any("associativity" in s for s in err.value.issues)


def test_parallel_pair_lacks_colimit_and_pullback():
    P = parallel_pair()
    assert fc.joint_coequalizer(P, "B", [("f", "g")]) is None
    assert fc.pullback(P, "f", "g") is None


def test_diamond_limits_and_colimits():
    D = diamond().category()
    assert not fc.is_strict_epi(D, "a->1")
    assert fc.is_strictly_epic_family(D, ["a->1", "b->1"], "1")
    assert fc.is_strictly_epic_family(D, [], "0")
    assert fc.coproduct(D, ["a", "b"]).vertex == "1"
    assert fc.pullback(D, "a->1", "b->1").vertex == "0"


@pytest.mark.parametrize("name", sorted(CATEGORY_SUBJECTS))
def test_funnel_colimit_matches_general_colimit(name):
    cat = CATEGORY_SUBJECTS[name].cat
    for d0 in cat.objects:
        for pairs in funnels(cat, d0):
            general = fc.joint_coequalizer(cat, d0, pairs)
            leg = funnel_colimit(cat, d0, pairs)
            assert (general is None) == (leg is None)
            if general is not None:
                assert fc.is_iso(cat, next(u for u in cat.hom(cat.cod[leg], general.vertex)
                                          if cat.compose(u, leg) == general.leg("t0")))


@pytest.mark.parametrize("name", sorted(CATEGORY_SUBJECTS))
def test_cocone_enumeration_matches_naive(name):
    cat = CATEGORY_SUBJECTS[name].cat
    for d0 in cat.objects:
        for pairs in funnels(cat, d0)[:8]:
            D = fc.funnel_diagram(cat, d0, pairs)
            fast = {(c.vertex, tuple(m for _, m in c.legs)) for c in fc.cocones(cat, D)}
            assert fast == set(naive_cocones(cat, D))
            assert (fc.colimit(cat, D) is not None) == naive_colimit_exists(cat, D)


@pytest.mark.parametrize("name", sorted(CATEGORY_SUBJECTS))
def test_strict_epis_are_epic(name):
    cat = CATEGORY_SUBJECTS[name].cat
    for m in fc.strict_epis(cat):
        assert fc.classify_morphism(cat, m)["epi"]


def test_find_equivalence_is_reflexive_and_symmetric_on_corpus():
    cats = {n: s.cat for n, s in CATEGORY_SUBJECTS.items()}
    names = sorted(cats)
    for a in names:
        assert fc.find_equivalence(cats[a], cats[a]) is not None
        for b in names:
            ab = fc.find_equivalence(cats[a], cats[b]) is not None
            ba = fc.find_equivalence(cats[b], cats[a]) is not None
            assert ab == ba


def test_equivalence_ignores_duplicate_isomorphic_objects():
    # two isomorphic objects X ≅ Y collapse onto a point
    cat = category(["X", "Y"], [("u", "X", "Y"), ("v", "Y", "X")], {("v", "u"): "id_X", ("u", "v"): "id_Y"})
    point = FiniteCategory.discrete(["*"])
    F = fc.find_equivalence(cat, point)
    assert F is not None and fc.is_equivalence(F)
    assert fc.find_isomorphism(cat, point) is None


def _relabel(cat, tag):
    ren_o = {o: f"{tag}{o}" for o in cat.objects}
    ren_m = {m: f"{tag}{m}" for m in cat.morphisms}
    comp = {(ren_m[g], ren_m[f]): ren_m[h] for g, f, h in cat.composition_table()}
    objs = list(reversed(cat.objects))
    ms = [(ren_m[m], ren_o[cat.dom[m]], ren_o[cat.cod[m]]) for m in reversed(cat.morphisms)]
    return FiniteCategory([ren_o[o] for o in objs], ms, {ren_o[o]: ren_m[cat.identity[o]] for o in objs}, comp)


@given(posets())
def test_poset_categories_satisfy_laws(P):
    cat = P.category()
    assert fc.validate(cat) == []
    assert fc.validate(cat.op()) == []
    assert cat.op().op().same_as(cat)


@given(transformation_monoids())
def test_monoid_categories_satisfy_laws(M):
    assert fc.validate(M) == []


@given(hs.one_of(posets(max_size=4), transformation_monoids()))
def test_isomorphism_search_finds_relabelling(x):
    cat = x.category() if hasattr(x, "category") else x
    other = _relabel(cat, "r_")
    F = fc.find_isomorphism(cat, other)
    assert F is not None and fc.is_equivalence(F)


@given(transformation_monoids())
def test_iso_classification_is_consistent(M):
    for m in M.morphisms:
        c = fc.classify_morphism(M, m)
        assert c["iso"] == (c["splitEpi"] and fc.is_split_mono(M, m))
        if c["iso"]:
            assert c["mono"] and c["epi"]
            assert M.compose(fc.inverse(M, m), m) == M.identity["*"]


@given(posets(max_size=4))
def test_poset_coproducts_and_products_are_joins_and_meets(P):
    cat = P.category()
    for a in P.elements:
        for b in P.elements:
            co = fc.coproduct(cat, [a, b])
            pr = fc.limit(cat, fc.discrete_diagram(cat, [a, b]))
            assert (co.vertex if co else None) == P.lub([a, b])
            assert (pr.vertex if pr else None) == P.glb([a, b])
