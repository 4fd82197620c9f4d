"""Regenerate the bundled corpus under src/finsites/corpus/.

Derived expectations are computed here by independent oracles (presheaf
sheafification, Yoneda sheaf checks) and frozen into the JSON files; the
corpus runner later recomputes them through the arch calculus and the
classifiers.  Published expectations are written by hand and asserted
against the oracles before anything is written.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from finsites import duality as du, fincat as fc, sheaf as sh, site as st  # noqa: E402
from finsites.formats import dumps, emit  # noqa: E402

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "finsites", "corpus")


def category(objs, gens, comp):
    ms = [(f"id_{o}", o, o) for o in objs] + list(gens)
    return fc.FiniteCategory(objs, ms, {o: f"id_{o}" for o in objs}, comp)


def poset(elements, leq):
    return du.FinPoset(elements, leq)


def pub(check, value, citation, **args):
    e = {"check": check}
    if args:
        e["args"] = args
    e.update(value=value, provenance="published", citation=citation)
    return e


def der(check, value, how, **args):
    e = {"check": check}
    if args:
        e["args"] = args
    e.update(value=value, provenance="derived", citation=how)
    return e


def triv(check, value, **args):
    e = {"check": check}
    if args:
        e["args"] = args
    e.update(value=value, provenance="trivial")
    return e


# ---------------------------------------------------------------------------
# categories

POINT = category(["*"], [], {})

PARALLEL = category(["A", "B"], [("f", "A", "B"), ("g", "A", "B")], {})

COEQUALIZER = category(["A", "B", "Q"], [("f", "A", "B"), ("g", "A", "B"), ("q", "B", "Q"), ("h", "A", "Q")],
                       {("q", "f"): "h", ("q", "g"): "h"})

DIAMOND_P = poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1"), ("0", "1")])
DIAMOND = DIAMOND_P.category()

CHAIN3_P = poset(["0", "1", "2"], [("0", "1"), ("1", "2"), ("0", "2")])
CHAIN3 = CHAIN3_P.category()

DISCRETE2 = fc.FiniteCategory.discrete(["X", "Y"])

TWOREL_C = category(
    ["R1", "R2", "A", "B"],
    [("x1", "R1", "A"), ("y1", "R1", "A"), ("x2", "R2", "A"), ("y2", "R2", "A"), ("e", "A", "B"),
     ("e1", "R1", "B"), ("e2", "R2", "B")],
    {("e", "x1"): "e1", ("e", "y1"): "e1", ("e", "x2"): "e2", ("e", "y2"): "e2"})

# c coequalizes the pair from R2 and d the pair from R1; both then map onto B.
TWOREL_CPRIME = category(
    ["R1", "R2", "A", "C", "D", "B"],
    [("x1", "R1", "A"), ("y1", "R1", "A"), ("x2", "R2", "A"), ("y2", "R2", "A"),
     ("c", "A", "C"), ("d", "A", "D"), ("e", "A", "B"), ("p", "C", "B"), ("q", "D", "B"),
     ("cx1", "R1", "C"), ("cy1", "R1", "C"), ("cx2", "R2", "C"),
     ("dx1", "R1", "D"), ("dx2", "R2", "D"), ("dy2", "R2", "D"),
     ("ex1", "R1", "B"), ("ex2", "R2", "B")],
    {("c", "x1"): "cx1", ("c", "y1"): "cy1", ("c", "x2"): "cx2", ("c", "y2"): "cx2",
     ("d", "x1"): "dx1", ("d", "y1"): "dx1", ("d", "x2"): "dx2", ("d", "y2"): "dy2",
     ("e", "x1"): "ex1", ("e", "y1"): "ex1", ("e", "x2"): "ex2", ("e", "y2"): "ex2",
     ("p", "c"): "e", ("q", "d"): "e",
     ("p", "cx1"): "ex1", ("p", "cy1"): "ex1", ("p", "cx2"): "ex2",
     ("q", "dx1"): "ex1", ("q", "dx2"): "ex2", ("q", "dy2"): "ex2"})

# X → Y ⇉ Z where t is covering and u∘t = v∘t, so u and v become locally equal.
CONGRUENCE = category(["X", "Y", "Z"], [("t", "X", "Y"), ("u", "Y", "Z"), ("v", "Y", "Z"), ("w", "X", "Z")],
                      {("u", "t"): "w", ("v", "t"): "w"})

Z2 = fc.FiniteCategory.from_monoid(["1", "s"], lambda g, f: "1" if g == f else "s", "1")

IDEMPOTENT = fc.FiniteCategory.from_monoid(["1", "e"], lambda g, f: "1" if g == f == "1" else "e", "1")

M3 = du.JoinSemilattice.from_order(
    ["0", "a", "b", "c", "1"],
    [("0", x) for x in "abc1"] + [(x, "1") for x in "abc"])

N5 = du.JoinSemilattice.from_order(
    ["0", "a", "b", "c", "1"],
    [("0", x) for x in "abc1"] + [(x, "1") for x in "abc"] + [("a", "c")])

DIAMOND_JSL = du.JoinSemilattice(DIAMOND_P)
CHAIN3_JSL = du.JoinSemilattice(CHAIN3_P)

ANTICHAIN2 = poset(["p", "q"], [])
V_POSET = poset(["0", "a", "b"], [("0", "a"), ("0", "b")])


# ---------------------------------------------------------------------------
# oracle-derived expectations

def yoneda_subcanonical(site):
    return all(sh.is_sheaf(site, sh.yoneda(site.cat, A)) for A in site.cat.objects)


def site_expectations(site, principal, pairs="all"):
    cat = site.cat
    out = [
        triv("topology_axioms", True),
        der("cross_oracle", True, "sheaf morphisms between sheafified representables"),
        der("colimit_agreement", True, "local bijectivity of the comparison from the presheaf colimit"),
        triv("classifier_implications", True),
        der("subcanonical", yoneda_subcanonical(site), "sheaf condition checked on each representable"),
        der("supercompact_count", len(sh.supercompact_objects(site)),
            "quotients of sheafified representables up to isomorphism"),
    ]
    if principal:
        out.append(der("quotient_agreement", True, "representable categories compared by isomorphism search"))
        out.append(der("quotient_morphisms", len(st.canonical_congruence(site).quotient.cat.morphisms),
                       "local equality decided by covering of equalizer sieves"))
    objs = cat.objects if pairs == "all" else pairs
    for A in objs:
        for B in objs:
            out.append(der("arch_homs", len(sh.hom_sheaves(site, A, B)),
                           "sheaf morphisms between sheafified representables", A=A, B=B))
    return out


def site_doc(site):
    return emit(site)


# ---------------------------------------------------------------------------
# entries

PAR_PAIR = "presheaves on a parallel pair: supercompact objects form the coequalizer diagram"
TWOREL = "two relations on one object: supercompact objects of C recover C' and ell fails to preserve a coequalizer"
DIAMOND_NOTE = "four-element lattice: reductive, a strictly epic family without a strict epimorphism"
LOCALIC = "presheaves on a poset have the poset as supercompact objects"
NJSL = "distributivity of a join semilattice: a ≤ b∨c splits as b'∨c'"
STONE = "Stone duality for distributive join semilattices"
DISCRETE = "a discrete category with more than one object is reductive and locally regular but not regular"
ATOMIC = "the class of all morphisms is stable exactly under the right Ore condition (atomic topology)"
CANON = "local equality is a congruence and the covering class becomes epic in the quotient"
COALESCENT = "coalescent categories are reductive with a strict initial object"


def entries():
    E = []

    def add(name, description, doc, expect, encoding=None):
        entry = {"name": name, "description": description}
        if encoding:
            entry["encoding"] = encoding
        entry.update(input=doc, expect=expect)
        E.append(entry)

    s = st.trivial_site(POINT)
    add("point", "one object, one morphism, trivial topology", site_doc(s),
        site_expectations(s, True) + [triv("supercompact_equivalent", True, target="self"),
                                      triv("round_trip", True)])

    s = st.trivial_site(PARALLEL)
    add("parallel_pair", "presheaves on A ⇉ B", site_doc(s), site_expectations(s, True) + [
        pub("supercompact_count", 3, PAR_PAIR),
        pub("supercompact_equivalent", True, PAR_PAIR, target="coequalizer"),
        der("arch_homs", 2, "sheaf morphisms ell(A) → ell(B)", A="A", B="B"),
    ])

    s = st.reductive_site(COEQUALIZER)
    add("coequalizer", "A ⇉ B → Q with q coequalizing f and g, reductive topology", site_doc(s),
        site_expectations(s, True) + [
            pub("classify", "true", PAR_PAIR, property="reductive"),
            pub("classify", "false", PAR_PAIR, property="equalizers"),
            pub("classify", "false", PAR_PAIR, property="pullbacks"),
            pub("classify", "false", PAR_PAIR, property="locallyRegular"),
            der("strict_epi", True, "q is the joint coequalizer of f and g", morphism="q"),
            triv("round_trip", True),
        ])

    s = st.trivial_site(DIAMOND)
    add("diamond", "presheaves on the four-element lattice", site_doc(s), site_expectations(s, True) + [
        pub("effective_epimorphic_sieve", True, DIAMOND_NOTE, cod="1", generators=["a->1", "b->1"]),
        pub("strict_epi", False, DIAMOND_NOTE, morphism="a->1"),
        pub("supercompact_equivalent", True, LOCALIC, target="self"),
        pub("classify", "true", DIAMOND_NOTE, property="reductive"),
        der("classify", "true", "funnel colimits and arch search", property="effectual"),
        der("classify", "true", "pullbacks and image factorizations", property="locallyRegular"),
        der("classify", "true", "pullbacks and image factorizations", property="regular"),
        triv("round_trip", True),
    ])

    s = st.augmented_reductive_site(DIAMOND)
    add("diamond_augmented", "four-element lattice, strict epimorphisms plus the empty cover of 0",
        site_doc(s), site_expectations(s, True))

    s = du.finite_join_site(DIAMOND_JSL)
    add("diamond_coalescent", "four-element lattice covered by finite join decompositions", site_doc(s),
        site_expectations(s, False) + [
            pub("classify", "true", COALESCENT, property="coalescent"),
            pub("classify", "true", COALESCENT, property="strictInitial"),
        ])

    s = st.reductive_site(TWOREL_C)
    enc_c = ("objects R1, R2, A, B; both pairs R_i ⇉ A are coequalized by e: A → B; "
             "the unnamed dot in the drawing is omitted")
    add("tworel_C", "two relations on A, both coequalized onto the terminal B", site_doc(s),
        site_expectations(s, True, pairs=["A", "B"]) + [
            pub("supercompact_equivalent", True, TWOREL, target="tworel_Cprime"),
            pub("classify", "true", TWOREL, property="reductive"),
            pub("classify", ["false", {"apex": "A", "g1": "x2", "g2": "y2", "object": "R2",
                                       "pairs": [["x1", "y1"]]}], TWOREL,
                property="effectual", witness=True),
            pub("supercompact_count", 6, TWOREL),
            der("round_trip", False, "effectuality fails, so the round trip is refused"),
        ], encoding=enc_c)

    s = st.reductive_site(TWOREL_CPRIME)
    enc_cp = ("objects R1, R2, A, C, D, B; c: A → C coequalizes the pair from R2, d: A → D the pair "
              "from R1, and p∘c = e = q∘d; the dashed arrows are the composites R_i → C, D")
    add("tworel_Cprime", "two relations on A with separate coequalizers C and D", site_doc(s),
        site_expectations(s, True, pairs=["A", "C", "D"]) + [
            pub("classify", "true", TWOREL, property="reductive"),
            pub("classify", "true", TWOREL, property="effectual"),
            pub("round_trip", True, TWOREL),
        ], encoding=enc_cp)

    s = st.trivial_site(CHAIN3)
    add("chain3", "presheaves on the chain 0 < 1 < 2", site_doc(s), site_expectations(s, True) + [
        pub("supercompact_equivalent", True, LOCALIC, target="self"),
        triv("round_trip", True),
    ])

    s = du.finite_join_site(CHAIN3_JSL)
    add("chain3_joins", "the chain 0 < 1 < 2 covered by finite join decompositions", site_doc(s),
        site_expectations(s, False))

    s = st.trivial_site(DISCRETE2)
    add("discrete2", "two objects and no other morphisms", site_doc(s), site_expectations(s, True) + [
        pub("classify", "true", DISCRETE, property="reductive"),
        pub("classify", "true", DISCRETE, property="locallyRegular"),
        pub("classify", "false", DISCRETE, property="regular"),
    ])

    s = st.PrincipalSite(CONGRUENCE, ["id_X", "id_Y", "id_Z", "t"])
    add("congruence", "X → Y ⇉ Z with t covering and u∘t = v∘t", site_doc(s),
        site_expectations(s, True) + [
            pub("quotient_morphisms", 6, CANON),
            pub("quotient_agreement", True, CANON),
        ])

    s = st.PrincipalSite(Z2, Z2.morphisms)
    add("z2_atomic", "the group of order two with the atomic topology", site_doc(s),
        site_expectations(s, True) + [der("arch_homs", 2, "automorphisms of the regular action", A="*", B="*")])

    s = st.PrincipalSite(IDEMPOTENT, IDEMPOTENT.morphisms)
    add("idempotent_atomic", "the monoid {1, e} with e∘e = e and the atomic topology", site_doc(s),
        site_expectations(s, True) + [pub("quotient_morphisms", 1, ATOMIC)])

    # orders
    add("njsl5", "the five-element lattice with three atoms", emit(M3), [
        pub("distributive", [False, ["c", "a", "b"]], NJSL, witness=True),
        pub("family_axiom", False, NJSL, axiom="ax3'"),
        pub("stone_round_trip", False, STONE),
    ])
    add("pentagon", "the five-element lattice with a chain a < c beside b", emit(N5), [
        der("distributive", False, "brute-force search over triples"),
        der("family_axiom", False, "brute-force search over finite join families", axiom="ax3'"),
    ])
    add("diamond_lattice", "the four-element Boolean lattice as a join semilattice", emit(DIAMOND_JSL), [
        pub("prime_filters", 2, STONE),
        pub("stone_round_trip", True, STONE),
        triv("distributive", True),
        der("family_axiom", True, "brute-force search over finite join families", axiom="ax3'"),
    ])
    add("chain3_lattice", "the chain 0 < 1 < 2 as a join semilattice", emit(CHAIN3_JSL), [
        der("prime_filters", 2, "points of the ideal frame"),
        triv("stone_round_trip", True),
        triv("alexandroff_round_trip", True),
    ])
    add("antichain2", "two incomparable points", emit(ANTICHAIN2), [
        pub("alexandroff_round_trip", True, LOCALIC),
        pub("supercompact_equivalent", True, LOCALIC, target="self"),
        triv("round_trip", True),
    ])
    add("vee", "a bottom below two incomparable points", emit(V_POSET), [
        pub("alexandroff_round_trip", True, LOCALIC),
        pub("supercompact_equivalent", True, LOCALIC, target="self"),
    ])

    # functors
    pt = st.trivial_site(POINT)
    F = fc.Functor(DIAMOND, POINT, {o: "*" for o in DIAMOND.objects}, {m: "id_*" for m in DIAMOND.morphisms})
    add("functor_diamond_to_point", "collapse the diamond onto a point (trivial topologies)",
        {"kind": "functor", "source": emit(st.trivial_site(DIAMOND)), "target": emit(pt),
         "on_objects": F.obj, "on_morphisms": F.mor}, [
            der("morphism_of_sites", True, "flatness of the collapse map on the underlying posets"),
            der("comorphism_of_sites", True, "cover lifting along the trivial topologies"),
        ])
    A = ANTICHAIN2.category()
    G = fc.Functor(A, POINT, {o: "*" for o in A.objects}, {m: "id_*" for m in A.morphisms})
    add("functor_antichain_to_point", "collapse two incomparable points onto a point",
        {"kind": "functor", "source": emit(st.trivial_site(A)), "target": emit(pt),
         "on_objects": G.obj, "on_morphisms": G.mor}, [
            der("morphism_of_sites", False, "flatness of the collapse map on the underlying posets"),
        ])
    return E


def check_published(E):
    """Assert the hand-written values that are cheap to confirm here."""
    sc = sh.supercompact_category(st.trivial_site(PARALLEL)).category
    assert len(sc.objects) == 3 and fc.find_equivalence(sc, COEQUALIZER)
    assert fc.find_equivalence(sh.supercompact_category(st.reductive_site(TWOREL_C)).category, TWOREL_CPRIME)
    assert du.is_distributive(M3) == (False, ("c", "a", "b"))
    assert len(du.prime_filters(DIAMOND_JSL)) == 2
    assert du.is_flat_map({o: "*" for o in DIAMOND_P.elements}, DIAMOND_P, poset(["*"], []))
    assert not du.is_flat_map({o: "*" for o in ANTICHAIN2.elements}, ANTICHAIN2, poset(["*"], []))


def main():
    E = entries()
    check_published(E)
    os.makedirs(OUT, exist_ok=True)
    for f in os.listdir(OUT):
        if f.endswith(".json"):
            os.remove(os.path.join(OUT, f))
    for e in E:
        with open(os.path.join(OUT, e["name"] + ".json"), "w", encoding="utf-8") as fh:
            fh.write(dumps(e))
    print(f"wrote {len(E)} entries to {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
