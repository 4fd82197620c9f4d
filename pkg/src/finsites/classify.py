"""Exactness classifiers for finite categories.

Each check returns a `Verdict`.  Checks that quantify over every funnel on
an object are bounded by `funnel_cap` (the number of subsets of parallel
pairs into that object); beyond it the verdict is inconclusive.
"""

from dataclasses import dataclass, field
from itertools import combinations, product

from .fincat import (Cone, coproduct, cospan_diagram, funnel_diagram, initial_objects, is_epi,
                     is_initial, is_iso, is_limit_cone, is_mono, is_strict_initial,
                     parallel_pairs_into, pullback, equalizer, strict_epis, terminal_objects,
                     under_comma_components, find_equivalence)
from .site import check_stable_class, check_stable_family_class, strictly_epic_families

DEFAULT_FUNNEL_CAP = 1 << 12


@dataclass(frozen=True)
class Verdict:
    status: str              # "true" | "false" | "inconclusive" | "undefined"
    witness: object = None
    note: str = ""

    @property
    def holds(self):
        return {"true": True, "false": False}.get(self.status)

    def __str__(self):
        out = self.status
        if self.witness is not None:
            out += f" (witness: {format_witness(self.witness)})"
        if self.note:
            out += f" [{self.note}]"
        return out


def format_witness(w):
    if isinstance(w, (tuple, list)):
        return "(" + ", ".join(format_witness(x) for x in w) + ")"
    if isinstance(w, dict):
        return "{" + ", ".join(f"{k}: {format_witness(v)}" for k, v in w.items()) + "}"
    return str(w)


TRUE = Verdict("true")


def _false(w, note=""):
    return Verdict("false", w, note)


def _both(*vs):
    """Conjunction: first false wins, then inconclusive/undefined."""
    for v in vs:
        if v.status == "false":
            return v
    for v in vs:
        if v.status != "true":
            return v
    return TRUE


# ---------------------------------------------------------------------------
# funnels

def _coequalizing(cat, d0, pairs):
    return frozenset(k for k in cat.out_of(d0)
                     if all(cat.compose(k, p) == cat.compose(k, q) for p, q in pairs))


def _funnel_colimit_leg(cat, d0, K):
    """Leg out of d0 of the colimit of a funnel whose cocones are the set K."""
    for lam in cat.sort_morphisms(K):
        if all(sum(1 for u in cat.hom(cat.cod[lam], cat.cod[k]) if cat.compose(u, lam) == k) == 1
               for k in K):
            return lam
    return None


def funnels(cat, d0, cap=DEFAULT_FUNNEL_CAP):
    """Every normalized funnel on d0 (subset of parallel pairs), or None if
    the count exceeds cap."""
    pairs = parallel_pairs_into(cat, d0)
    if 2 ** len(pairs) > cap:
        return None
    return [list(sub) for r in range(len(pairs) + 1) for sub in combinations(pairs, r)]


def funnel_colimit(cat, d0, pairs):
    """Leg d0 → colimit of the funnel, or None."""
    memo = cat.memo("funnel_colim", dict)
    K = _coequalizing(cat, d0, pairs)
    key = (d0, K)
    if key not in memo:
        memo[key] = _funnel_colimit_leg(cat, d0, K)
    return memo[key]


def has_funneling_colimits(cat, cap=DEFAULT_FUNNEL_CAP):
    skipped = []
    for d0 in cat.objects:
        fs = funnels(cat, d0, cap)
        if fs is None:
            skipped.append(d0)
            continue
        for P in fs:
            if funnel_colimit(cat, d0, P) is None:
                return _false({"apex": d0, "pairs": P}, "funnel without colimit")
    if skipped:
        return Verdict("inconclusive", None, "funnel cap exceeded at " + ", ".join(skipped))
    return TRUE


# ---------------------------------------------------------------------------
# reductive / coalescent

def strict_epis_stable(cat):
    rep = check_stable_class(cat, strict_epis(cat))
    fail = rep.first_failure(["ax1", "ax2", "ax3"])
    return _false(fail, "strict epimorphisms not stable") if fail else TRUE


def is_reductive(cat, cap=DEFAULT_FUNNEL_CAP):
    return _both(has_funneling_colimits(cat, cap), strict_epis_stable(cat))


def has_finite_coproducts(cat):
    if not initial_objects(cat):
        return _false("no initial object")
    for i, a in enumerate(cat.objects):
        for b in cat.objects[i:]:
            if coproduct(cat, [a, b]) is None:
                return _false((a, b), "missing binary coproduct")
    return TRUE


def has_strict_initial(cat):
    inits = initial_objects(cat)
    if not inits:
        return _false("no initial object")
    return TRUE if is_strict_initial(cat, inits[0]) else _false(inits[0], "initial object not strict")


def strictly_epic_families_stable(cat, family_cap=1 << 12):
    fams = []
    for c in cat.objects:
        fs = strictly_epic_families(cat, c, family_cap)
        if fs is None:
            return Verdict("inconclusive", None, f"too many candidate families over {c}")
        fams.extend((c, f) for f in fs)
    rep = check_stable_family_class(cat, fams)
    fail = rep.first_failure(["ax1'", "ax2'", "ax3'"])
    if fail:
        return _false(fail, "strictly epic families not stable")
    if rep.holds["ax2'"] is None:
        return Verdict("inconclusive", None, "family cap exceeded")
    return TRUE


def is_coalescent(cat, cap=DEFAULT_FUNNEL_CAP):
    v = has_finite_coproducts(cat)
    if v.status != "true":
        return v
    v = has_funneling_colimits(cat, cap)
    if v.status != "true":
        return v
    return strictly_epic_families_stable(cat)


# ---------------------------------------------------------------------------
# effectual

def is_effectual(cat, cap=DEFAULT_FUNNEL_CAP, reductive=None, coalescent=None):
    """Identifications made by a funneling colimit become zigzags after a
    strict-epi refinement.  Witness: (funnel, object, g1, g2)."""
    reductive = is_reductive(cat, cap) if reductive is None else reductive
    if reductive.status != "true":
        coalescent = is_coalescent(cat, cap) if coalescent is None else coalescent
        if coalescent.status != "true":
            return Verdict("undefined", None, "requires a reductive or coalescent category")
    se = strict_epis(cat)
    into_se = {c: cat.sort_morphisms(t for t in se if cat.cod[t] == c) for c in cat.objects}
    for d0 in cat.objects:
        fs = funnels(cat, d0, cap)
        if fs is None:
            return Verdict("inconclusive", None, f"funnel cap exceeded at {d0}")
        for P in fs:
            lam = funnel_colimit(cat, d0, P)
            if lam is None:
                continue
            D = funnel_diagram(cat, d0, P)
            comps = {}

            def comp_of(x, m):
                if x not in comps:
                    idx = {}
                    for n, grp in enumerate(under_comma_components(cat, x, D)):
                        for node in grp:
                            idx[node] = n
                    comps[x] = idx
                return comps[x][("t0", m)]

            for c in cat.objects:
                hs = cat.hom(c, d0)
                for a in range(len(hs)):
                    for b in range(a + 1, len(hs)):
                        g1, g2 = hs[a], hs[b]
                        if cat.compose(lam, g1) != cat.compose(lam, g2):
                            continue
                        if not any(comp_of(cat.dom[t], cat.compose(g1, t)) == comp_of(cat.dom[t], cat.compose(g2, t))
                                   for t in into_se[c]):
                            return _false({"apex": d0, "pairs": P, "object": c, "g1": g1, "g2": g2})
    return TRUE


# ---------------------------------------------------------------------------
# positivity

def is_positive(cat, coalescent=None, cap=DEFAULT_FUNNEL_CAP):
    """Coproduct injections are monic and distinct summands are disjoint
    (their pullback is a strict initial object)."""
    coalescent = is_coalescent(cat, cap) if coalescent is None else coalescent
    if coalescent.status != "true":
        return Verdict("undefined", None, "requires a coalescent category")
    for i, a in enumerate(cat.objects):
        for b in cat.objects[i:]:
            cp = coproduct(cat, [a, b])
            i1, i2 = cp.leg("x0"), cp.leg("x1")
            for inj in (i1, i2):
                if not is_mono(cat, inj):
                    return _false((a, b, inj), "injection not monic")
            pb = pullback(cat, i1, i2)
            if pb is None or not is_strict_initial(cat, pb.vertex):
                return _false((a, b), "summands not disjoint")
    return TRUE


# ---------------------------------------------------------------------------
# regularity

def has_pullbacks(cat):
    for c in cat.objects:
        ins = cat.into(c)
        for i, f in enumerate(ins):
            for g in ins[i:]:
                if pullback(cat, f, g) is None:
                    return _false((f, g), "cospan without pullback")
    return TRUE


def has_equalizers(cat):
    for a in cat.objects:
        for b in cat.objects:
            hs = cat.hom(a, b)
            for i, f in enumerate(hs):
                for g in hs[i + 1:]:
                    if equalizer(cat, f, g) is None:
                        return _false((f, g), "pair without equalizer")
    return TRUE


def is_extremal_epi(cat, e):
    if not is_epi(cat, e):
        return False
    for m in cat.into(cat.cod[e]):
        if is_mono(cat, m) and not is_iso(cat, m):
            if any(cat.compose(m, g) == e for g in cat.hom(cat.dom[e], cat.dom[m])):
                return False
    return True


def jointly_monic(cat, r1, r2):
    R = cat.dom[r1]
    for x in cat.objects:
        seen = set()
        for h in cat.hom(x, R):
            key = (cat.compose(r1, h), cat.compose(r2, h))
            if key in seen:
                return False
            seen.add(key)
    return True


def _factorization_system(cat):
    ee = [m for m in cat.morphisms if is_extremal_epi(cat, m)]
    mono = [m for m in cat.morphisms if is_mono(cat, m)]
    for f in cat.morphisms:
        if not any(cat.compose(m, e) == f for e in ee if cat.dom[e] == cat.dom[f]
                   for m in mono if cat.dom[m] == cat.cod[e] and cat.cod[m] == cat.cod[f]):
            return _false(f, "no (extremal epi, mono) factorization")
    for e in ee:
        for m in mono:
            for u in cat.hom(cat.dom[e], cat.dom[m]):
                for v in cat.hom(cat.cod[e], cat.cod[m]):
                    if cat.compose(m, u) != cat.compose(v, e):
                        continue
                    ds = [d for d in cat.hom(cat.cod[e], cat.dom[m])
                          if cat.compose(d, e) == u and cat.compose(m, d) == v]
                    if len(ds) != 1:
                        return _false((e, m, u, v), "square without unique diagonal")
    return TRUE


def _span_factorizations(cat):
    ee = [m for m in cat.morphisms if is_extremal_epi(cat, m)]
    for x in cat.objects:
        for f in cat.out_of(x):
            for g in cat.out_of(x):
                if not any(jointly_monic(cat, r1, r2)
                           for e in ee if cat.dom[e] == x
                           for r1 in cat.hom(cat.cod[e], cat.cod[f]) if cat.compose(r1, e) == f
                           for r2 in cat.hom(cat.cod[e], cat.cod[g]) if cat.compose(r2, e) == g):
                    return _false((f, g), "span without jointly monic image")
    return TRUE


def is_locally_regular(cat):
    return _both(has_pullbacks(cat), has_equalizers(cat), _factorization_system(cat),
                 _span_factorizations(cat))


def has_terminal(cat):
    return TRUE if terminal_objects(cat) else _false("no terminal object")


def is_regular(cat, locally_regular=None):
    locally_regular = is_locally_regular(cat) if locally_regular is None else locally_regular
    return _both(locally_regular, has_terminal(cat))


def equivalence_relations(cat, A):
    """Jointly monic, reflexive, symmetric, transitive pairs (a, b): R ⇉ A."""
    out = []
    idA = cat.identity[A]
    for R in cat.objects:
        for a, b in product(cat.hom(R, A), repeat=2):
            if not jointly_monic(cat, a, b):
                continue
            if not any(cat.compose(a, r) == idA and cat.compose(b, r) == idA for r in cat.hom(A, R)):
                continue
            if not any(cat.compose(a, s) == b and cat.compose(b, s) == a for s in cat.hom(R, R)):
                continue
            pb = pullback(cat, b, a)
            p1, p2 = pb.leg("a"), pb.leg("b")
            if not any(cat.compose(a, t) == cat.compose(a, p1) and cat.compose(b, t) == cat.compose(b, p2)
                       for t in cat.hom(pb.vertex, R)):
                continue
            out.append((R, a, b))
    return out


def is_kernel_pair(cat, R, a, b):
    for f in cat.out_of(cat.cod[a]):
        fa = cat.compose(f, a)
        if fa != cat.compose(f, b):
            continue
        D = cospan_diagram(cat, f, f)
        if is_limit_cone(cat, D, Cone(R, (("a", a), ("b", b), ("c", fa)))):
            return True
    return False


def is_effective(cat, pullbacks=None):
    pullbacks = has_pullbacks(cat) if pullbacks is None else pullbacks
    if pullbacks.status != "true":
        return Verdict("undefined", None, "requires pullbacks")
    for A in cat.objects:
        for R, a, b in equivalence_relations(cat, A):
            if not is_kernel_pair(cat, R, a, b):
                return _false((R, a, b), "equivalence relation that is not a kernel pair")
    return TRUE


# ---------------------------------------------------------------------------
# report

@dataclass
class ClassificationReport:
    verdicts: dict = field(default_factory=dict)

    def __getitem__(self, k):
        return self.verdicts[k]

    def lines(self):
        return [f"{k}: {v}" for k, v in self.verdicts.items()]

    def inconclusive(self):
        return any(v.status == "inconclusive" for v in self.verdicts.values())

    def as_dict(self):
        return {k: {"status": v.status, "witness": _jsonable(v.witness), "note": v.note}
                for k, v in self.verdicts.items()}


def _jsonable(w):
    if isinstance(w, (tuple, list)):
        return [_jsonable(x) for x in w]
    if isinstance(w, dict):
        return {str(k): _jsonable(v) for k, v in w.items()}
    return w


def classify(cat, funnel_cap=DEFAULT_FUNNEL_CAP):
    v = {}
    v["funnelingColimits"] = has_funneling_colimits(cat, funnel_cap)
    v["strictEpisStable"] = strict_epis_stable(cat)
    v["reductive"] = _both(v["funnelingColimits"], v["strictEpisStable"])
    v["finiteCoproducts"] = has_finite_coproducts(cat)
    v["strictInitial"] = has_strict_initial(cat)
    v["coalescent"] = is_coalescent(cat, funnel_cap)
    v["augmented"] = _both(v["reductive"], TRUE if initial_objects(cat) else _false("no initial object"))
    v["effectual"] = is_effectual(cat, funnel_cap, v["reductive"], v["coalescent"])
    v["positive"] = is_positive(cat, v["coalescent"], funnel_cap)
    v["pullbacks"] = has_pullbacks(cat)
    v["equalizers"] = has_equalizers(cat)
    v["locallyRegular"] = is_locally_regular(cat)
    v["regular"] = is_regular(cat, v["locallyRegular"])
    v["effective"] = is_effective(cat, v["pullbacks"])
    return ClassificationReport(v)


@dataclass
class RoundTrip:
    ok: bool
    functor: object = None
    note: str = ""


def correspondence_round_trip(cat, funnel_cap=DEFAULT_FUNNEL_CAP):
    """Rebuild an effectual reductive category from the supercompact objects
    of its sheaf topos, and compare."""
    from .sheaf import supercompact_category
    from .site import reductive_site
    red = is_reductive(cat, funnel_cap)
    if red.status != "true":
        return RoundTrip(False, None, f"not reductive: {red}")
    eff = is_effectual(cat, funnel_cap, red)
    if eff.status != "true":
        return RoundTrip(False, None, f"not effectual: {eff}")
    sc = supercompact_category(reductive_site(cat))
    F = find_equivalence(sc.category, cat)
    if F is None:
        return RoundTrip(False, None, "supercompact category not equivalent")
    return RoundTrip(True, F)
