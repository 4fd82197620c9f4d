"""Sieves, stable classes and the sites they generate.

A `PrincipalSite` is generated by a stable class of morphisms: a sieve covers
when it contains a class member.  An `FGSite` is generated by a stable class
of finite families: a sieve covers when it contains every member of some
family in the class.  Both may additionally declare objects on which the
empty sieve covers.
"""

from dataclasses import dataclass, field
from itertools import combinations, product

from .fincat import (CategoryError, Cocone, Diagram, FiniteCategory, Functor, check_functor,
                     is_colimit_cocone, is_epi, is_initial, is_strict_epi, is_strictly_epic_family,
                     strict_epis)
from .unionfind import UnionFind


class SiteError(CategoryError):
    """A stable class that violates one of its load-time axioms."""


@dataclass(frozen=True)
class Sieve:
    cod: str
    arrows: frozenset

    def __contains__(self, f):
        return f in self.arrows

    def __len__(self):
        return len(self.arrows)

    def sorted(self, cat):
        return cat.sort_morphisms(self.arrows)


def generated_sieve(cat, arrows, cod):
    """Smallest sieve on `cod` containing `arrows`."""
    out = set()
    for f in arrows:
        if cat.cod[f] != cod:
            raise CategoryError(f"{f!r} does not have codomain {cod!r}")
        for h in cat.into(cat.dom[f]):
            out.add(cat.compose(f, h))
    return Sieve(cod, frozenset(out))


def maximal_sieve(cat, c):
    return Sieve(c, frozenset(cat.into(c)))


def pullback_sieve(cat, S, f):
    """f*(S) = {g : f∘g ∈ S} on the domain of f."""
    if cat.cod[f] != S.cod:
        raise CategoryError(f"{f!r} does not land in {S.cod!r}")
    d = cat.dom[f]
    return Sieve(d, frozenset(g for g in cat.into(d) if cat.compose(f, g) in S.arrows))


def is_sieve(cat, S):
    return all(cat.compose(f, h) in S.arrows for f in S.arrows for h in cat.into(cat.dom[f]))


def all_sieves(cat, c):
    """Every sieve on c, ordered by size then by sorted member indices."""
    start = Sieve(c, frozenset())
    seen = {start.arrows: start}
    frontier = [start]
    principal = {f: generated_sieve(cat, [f], c).arrows for f in cat.into(c)}
    while frontier:
        nxt = []
        for S in frontier:
            for f in cat.into(c):
                if f in S.arrows:
                    continue
                arr = S.arrows | principal[f]
                if arr not in seen:
                    seen[arr] = Sieve(c, arr)
                    nxt.append(seen[arr])
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (len(s), sorted(cat.mor_index(m) for m in s.arrows)))


def sieve_diagram(cat, S):
    """The sieve viewed as a diagram: one shape object per member, one shape
    arrow f → f' per h with f'∘h = f."""
    arrows = S.sorted(cat)
    ms, ident, mor, comp = [], {}, {}, {}
    triples = []
    for f in arrows:
        for f2 in arrows:
            for h in cat.hom(cat.dom[f], cat.dom[f2]):
                if cat.compose(f2, h) == f:
                    name = f"{f}|{h}|{f2}"
                    triples.append((name, f, h, f2))
                    ms.append((name, f, f2))
                    mor[name] = h
                    if f == f2 and cat.is_identity(h):
                        ident[f] = name
    by_key = {(f, h, f2): name for name, f, h, f2 in triples}
    for n1, f, h, f2 in triples:
        for n2, g, h2, g2 in triples:
            if g == f2:
                comp[(n2, n1)] = by_key[(f, cat.compose(h2, h), g2)]
    shape = FiniteCategory(arrows, ms, ident, comp, check=False)
    return Diagram(shape, cat, {f: cat.dom[f] for f in arrows}, mor)


def is_effective_epimorphic_sieve(cat, S):
    """Whether the codomain is the colimit of the sieve, via its members."""
    D = sieve_diagram(cat, S)
    lam = Cocone(S.cod, tuple((f, f) for f in D.source.objects))
    return is_colimit_cocone(cat, D, lam)


def is_universally_effective_epimorphic(cat, S):
    return all(is_effective_epimorphic_sieve(cat, pullback_sieve(cat, S, f)) for f in cat.into(S.cod))


def saturate(cat, tclass):
    """{f | f∘g ∈ T for some g}."""
    T = set(tclass)
    return frozenset(f for f in cat.morphisms
                     if any(cat.compose(f, g) in T for g in cat.into(cat.dom[f])))


# ---------------------------------------------------------------------------
# axiom reports

@dataclass
class AxiomReport:
    holds: dict = field(default_factory=dict)      # axiom -> True / False / None (inconclusive)
    witnesses: dict = field(default_factory=dict)  # axiom -> failure witness
    squares: dict = field(default_factory=dict)    # stability witnesses, when recorded

    def ok(self, names=None):
        names = self.holds if names is None else names
        return all(self.holds[n] is True for n in names)

    def first_failure(self, names=None):
        for n in (self.holds if names is None else names):
            if self.holds[n] is False:
                return n, self.witnesses.get(n)
        return None


def stability_squares(cat, tclass, t, g):
    """Pairs (s, y) with s ∈ T, cod s = dom g and g∘s = t∘y."""
    out = []
    for s in cat.sort_morphisms(m for m in tclass if cat.cod[m] == cat.dom[g]):
        for y in cat.hom(cat.dom[s], cat.dom[t]):
            if cat.compose(g, s) == cat.compose(t, y):
                out.append((s, y))
    return out


def _flag_issues(cat, tclass, flagged):
    for o in flagged:
        for m in cat.into(o):
            if cat.dom[m] not in flagged:
                return ("morphism into an empty-covered object from an uncovered one", m)
    for t in cat.sort_morphisms(tclass):
        if cat.dom[t] in flagged and cat.cod[t] not in flagged:
            return ("class member with empty-covered domain and uncovered codomain", t)
    return None


def check_stable_class(cat, tclass, empty_covered=(), record_squares=False):
    T = frozenset(tclass)
    flagged = frozenset(empty_covered)
    rep = AxiomReport()
    missing = [cat.identity[o] for o in cat.objects if cat.identity[o] not in T]
    rep.holds["ax1"] = not missing
    if missing:
        rep.witnesses["ax1"] = missing[0]
    bad = None
    for f in cat.sort_morphisms(T):
        for g in cat.out_of(cat.cod[f]):
            if g in T and cat.compose(g, f) not in T:
                bad = (g, f)
                break
        if bad:
            break
    rep.holds["ax2"] = bad is None
    if bad:
        rep.witnesses["ax2"] = bad
    bad = None
    for t in cat.sort_morphisms(T):
        for g in cat.into(cat.cod[t]):
            sq = stability_squares(cat, T, t, g)
            if not sq:
                bad = (t, g)
                break
            if record_squares:
                rep.squares[(t, g)] = sq[0]
        if bad:
            break
    rep.holds["ax3"] = bad is None
    if bad:
        rep.witnesses["ax3"] = bad
    bad = None
    for f in cat.morphisms:
        if f not in T and any(cat.compose(f, g) in T for g in cat.into(cat.dom[f])):
            bad = f
            break
    rep.holds["ax4"] = bad is None
    if bad:
        rep.witnesses["ax4"] = bad
    issue = _flag_issues(cat, T, flagged)
    rep.holds["flags"] = issue is None
    if issue:
        rep.witnesses["flags"] = issue
    return rep


def _fam(cat, members):
    return tuple(cat.sort_morphisms(set(members)))


def check_stable_family_class(cat, families, cap=200_000):
    """Axioms for a class of finite families, given as ``{(cod, tuple), ...}``.

    Axioms 2′, 4′ and 5′ quantify over many combinations; when a combination
    count exceeds `cap` the axiom is reported as inconclusive (None).
    """
    fams = {(c, _fam(cat, m)) for c, m in families}
    over = {o: sorted((m for c, m in fams if c == o), key=lambda m: (len(m), [cat.mor_index(x) for x in m]))
            for o in cat.objects}
    rep = AxiomReport()
    missing = [o for o in cat.objects if (o, (cat.identity[o],)) not in fams]
    rep.holds["ax1'"] = not missing
    if missing:
        rep.witnesses["ax1'"] = missing[0]

    # 2′: multicomposition
    bad, inconclusive = None, False
    for c in cat.objects:
        for F in over[c]:
            choices = [over[cat.dom[f]] for f in F]
            n = 1
            for ch in choices:
                n *= len(ch)
            if n > cap:
                inconclusive = True
                continue
            for pick in product(*choices):
                comp = {(cat.compose(f, h)) for f, G in zip(F, pick) for h in G}
                if (c, _fam(cat, comp)) not in fams:
                    bad = (F, pick)
                    break
            if bad:
                break
        if bad:
            break
    rep.holds["ax2'"] = False if bad else (None if inconclusive else True)
    if bad:
        rep.witnesses["ax2'"] = bad

    # 3′: pulling back along any morphism
    bad = None
    for c in cat.objects:
        for F in over[c]:
            S = generated_sieve(cat, F, c)
            for g in cat.into(c):
                P = pullback_sieve(cat, S, g)
                if not any(set(H) <= P.arrows for H in over[cat.dom[g]]):
                    bad = (F, g)
                    break
            if bad:
                break
        if bad:
            break
    rep.holds["ax3'"] = bad is None
    if bad:
        rep.witnesses["ax3'"] = bad

    # 4′ and 5′: over all finite families (subsets of the arrows into c)
    bad4 = bad5 = None
    inconclusive = False
    for c in cat.objects:
        arrows = cat.into(c)
        if 2 ** len(arrows) > cap:
            inconclusive = True
            continue
        for r in range(len(arrows) + 1):
            for sub in combinations(arrows, r):
                key = (c, _fam(cat, sub))
                if key in fams:
                    continue
                S = generated_sieve(cat, sub, c)
                if bad4 is None and any(set(G) <= S.arrows for G in over[c]):
                    bad4 = sub
                if bad5 is None and any(set(G) <= set(sub) for G in over[c]):
                    bad5 = sub
    for name, bad in (("ax4'", bad4), ("ax5'", bad5)):
        rep.holds[name] = False if bad is not None else (None if inconclusive else True)
        if bad is not None:
            rep.witnesses[name] = bad
    return rep


# ---------------------------------------------------------------------------
# sites

class Site:
    """Common interface; subclasses provide `generating_families`."""

    cat: FiniteCategory
    empty_covered: frozenset

    def generating_families(self, c):
        raise NotImplementedError

    def generating_sieves(self, c):
        key = ("gensieves", c)
        if key not in self._cache:
            self._cache[key] = [generated_sieve(self.cat, F, c) for F in self.generating_families(c)]
        return self._cache[key]

    def is_covering(self, S):
        if S.cod in self.empty_covered:
            return True
        return any(G.arrows <= S.arrows for G in self.generating_sieves(S.cod))

    def minimal_covering_sieve(self, c):
        key = ("mincover", c)
        if key not in self._cache:
            sieves = self.generating_sieves(c)
            arrows = frozenset(self.cat.into(c))
            for G in sieves:
                arrows &= G.arrows
            if c in self.empty_covered:
                arrows = frozenset()
            M = Sieve(c, arrows)
            if not self.is_covering(M):
                raise SiteError(f"covering sieves on {c!r} are not closed under intersection")
            self._cache[key] = M
        return self._cache[key]

    def covering_sieves(self, c):
        return [S for S in all_sieves(self.cat, c) if self.is_covering(S)]

    def locally_equal(self, h, k):
        """h ≡ k: the sieve of morphisms equalizing them covers."""
        cat = self.cat
        d = cat.dom[h]
        S = Sieve(d, frozenset(u for u in cat.into(d) if cat.compose(h, u) == cat.compose(k, u)))
        return self.is_covering(S)

    def check_topology(self):
        """Exhaustive check of the Grothendieck topology axioms; returns the
        first violation or None."""
        cat = self.cat
        sieves = {c: all_sieves(cat, c) for c in cat.objects}
        covers = {c: [S for S in sieves[c] if self.is_covering(S)] for c in cat.objects}
        for c in cat.objects:
            if not self.is_covering(maximal_sieve(cat, c)):
                return ("maximality", c)
            for S in covers[c]:
                for f in cat.into(c):
                    if not self.is_covering(pullback_sieve(cat, S, f)):
                        return ("stability", S, f)
            for S in covers[c]:
                for R in sieves[c]:
                    if self.is_covering(R):
                        continue
                    if all(self.is_covering(pullback_sieve(cat, R, f)) for f in S.arrows):
                        return ("transitivity", S, R)
        return None


class PrincipalSite(Site):
    """Site whose covers contain a member of a stable class of morphisms."""

    kind = "principal"

    def __init__(self, cat, tclass, empty_covered=(), check=True):
        self.cat = cat
        self.tclass = frozenset(tclass)
        self.empty_covered = frozenset(empty_covered)
        self._cache = {}
        for m in self.tclass:
            if m not in cat.dom:
                raise SiteError(f"unknown morphism {m!r} in stable class")
        for o in self.empty_covered:
            if o not in cat._oi:
                raise SiteError(f"unknown object {o!r} in empty_covered")
        if check:
            rep = check_stable_class(cat, self.tclass, self.empty_covered)
            fail = rep.first_failure(["ax1", "ax2", "ax3", "flags"])
            if fail:
                raise SiteError(f"stable class violates {fail[0]}: {fail[1]}")

    @property
    def saturated(self):
        if "sat" not in self._cache:
            self._cache["sat"] = saturate(self.cat, self.tclass)
        return self._cache["sat"]

    def generating_families(self, c):
        fams = [(t,) for t in self.cat.sort_morphisms(t for t in self.tclass if self.cat.cod[t] == c)]
        if c in self.empty_covered:
            fams.append(())
        return fams

    def arch_families(self, c):
        """Left-leg families used to enumerate arches: saturated singletons."""
        fams = [(t,) for t in self.cat.sort_morphisms(t for t in self.saturated if self.cat.cod[t] == c)]
        if c in self.empty_covered:
            fams.append(())
        return fams

    def families(self):
        return {(c, F) for c in self.cat.objects for F in self.generating_families(c)}


class FGSite(Site):
    """Site whose covers contain a family from a stable class of finite families.

    `families` is an iterable of ``(cod, members)``; objects listed in
    `empty_covered` carry the empty family.
    """

    kind = "fg"

    def __init__(self, cat, families, empty_covered=(), check=True):
        self.cat = cat
        fams = set()
        for c, members in families:
            if c not in cat._oi:
                raise SiteError(f"unknown object {c!r} in family")
            for m in members:
                if m not in cat.dom:
                    raise SiteError(f"unknown morphism {m!r} in family")
                if cat.cod[m] != c:
                    raise SiteError(f"family member {m!r} does not land in {c!r}")
            fams.add((c, _fam(cat, members)))
        flagged = set(empty_covered) | {c for c, m in fams if not m}
        for o in flagged:
            if o not in cat._oi:
                raise SiteError(f"unknown object {o!r} in empty_covered")
            fams.add((o, ()))
        self.family_class = frozenset(fams)
        self.empty_covered = frozenset(flagged)
        self._cache = {}
        if check:
            rep = check_stable_family_class(cat, self.family_class)
            fail = rep.first_failure(["ax1'", "ax2'", "ax3'"])
            if fail:
                raise SiteError(f"family class violates {fail[0]}: {fail[1]}")
            issue = _flag_issues(cat, (), self.empty_covered)
            if issue:
                raise SiteError(f"empty covers not stable: {issue}")

    def generating_families(self, c):
        fams = [m for o, m in self.family_class if o == c]
        return sorted(fams, key=lambda m: (len(m), [self.cat.mor_index(x) for x in m]))

    def arch_families(self, c):
        return self.generating_families(c)

    def families(self):
        return set(self.family_class)


# ---------------------------------------------------------------------------
# standard sites on a category

def trivial_site(cat):
    return PrincipalSite(cat, [cat.identity[o] for o in cat.objects])


def reductive_site(cat, check=True):
    """Principal site generated by the strict epimorphisms."""
    return PrincipalSite(cat, strict_epis(cat), check=check)


def augmented_reductive_site(cat, check=True):
    """Strict epimorphisms, plus the empty cover on initial objects."""
    flagged = [o for o in cat.objects if is_initial(cat, o)]
    return PrincipalSite(cat, strict_epis(cat), flagged, check=check)


def strictly_epic_families(cat, c, cap=1 << 12):
    arrows = cat.into(c)
    if 2 ** len(arrows) > cap:
        return None
    out = []
    for r in range(len(arrows) + 1):
        for sub in combinations(arrows, r):
            if is_strictly_epic_family(cat, sub, c):
                out.append(sub)
    return out


def coalescent_site(cat, check=True):
    fams = []
    for c in cat.objects:
        fs = strictly_epic_families(cat, c)
        if fs is None:
            raise SiteError(f"too many candidate families over {c!r}")
        fams.extend((c, f) for f in fs)
    return FGSite(cat, fams, check=check)


# ---------------------------------------------------------------------------
# canonical congruence

@dataclass
class Congruence:
    classes: dict           # morphism -> representative
    quotient: Site
    functor: Functor


def canonical_congruence(site):
    """Identify parallel morphisms that are locally equal.

    Returns the class map, the quotient site (generated by the images of the
    generating class) and the quotient functor.
    """
    cat = site.cat
    uf = UnionFind(cat.morphisms)
    for a in cat.objects:
        for b in cat.objects:
            hs = cat.hom(a, b)
            for i in range(len(hs)):
                for j in range(i + 1, len(hs)):
                    if site.locally_equal(hs[i], hs[j]):
                        uf.union(hs[i], hs[j])
    rep = {}
    for grp in uf.groups(cat.morphisms):
        for m in grp:
            rep[m] = grp[0]
    reps = [m for m in cat.morphisms if rep[m] == m]
    comp = {}
    for g, f, gf in cat.composition_table():
        key = (rep[g], rep[f])
        if comp.setdefault(key, rep[gf]) != rep[gf]:
            raise SiteError("local equality is not a congruence")
    Q = FiniteCategory(cat.objects, [(m, cat.dom[m], cat.cod[m]) for m in reps],
                       {o: rep[cat.identity[o]] for o in cat.objects}, comp)
    if isinstance(site, PrincipalSite):
        qsite = PrincipalSite(Q, {rep[t] for t in site.tclass}, site.empty_covered)
    else:
        qsite = FGSite(Q, [(c, [rep[m] for m in F]) for c, F in site.family_class], site.empty_covered)
    F = Functor(cat, Q, {o: o for o in cat.objects}, rep)
    return Congruence(rep, qsite, F)


def is_subcanonical(site):
    """Every generating cover is strictly epic (representables are sheaves)."""
    cat = site.cat
    if isinstance(site, PrincipalSite):
        if not all(is_strict_epi(cat, t) for t in site.tclass):
            return False
        return all(is_initial(cat, o) for o in site.empty_covered)
    return all(is_strictly_epic_family(cat, F, c) for c, F in site.family_class)


# ---------------------------------------------------------------------------
# morphisms and comorphisms of sites

@dataclass
class SiteMorphismReport:
    conditions: dict        # condition number -> bool
    witness: object = None  # (condition, data) for the first failure

    @property
    def ok(self):
        return all(self.conditions.values())


def _image_sieve_covers(tgt, F, family, c):
    return tgt.is_covering(generated_sieve(tgt.cat, [F.mor[f] for f in family], F.obj[c]))


def is_morphism_of_sites(F, src, tgt):
    """Check the four conditions for a functor F: src.cat → tgt.cat."""
    issues = check_functor(F)
    if issues:
        raise CategoryError("not a functor: " + issues[0], issues)
    C, D = src.cat, tgt.cat
    conds, witness = {}, None

    def fail(n, w):
        nonlocal witness
        conds[n] = False
        if witness is None:
            witness = (n, w)

    # 1: covers go to covers
    conds[1] = True
    for c in C.objects:
        for fam in src.generating_families(c):
            if not _image_sieve_covers(tgt, F, fam, c):
                fail(1, (c, fam))
                break
        if conds[1] is False:
            break
    # 2: every object is covered by objects mapping into the image
    conds[2] = True
    images = sorted(set(F.obj.values()), key=D.obj_index)
    for d in D.objects:
        S = Sieve(d, frozenset(g for g in D.into(d)
                               if any(D.hom(D.dom[g], x) for x in images)))
        if not tgt.is_covering(S):
            fail(2, d)
            break
    # 3: spans into images factor locally through images of spans
    conds[3] = True
    for c1 in C.objects:
        for c2 in C.objects:
            spans = [(cp, l1, l2) for cp in C.objects
                     for l1 in C.hom(cp, c1) for l2 in C.hom(cp, c2)]
            for d in D.objects:
                for m1 in D.hom(d, F.obj[c1]):
                    for m2 in D.hom(d, F.obj[c2]):
                        good = set()
                        for g in D.into(d):
                            a, b = D.compose(m1, g), D.compose(m2, g)
                            if any(D.compose(F.mor[l1], h) == a and D.compose(F.mor[l2], h) == b
                                   for cp, l1, l2 in spans for h in D.hom(D.dom[g], F.obj[cp])):
                                good.add(g)
                        if not tgt.is_covering(Sieve(d, frozenset(good))):
                            if conds[3]:
                                fail(3, (c1, c2, m1, m2))
                            break
    # 4: parallel pairs equalized after F are locally equalized before
    conds[4] = True
    for c1 in C.objects:
        for c2 in C.objects:
            hs = C.hom(c1, c2)
            for i in range(len(hs)):
                for j in range(i + 1, len(hs)):
                    f1, f2 = hs[i], hs[j]
                    eqs = [l for l in C.into(c1) if C.compose(f1, l) == C.compose(f2, l)]
                    for d in D.objects:
                        for lp in D.hom(d, F.obj[c1]):
                            if D.compose(F.mor[f1], lp) != D.compose(F.mor[f2], lp):
                                continue
                            good = frozenset(
                                g for g in D.into(d)
                                if any(D.compose(F.mor[l], h) == D.compose(lp, g)
                                       for l in eqs for h in D.hom(D.dom[g], F.obj[C.dom[l]])))
                            if not tgt.is_covering(Sieve(d, good)) and conds[4]:
                                fail(4, (f1, f2, lp))
    return SiteMorphismReport(conds, witness)


def is_comorphism_of_sites(F, src, tgt):
    """Covering sieves on F(c) contain the image of a covering sieve on c.

    Returns (ok, witness) where the witness is the first object whose
    minimal cover fails to lift.
    """
    C, D = src.cat, tgt.cat
    for c in C.objects:
        M = tgt.minimal_covering_sieve(F.obj[c])
        lifted = Sieve(c, frozenset(f for f in C.into(c) if F.mor[f] in M.arrows))
        if not src.is_covering(lifted):
            return False, (c, M)
    return True, None
