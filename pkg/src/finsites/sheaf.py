"""Finite presheaves, sheafification and the supercompact objects of a site.

Carriers are ``range(n)``; `labels` records what each element is (a morphism
name for representables, a tuple of component indices for elements built by
the plus construction).  Restriction along f: D → C is the tuple
``action[f]`` mapping elements over C to elements over D.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .fincat import CategoryError, FiniteCategory, under_comma_components
from .site import Sieve, generated_sieve
from .unionfind import UnionFind


class FinPresheaf:
    def __init__(self, cat, sizes, action, labels=None, check=True):
        self.cat = cat
        self.sizes = {o: int(sizes[o]) for o in cat.objects}
        self.action = {f: tuple(action[f]) for f in cat.morphisms}
        if labels is None:
            labels = {o: tuple(range(self.sizes[o])) for o in cat.objects}
        self.labels = {o: tuple(labels[o]) for o in cat.objects}
        self._index = None
        if check:
            problems = presheaf_issues(self)
            if problems:
                raise CategoryError("invalid presheaf: " + problems[0], problems)

    def __repr__(self):
        return "FinPresheaf(" + ", ".join(f"{o}:{self.sizes[o]}" for o in self.cat.objects) + ")"

    def index(self, o, label):
        if self._index is None:
            self._index = {c: {l: i for i, l in enumerate(self.labels[c])} for c in self.cat.objects}
        return self._index[o][label]

    def restrict(self, f, x):
        return self.action[f][x]

    def signature(self):
        """Isomorphism invariant."""
        cat = self.cat
        return (tuple(self.sizes[o] for o in cat.objects),
                tuple(len(set(self.action[f])) for f in cat.morphisms))

    def is_subterminal(self):
        return all(n <= 1 for n in self.sizes.values())


def presheaf_issues(F):
    cat, out = F.cat, []
    for f in cat.morphisms:
        a = F.action[f]
        if len(a) != F.sizes[cat.cod[f]] or any(not 0 <= v < F.sizes[cat.dom[f]] for v in a):
            out.append(f"action of {f!r} has the wrong shape")
    if out:
        return out
    for o in cat.objects:
        if F.action[cat.identity[o]] != tuple(range(F.sizes[o])):
            out.append(f"identity of {o!r} does not act trivially")
    for g, f, gf in cat.composition_table():
        if tuple(F.action[f][F.action[g][x]] for x in range(F.sizes[cat.cod[g]])) != F.action[gf]:
            out.append(f"action not functorial at ({g}, {f})")
    return out


@dataclass(frozen=True, eq=False)
class NatTransformation:
    source: FinPresheaf
    target: FinPresheaf
    components: tuple  # per object in category order, a tuple of target indices

    def at(self, o):
        return self.components[self.source.cat.obj_index(o)]

    def key(self):
        return self.components

    def __eq__(self, other):
        return isinstance(other, NatTransformation) and self.components == other.components

    def __hash__(self):
        return hash(self.components)


def compose_nt(beta, alpha):
    """β∘α."""
    return NatTransformation(alpha.source, beta.target,
                             tuple(tuple(b[x] for x in a) for a, b in zip(alpha.components, beta.components)))


def identity_nt(X):
    return NatTransformation(X, X, tuple(tuple(range(X.sizes[o])) for o in X.cat.objects))


def is_natural(alpha):
    X, Y, cat = alpha.source, alpha.target, alpha.source.cat
    for f in cat.morphisms:
        c, d = cat.cod[f], cat.dom[f]
        ac, ad = alpha.at(c), alpha.at(d)
        for x in range(X.sizes[c]):
            if ad[X.action[f][x]] != Y.action[f][ac[x]]:
                return False
    return True


def nat_transformations(X, Y, injective=False, first_only=False):
    """Every natural transformation X → Y (optionally only injective ones)."""
    cat = X.cat
    objs = cat.objects
    slots = [(o, x) for o in objs for x in range(X.sizes[o])]
    out = []

    def propagate(comp, used, o, x, y):
        stack = [(o, x, y)]
        while stack:
            o, x, y = stack.pop()
            cur = comp[o][x]
            if cur >= 0:
                if cur != y:
                    return False
                continue
            if injective:
                if y in used[o]:
                    return False
                used[o].add(y)
            comp[o][x] = y
            for f in cat.into(o):
                stack.append((cat.dom[f], X.action[f][x], Y.action[f][y]))
        return True

    def rec(k, comp, used):
        if first_only and out:
            return
        while k < len(slots) and comp[slots[k][0]][slots[k][1]] >= 0:
            k += 1
        if k == len(slots):
            out.append(NatTransformation(X, Y, tuple(tuple(comp[o]) for o in objs)))
            return
        o, x = slots[k]
        for y in range(Y.sizes[o]):
            c2 = {p: list(v) for p, v in comp.items()}
            u2 = {p: set(v) for p, v in used.items()}
            if propagate(c2, u2, o, x, y):
                rec(k + 1, c2, u2)

    rec(0, {o: [-1] * X.sizes[o] for o in objs}, {o: set() for o in objs})
    return out


def find_iso(X, Y):
    if X.signature() != Y.signature():
        return None
    isos = nat_transformations(X, Y, injective=True, first_only=True)
    return isos[0] if isos else None


def is_iso_nt(alpha):
    return all(len(set(c)) == len(c) == alpha.target.sizes[o]
               for o, c in zip(alpha.source.cat.objects, alpha.components))


# ---------------------------------------------------------------------------
# representables and the plus construction

def yoneda(cat, A):
    sizes, labels = {}, {}
    for c in cat.objects:
        labels[c] = cat.hom(c, A)
        sizes[c] = len(labels[c])
    pos = {c: {m: i for i, m in enumerate(labels[c])} for c in cat.objects}
    action = {}
    for f in cat.morphisms:
        d, c = cat.dom[f], cat.cod[f]
        action[f] = tuple(pos[d][cat.compose(m, f)] for m in labels[c])
    return FinPresheaf(cat, sizes, action, labels, check=False)


def yoneda_map(cat, f):
    """y(f): y(dom f) → y(cod f), postcomposition."""
    X, Y = yoneda(cat, cat.dom[f]), yoneda(cat, cat.cod[f])
    comps = tuple(tuple(Y.index(c, cat.compose(f, m)) for m in X.labels[c]) for c in cat.objects)
    return NatTransformation(X, Y, comps)


def matching_families(cat, F, S):
    """Matching families for F on sieve S, as tuples aligned with S.sorted(cat)."""
    arrows = S.sorted(cat)
    pos = {g: i for i, g in enumerate(arrows)}
    down = {g: [(h, cat.compose(g, h)) for h in cat.into(cat.dom[g])] for g in arrows}
    order = sorted(arrows, key=lambda g: (-len(down[g]), cat.mor_index(g)))
    out = []

    def assign(vals, g, x):
        stack = [(g, x)]
        while stack:
            g, x = stack.pop()
            cur = vals[pos[g]]
            if cur is not None:
                if cur != x:
                    return False
                continue
            vals[pos[g]] = x
            for h, gh in down[g]:
                stack.append((gh, F.action[h][x]))
        return True

    def rec(k, vals):
        while k < len(order) and vals[pos[order[k]]] is not None:
            k += 1
        if k == len(order):
            out.append(tuple(vals))
            return
        g = order[k]
        for x in range(F.sizes[cat.dom[g]]):
            v2 = list(vals)
            if assign(v2, g, x):
                rec(k + 1, v2)

    rec(0, [None] * len(arrows))
    out.sort()
    return out


def is_sheaf_for(F, S):
    """Restriction F(c) → Match(S, F) is bijective."""
    cat = F.cat
    arrows = S.sorted(cat)
    fams = matching_families(cat, F, S)
    restricted = {tuple(F.action[g][x] for g in arrows) for x in range(F.sizes[S.cod])}
    return len(restricted) == F.sizes[S.cod] == len(fams)


def is_sheaf(site, F):
    """Sheaf condition on every generating cover (and empty covers)."""
    for c in site.cat.objects:
        for S in site.generating_sieves(c):
            if not is_sheaf_for(F, S):
                return False
        if c in site.empty_covered and F.sizes[c] != 1:
            return False
    return True


def plus(site, F):
    """(F⁺, unit F → F⁺) computed on the minimal covering sieves."""
    cat = site.cat
    M = {c: site.minimal_covering_sieve(c) for c in cat.objects}
    arrows = {c: M[c].sorted(cat) for c in cat.objects}
    pos = {c: {g: i for i, g in enumerate(arrows[c])} for c in cat.objects}
    labels = {c: matching_families(cat, F, M[c]) for c in cat.objects}
    index = {c: {x: i for i, x in enumerate(labels[c])} for c in cat.objects}
    action = {}
    for f in cat.morphisms:
        d, c = cat.dom[f], cat.cod[f]
        fg = [pos[c][cat.compose(f, g)] for g in arrows[d]]
        action[f] = tuple(index[d][tuple(x[i] for i in fg)] for x in labels[c])
    Fp = FinPresheaf(cat, {c: len(labels[c]) for c in cat.objects}, action, labels, check=False)
    unit = tuple(tuple(index[c][tuple(F.action[g][x] for g in arrows[c])] for x in range(F.sizes[c]))
                 for c in cat.objects)
    return Fp, NatTransformation(F, Fp, unit)


def plus_map(site, alpha, Xp, Yp):
    """α⁺: X⁺ → Y⁺ for α: X → Y."""
    cat = site.cat
    comps = []
    for c in cat.objects:
        arrows = site.minimal_covering_sieve(c).sorted(cat)
        row = []
        for fam in Xp.labels[c]:
            img = tuple(alpha.at(cat.dom[g])[v] for g, v in zip(arrows, fam))
            row.append(Yp.index(c, img))
        comps.append(tuple(row))
    return NatTransformation(Xp, Yp, tuple(comps))


@dataclass
class Sheafified:
    presheaf: FinPresheaf       # the input
    half: FinPresheaf           # after one plus
    sheaf: FinPresheaf          # after two
    unit: NatTransformation     # input → sheaf


def sheafify_full(site, F):
    P1, u1 = plus(site, F)
    P2, u2 = plus(site, P1)
    return Sheafified(F, P1, P2, compose_nt(u2, u1))


def sheafify(site, F):
    s = sheafify_full(site, F)
    return s.sheaf, s.unit


def sheafify_map(site, alpha, sx, sy):
    """Induced map between sheafifications (given as `Sheafified` records)."""
    a1 = plus_map(site, alpha, sx.half, sy.half)
    return plus_map(site, a1, sx.sheaf, sy.sheaf)


def _site_cache(site):
    return site._cache.setdefault("sheaf", {})


def ell_full(site, A):
    cache = _site_cache(site)
    key = ("ell", A)
    if key not in cache:
        cache[key] = sheafify_full(site, yoneda(site.cat, A))
    return cache[key]


def ell(site, A):
    """ℓ(A) with its unit y(A) → ℓ(A)."""
    s = ell_full(site, A)
    return s.sheaf, s.unit


def ell_element(site, A, m):
    """The element of ℓ(A) over dom m determined by m: dom m → A."""
    s = ell_full(site, A)
    c = site.cat.dom[m]
    return s.unit.at(c)[s.presheaf.index(c, m)]


def ell_map(site, f):
    cache = _site_cache(site)
    key = ("ellmap", f)
    if key not in cache:
        cat = site.cat
        cache[key] = sheafify_map(site, yoneda_map(cat, f), ell_full(site, cat.dom[f]),
                                  ell_full(site, cat.cod[f]))
    return cache[key]


def hom_sheaves(site, A, B):
    """Hom(ℓA, ℓB) as a list of natural transformations."""
    cache = _site_cache(site)
    key = ("homs", A, B)
    if key not in cache:
        cache[key] = nat_transformations(ell(site, A)[0], ell(site, B)[0])
    return cache[key]


# ---------------------------------------------------------------------------
# subobjects

def _freeze(sets, cat):
    return tuple(frozenset(sets[o]) for o in cat.objects)


def generated_subpresheaf(X, elements):
    cat = X.cat
    sets = {o: set() for o in cat.objects}
    stack = list(elements)
    while stack:
        o, x = stack.pop()
        if x in sets[o]:
            continue
        sets[o].add(x)
        for f in cat.into(o):
            stack.append((cat.dom[f], X.action[f][x]))
    return _freeze(sets, cat)


def closure(site, X, U):
    """Smallest closed subpresheaf containing U."""
    cat = X.cat
    sets = {o: set(U[i]) for i, o in enumerate(cat.objects)}
    changed = True
    while changed:
        changed = False
        for o in cat.objects:
            for x in range(X.sizes[o]):
                if x in sets[o]:
                    continue
                S = Sieve(o, frozenset(f for f in cat.into(o) if X.action[f][x] in sets[cat.dom[f]]))
                if site.is_covering(S):
                    sets[o].add(x)
                    changed = True
    return _freeze(sets, cat)


def top_subobject(X):
    return tuple(frozenset(range(X.sizes[o])) for o in X.cat.objects)


def union_subobjects(cat, Us):
    return tuple(frozenset().union(*[U[i] for U in Us]) for i in range(len(cat.objects)))


def subobject_lattice(site, X):
    """Closed subpresheaves of X (subsheaves when X is a sheaf)."""
    cat = X.cat
    gens = [closure(site, X, generated_subpresheaf(X, [(o, x)]))
            for o in cat.objects for x in range(X.sizes[o])]
    bottom = closure(site, X, tuple(frozenset() for _ in cat.objects))
    seen = {bottom}
    frontier = [bottom]
    while frontier:
        nxt = []
        for U in frontier:
            for G in gens:
                V = closure(site, X, union_subobjects(cat, [U, G]))
                if V not in seen:
                    seen.add(V)
                    nxt.append(V)
        frontier = nxt
    return sorted(seen, key=lambda U: (sum(len(s) for s in U), [sorted(s) for s in U]))


def join_of_subsheaves(site, X, Us):
    return closure(site, X, union_subobjects(X.cat, list(Us)))


def is_initial_sheaf(site, X):
    return closure(site, X, tuple(frozenset() for _ in X.cat.objects)) == top_subobject(X)


def is_supercompact_object(site, X):
    """Non-initial, and the proper subsheaves do not jointly cover."""
    top = top_subobject(X)
    lattice = subobject_lattice(site, X)
    if lattice[0] == top:
        return False
    proper = [U for U in lattice if U != top]
    return join_of_subsheaves(site, X, proper) != top


def image(alpha):
    return tuple(frozenset(c) for c in alpha.components)


def is_jointly_epic(site, maps, X):
    """Sheaf maps into X whose images' closure is all of X."""
    return join_of_subsheaves(site, X, [image(a) for a in maps]) == top_subobject(X)


# ---------------------------------------------------------------------------
# quotients

def _congruence_key(uf, X):
    cat = X.cat
    return tuple(tuple(uf.find((o, x)) for x in range(X.sizes[o])) for o in cat.objects)


def _canonical(key, X):
    out = []
    for o, row in zip(X.cat.objects, key):
        first = {}
        out.append(tuple(first.setdefault(r, len(first)) for r in row))
    return tuple(out)


def _merge(X, classes, o, x, y):
    """Smallest congruence containing `classes` and (x, y) over o."""
    cat = X.cat
    uf = UnionFind()
    for i, c in enumerate(cat.objects):
        for e in range(X.sizes[c]):
            uf.add((c, e))
            uf.union((c, e), (c, classes[i].index(classes[i][e])))
    stack = [(o, x, y)]
    while stack:
        o, x, y = stack.pop()
        if uf.union((o, x), (o, y)):
            for f in cat.into(o):
                stack.append((cat.dom[f], X.action[f][x], X.action[f][y]))
    return _canonical(_congruence_key(uf, X), X)


def congruences(X):
    """Every congruence of the presheaf X, as per-object class labellings."""
    cat = X.cat
    start = tuple(tuple(range(X.sizes[o])) for o in cat.objects)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for E in frontier:
            for i, o in enumerate(cat.objects):
                row = E[i]
                for x in range(len(row)):
                    for y in range(x + 1, len(row)):
                        if row[x] != row[y]:
                            E2 = _merge(X, E, o, x, y)
                            if E2 not in seen:
                                seen.add(E2)
                                nxt.append(E2)
        frontier = nxt
    return sorted(seen, key=lambda E: (-sum(len(set(r)) for r in E), E))


def quotient_presheaf(X, E):
    """X/E with the quotient map."""
    cat = X.cat
    sizes = {o: len(set(E[i])) for i, o in enumerate(cat.objects)}
    action = {}
    for f in cat.morphisms:
        c, d = cat.obj_index(cat.cod[f]), cat.obj_index(cat.dom[f])
        rep = {}
        for x in range(X.sizes[cat.cod[f]]):
            rep.setdefault(E[c][x], x)
        action[f] = tuple(E[d][X.action[f][rep[k]]] for k in range(sizes[cat.cod[f]]))
    Q = FinPresheaf(cat, sizes, action, check=False)
    return Q, NatTransformation(X, Q, tuple(E))


def quotient_objects(site, X):
    """Sheaf quotients of X up to isomorphism, each with its epimorphism from X."""
    out = []
    for E in congruences(X):
        Q, q = quotient_presheaf(X, E)
        S, u = sheafify(site, Q)
        if any(find_iso(S, T) is not None for T, _ in out):
            continue
        out.append((S, compose_nt(u, q)))
    return out


def coproduct_presheaf(cat, parts):
    sizes = {o: sum(P.sizes[o] for P in parts) for o in cat.objects}
    action = {}
    for f in cat.morphisms:
        c, d = cat.cod[f], cat.dom[f]
        row, off_d = [], 0
        for P in parts:
            row.extend(off_d + v for v in P.action[f])
            off_d += P.sizes[d]
        action[f] = tuple(row)
    return FinPresheaf(cat, sizes, action, check=False)


def initial_sheaf(site):
    empty = FinPresheaf(site.cat, {o: 0 for o in site.cat.objects},
                        {f: () for f in site.cat.morphisms}, check=False)
    return sheafify(site, empty)[0]


# ---------------------------------------------------------------------------
# categories of (super)compact objects

@dataclass
class ObjectCategory:
    category: FiniteCategory
    sheaves: dict          # object name -> FinPresheaf
    maps: dict             # morphism name -> NatTransformation


def category_of_sheaves(named):
    """Full subcategory of sheaves on the given named objects."""
    names = list(named)
    ms, ident, maps, lookup = [], {}, {}, {}
    for a in names:
        for b in names:
            nts = nat_transformations(named[a], named[b])
            k = 0
            for nt in nts:
                if a == b and nt == identity_nt(named[a]):
                    name = f"id_{a}"
                    ident[a] = name
                else:
                    k += 1
                    name = f"{a}>{b}#{k}"
                ms.append((name, a, b))
                maps[name] = nt
                lookup[(a, b, nt.components)] = name
    comp = {}
    cod = {m: b for m, a, b in ms}
    dom = {m: a for m, a, b in ms}
    for f in maps:
        for g in maps:
            if dom[g] == cod[f]:
                h = compose_nt(maps[g], maps[f])
                comp[(g, f)] = lookup[(dom[f], cod[g], h.components)]
    cat = FiniteCategory(names, ms, ident, comp)
    return ObjectCategory(cat, dict(named), maps)


def supercompact_objects(site):
    """Non-initial quotients of the ℓ(C), deduplicated up to isomorphism.

    The representables themselves are named first, by their object."""
    named = {}
    reps = []
    for c in site.cat.objects:
        L = ell(site, c)[0]
        if is_initial_sheaf(site, L):
            continue
        reps.append((c, L))
        if not any(find_iso(L, T) is not None for T in named.values()):
            named[c] = L
    for c, L in reps:
        k = 0
        for S, _ in quotient_objects(site, L):
            if any(find_iso(S, T) is not None for T in named.values()):
                continue
            k += 1
            named[f"{c}/{k}"] = S
    return named


def supercompact_category(site):
    return category_of_sheaves(supercompact_objects(site))


def compact_objects_bounded(site, k):
    """Quotients of coproducts of at most k objects ℓ(C), up to isomorphism."""
    objs = site.cat.objects
    found = []
    for n in range(k + 1):
        for combo in combinations_with_replacement(objs, n):
            parts = [ell(site, c)[0] for c in combo]
            X = sheafify(site, coproduct_presheaf(site.cat, parts))[0]
            for S, _ in quotient_objects(site, X):
                if not any(find_iso(S, T) is not None for _, T in found):
                    found.append(("+".join(combo) or "0", S))
    return found


def subterminal_classes(site, objs):
    return [(n, S) for n, S in objs if S.is_subterminal()]


def compact_stabilization(site, k):
    """Whether raising the bound from k to k+1 adds no new subterminal object.

    Returns (stable, subterminal objects at bound k)."""
    a = subterminal_classes(site, compact_objects_bounded(site, k))
    b = subterminal_classes(site, compact_objects_bounded(site, k + 1))
    return len(a) == len(b), a


# ---------------------------------------------------------------------------
# colimit preservation

def _presheaf_colimit_map(site, D, cocone):
    """Presheaf colimit P of ℓ∘D and the comparison P → ℓ(vertex)."""
    cat, S = site.cat, D.source
    parts = {i: ell(site, D.obj[i])[0] for i in S.objects}
    uf = UnionFind()
    for c in cat.objects:
        for i in S.objects:
            for x in range(parts[i].sizes[c]):
                uf.add((c, i, x))
    for a in S.morphisms:
        if S.is_identity(a):
            continue
        i, j = S.dom[a], S.cod[a]
        la = ell_map(site, D.mor[a])
        for c in cat.objects:
            for x in range(parts[i].sizes[c]):
                uf.union((c, i, x), (c, j, la.at(c)[x]))
    legs = cocone.as_dict()
    lam = {i: ell_map(site, legs[i]) for i in S.objects}
    classes = {c: [] for c in cat.objects}
    cls_of = {}
    for c in cat.objects:
        seen = {}
        for i in S.objects:
            for x in range(parts[i].sizes[c]):
                r = uf.find((c, i, x))
                if r not in seen:
                    seen[r] = len(classes[c])
                    classes[c].append((i, x))
                cls_of[(c, i, x)] = seen[r]
    action = {}
    for f in cat.morphisms:
        d, c = cat.dom[f], cat.cod[f]
        action[f] = tuple(cls_of[(d, i, parts[i].action[f][x])] for i, x in classes[c])
    P = FinPresheaf(cat, {c: len(classes[c]) for c in cat.objects}, action, check=False)
    phi = {c: tuple(lam[i].at(c)[x] for i, x in classes[c]) for c in cat.objects}
    return P, phi


def preserves_funnel_colimit(site, D, cocone):
    """Whether ℓ sends the cocone to a colimit in sheaves.

    Decided by local bijectivity of the comparison map from the presheaf
    colimit of ℓ∘D to ℓ(vertex).
    """
    cat = site.cat
    P, phi = _presheaf_colimit_map(site, D, cocone)
    V = ell(site, cocone.vertex)[0]
    for c in cat.objects:
        for z in range(V.sizes[c]):
            S = Sieve(c, frozenset(f for f in cat.into(c) if V.action[f][z] in set(phi[cat.dom[f]])))
            if not site.is_covering(S):
                return False
        for p in range(P.sizes[c]):
            for q in range(p + 1, P.sizes[c]):
                if phi[c][p] != phi[c][q]:
                    continue
                S = Sieve(c, frozenset(f for f in cat.into(c) if P.action[f][p] == P.action[f][q]))
                if not site.is_covering(S):
                    return False
    return True


def check_colim_criteria(site, D, cocone):
    """Intrinsic criteria for ℓ to preserve the colimit of a (multi)funnel.

    (i) the legs generate a covering sieve; (ii) whenever two morphisms into
    the diagram are identified by the cocone, they become connected in the
    comma category after restricting along a covering sieve.  Returns
    ``(holds, failure)``.
    """
    cat, S = site.cat, D.source
    legs = cocone.as_dict()
    V = cocone.vertex
    if not site.is_covering(generated_sieve(cat, list(legs.values()), V)):
        return False, ("legs do not cover",)
    comps = {}

    def component(x):
        if x not in comps:
            idx = {}
            for n, comp in enumerate(under_comma_components(cat, x, D)):
                for node in comp:
                    idx[node] = n
            comps[x] = idx
        return comps[x]

    for c in cat.objects:
        nodes = [(i, m) for i in S.objects for m in cat.hom(c, D.obj[i])]
        for a in range(len(nodes)):
            for b in range(a + 1, len(nodes)):
                (i, g1), (j, g2) = nodes[a], nodes[b]
                if cat.compose(legs[i], g1) != cat.compose(legs[j], g2):
                    continue
                if component(c)[(i, g1)] == component(c)[(j, g2)]:
                    continue
                good = frozenset(t for t in cat.into(c)
                                 if component(cat.dom[t])[(i, cat.compose(g1, t))]
                                 == component(cat.dom[t])[(j, cat.compose(g2, t))])
                if not site.is_covering(Sieve(c, good)):
                    return False, ("not locally connected", c, (i, g1), (j, g2))
    return True, None
