"""Finite categories given by explicit composition tables.

Morphisms and objects are identified by strings.  Every enumeration in this
module follows declaration order (objects first by position, then morphisms
by position), which keeps all outputs deterministic.
"""

from dataclasses import dataclass, field
from itertools import product

from .unionfind import UnionFind


class CategoryError(ValueError):
    """Malformed categorical input."""

    def __init__(self, message, issues=()):
        super().__init__(message)
        self.issues = list(issues)


class FiniteCategory:
    """A finite category.

    `morphisms` is a sequence of ``(name, dom, cod)``; `identities` maps each
    object to its identity; `composition` maps ``(g, f)`` to ``g∘f`` for every
    composable pair.  Pairs involving an identity may be omitted and are
    filled in.  With ``check=True`` the category laws are verified and a
    `CategoryError` listing every problem is raised.
    """

    def __init__(self, objects, morphisms, identities, composition, check=True):
        self.objects = tuple(objects)
        self.morphisms = tuple(m for m, _, _ in morphisms)
        self.dom = {m: d for m, d, _ in morphisms}
        self.cod = {m: c for m, _, c in morphisms}
        self.identity = dict(identities)
        self._oi = {o: i for i, o in enumerate(self.objects)}
        self._mi = {m: i for i, m in enumerate(self.morphisms)}
        comp = {}
        for (g, f), h in dict(composition).items():
            comp[(g, f)] = h
        for m in self.morphisms:
            d, c = self.dom.get(m), self.cod.get(m)
            if d in self.identity:
                comp.setdefault((m, self.identity[d]), m)
            if c in self.identity:
                comp.setdefault((self.identity[c], m), m)
        self._comp = comp
        self._hom = {}
        self._into = {o: [] for o in self.objects}
        self._out = {o: [] for o in self.objects}
        for m in self.morphisms:
            d, c = self.dom[m], self.cod[m]
            self._hom.setdefault((d, c), []).append(m)
            if c in self._into:
                self._into[c].append(m)
            if d in self._out:
                self._out[d].append(m)
        self._hom = {k: tuple(v) for k, v in self._hom.items()}
        self._into = {k: tuple(v) for k, v in self._into.items()}
        self._out = {k: tuple(v) for k, v in self._out.items()}
        self._cache = {}
        if check:
            issues = validate(self)
            if issues:
                raise CategoryError("invalid category: " + issues[0], issues)

    # -- basic access -------------------------------------------------
    def __repr__(self):
        return f"FiniteCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def hom(self, a, b):
        return self._hom.get((a, b), ())

    def into(self, c):
        return self._into[c]

    def out_of(self, a):
        return self._out[a]

    def compose(self, *ms):
        """``compose(h, g, f)`` is h∘g∘f."""
        if not ms:
            raise ValueError("nothing to compose")
        acc = ms[-1]
        for g in reversed(ms[:-1]):
            try:
                acc = self._comp[(g, acc)]
            except KeyError:
                raise CategoryError(f"cannot compose {g} after {acc}") from None
        return acc

    def composable(self, g, f):
        return self.dom[g] == self.cod[f]

    def is_identity(self, m):
        return self.identity.get(self.dom[m]) == m

    def obj_index(self, o):
        return self._oi[o]

    def mor_index(self, m):
        return self._mi[m]

    def mor_key(self, m):
        return self._mi[m]

    def sort_morphisms(self, ms):
        return sorted(ms, key=self._mi.__getitem__)

    def composition_table(self):
        """All composable pairs with their composite, in declaration order."""
        out = []
        for f in self.morphisms:
            for g in self.out_of(self.cod[f]):
                out.append((g, f, self._comp[(g, f)]))
        return out

    def op(self):
        if "op" not in self._cache:
            comp = {(f, g): h for (g, f), h in self._comp.items()}
            self._cache["op"] = FiniteCategory(
                self.objects,
                [(m, self.cod[m], self.dom[m]) for m in self.morphisms],
                self.identity,
                comp,
                check=False,
            )
        return self._cache["op"]

    def full_subcategory(self, objs):
        keep = [o for o in self.objects if o in set(objs)]
        ks = set(keep)
        ms = [(m, self.dom[m], self.cod[m]) for m in self.morphisms
              if self.dom[m] in ks and self.cod[m] in ks]
        names = {m for m, _, _ in ms}
        comp = {k: v for k, v in self._comp.items() if k[0] in names and k[1] in names}
        return FiniteCategory(keep, ms, {o: self.identity[o] for o in keep}, comp, check=False)

    def memo(self, key, fn):
        """Per-instance cache for derived data; results must not be mutated."""
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = fn()
            return val

    def same_as(self, other):
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and self.dom == other.dom and self.cod == other.cod
                and self.identity == other.identity
                and all(other._comp.get(k) == v for k, v in self._comp.items())
                and len(self._comp) == len(other._comp))

    # -- constructors -------------------------------------------------
    @classmethod
    def from_preorder(cls, elements, leq, name=None):
        """Thin category of a preorder; `leq(x, y)` decides x ≤ y."""
        name = name or (lambda x, y: f"id_{x}" if x == y else f"{x}->{y}")
        els = list(elements)
        ms = [(name(x, y), x, y) for x in els for y in els if leq(x, y)]
        ident = {x: name(x, x) for x in els}
        comp = {}
        for x in els:
            for y in els:
                if not leq(x, y):
                    continue
                for z in els:
                    if leq(y, z):
                        comp[(name(y, z), name(x, y))] = name(x, z)
        return cls(els, ms, ident, comp, check=False)

    @classmethod
    def discrete(cls, objects):
        objs = list(objects)
        return cls(objs, [(f"id_{o}", o, o) for o in objs], {o: f"id_{o}" for o in objs}, {},
                   check=False)

    @classmethod
    def from_monoid(cls, elements, mult, unit, obj="*"):
        """One-object category; `mult(g, f)` is g∘f."""
        els = list(elements)
        comp = {(g, f): mult(g, f) for g in els for f in els}
        return cls([obj], [(e, obj, obj) for e in els], {obj: unit}, comp)


def validate(cat):
    """List every violation of the category laws (empty list when valid)."""
    issues = []
    objs = set(cat.objects)
    if len(objs) != len(cat.objects):
        issues.append("duplicate object id")
    if len(set(cat.morphisms)) != len(cat.morphisms):
        issues.append("duplicate morphism id")
    for m in cat.morphisms:
        for end, o in (("domain", cat.dom[m]), ("codomain", cat.cod[m])):
            if o not in objs:
                issues.append(f"dangling {end} {o!r} of morphism {m!r}")
    for o in cat.objects:
        i = cat.identity.get(o)
        if i is None:
            issues.append(f"missing identity for object {o!r}")
        elif i not in cat.dom:
            issues.append(f"dangling identity id {i!r} for object {o!r}")
        elif cat.dom[i] != o or cat.cod[i] != o:
            issues.append(f"identity {i!r} of {o!r} has wrong type")
    for o in cat.identity:
        if o not in objs:
            issues.append(f"identity given for unknown object {o!r}")
    if issues:
        return issues
    for (g, f), h in cat._comp.items():
        for m in (g, f, h):
            if m not in cat.dom:
                issues.append(f"dangling morphism id {m!r} in composition entry ({g}, {f})")
    if issues:
        return issues
    for (g, f), h in cat._comp.items():
        if cat.dom[g] != cat.cod[f]:
            issues.append(f"composite given for non-composable pair ({g}, {f})")
        elif cat.dom[h] != cat.dom[f] or cat.cod[h] != cat.cod[g]:
            issues.append(f"composite {h!r} at ({g}, {f}) has wrong type")
    for f in cat.morphisms:
        for g in cat.out_of(cat.cod[f]):
            if (g, f) not in cat._comp:
                issues.append(f"missing composite at ({g}, {f})")
    if issues:
        return issues
    for m in cat.morphisms:
        if cat._comp[(m, cat.identity[cat.dom[m]])] != m or cat._comp[(cat.identity[cat.cod[m]], m)] != m:
            issues.append(f"identity law fails for {m!r}")
    for f in cat.morphisms:
        for g in cat.out_of(cat.cod[f]):
            gf = cat._comp[(g, f)]
            for h in cat.out_of(cat.cod[g]):
                if cat._comp[(h, gf)] != cat._comp[(cat._comp[(h, g)], f)]:
                    issues.append(f"associativity fails at ({h}, {g}, {f})")
    return issues


# ---------------------------------------------------------------------------
# functors and diagrams

class Functor:
    """A functor between finite categories given on objects and morphisms."""

    def __init__(self, source, target, on_objects, on_morphisms):
        self.source = source
        self.target = target
        self.obj = dict(on_objects)
        self.mor = dict(on_morphisms)

    def __repr__(self):
        return f"Functor({self.obj})"

    def __call__(self, m):
        return self.mor[m]


Diagram = Functor


def check_functor(F):
    issues = []
    A, B = F.source, F.target
    for o in A.objects:
        if F.obj.get(o) not in B._oi:
            issues.append(f"object {o!r} not mapped to an object of the target")
    for m in A.morphisms:
        if F.mor.get(m) not in B._mi:
            issues.append(f"morphism {m!r} not mapped to a morphism of the target")
    if issues:
        return issues
    for m in A.morphisms:
        fm = F.mor[m]
        if B.dom[fm] != F.obj[A.dom[m]] or B.cod[fm] != F.obj[A.cod[m]]:
            issues.append(f"morphism {m!r} mapped with wrong type")
    for o in A.objects:
        if F.mor[A.identity[o]] != B.identity[F.obj[o]]:
            issues.append(f"identity of {o!r} not preserved")
    if issues:
        return issues
    for g, f, gf in A.composition_table():
        if F.mor[gf] != B.compose(F.mor[g], F.mor[f]):
            issues.append(f"composite ({g}, {f}) not preserved")
    return issues


def opposite_functor(F):
    return Functor(F.source.op(), F.target.op(), F.obj, F.mor)


def identity_functor(cat):
    return Functor(cat, cat, {o: o for o in cat.objects}, {m: m for m in cat.morphisms})


@dataclass(frozen=True)
class Cocone:
    vertex: str
    legs: tuple  # ((shape object, morphism), ...) in shape object order

    def leg(self, i):
        return dict(self.legs)[i]

    def as_dict(self):
        return dict(self.legs)


Cone = Cocone


def _shape_arrows(D):
    S = D.source
    return [(S.dom[a], S.cod[a], D.mor[a]) for a in S.morphisms if not S.is_identity(a)]


def cocones(cat, D, vertex=None):
    """Enumerate cocones under D, ordered by vertex then legs."""
    S = D.source
    order = list(S.objects)
    arrows = _shape_arrows(D)
    incoming = {i: [] for i in order}
    for src, dst, m in arrows:
        incoming[dst].append((src, m))
    # visit objects that receive many arrows first: their legs force others
    reach = {i: 0 for i in order}
    for src, dst, _ in arrows:
        reach[dst] += 1
    visit = sorted(order, key=lambda i: (-reach[i], S.obj_index(i)))
    vertices = cat.objects if vertex is None else (vertex,)
    for W in vertices:
        found = []

        def propagate(legs, i, leg):
            stack = [(i, leg)]
            while stack:
                j, l = stack.pop()
                cur = legs.get(j)
                if cur is not None:
                    if cur != l:
                        return False
                    continue
                legs[j] = l
                for src, m in incoming[j]:
                    stack.append((src, cat.compose(l, m)))
            for src, dst, m in arrows:
                if src in legs and dst in legs and cat.compose(legs[dst], m) != legs[src]:
                    return False
            return True

        def rec(k, legs):
            while k < len(visit) and visit[k] in legs:
                k += 1
            if k == len(visit):
                found.append(Cocone(W, tuple((i, legs[i]) for i in order)))
                return
            i = visit[k]
            for l in cat.hom(D.obj[i], W):
                new = dict(legs)
                if propagate(new, i, l):
                    rec(k + 1, new)

        rec(0, {})
        found.sort(key=lambda c: tuple(cat.mor_index(m) for _, m in c.legs))
        yield from found


def is_cocone(cat, D, cocone):
    legs = cocone.as_dict()
    for i in D.source.objects:
        l = legs.get(i)
        if l is None or cat.dom[l] != D.obj[i] or cat.cod[l] != cocone.vertex:
            return False
    return all(cat.compose(legs[dst], m) == legs[src] for src, dst, m in _shape_arrows(D))


def factorizations(cat, D, lam, mu):
    """Morphisms u with u∘λ_i = μ_i for every shape object i."""
    ll, ml = lam.as_dict(), mu.as_dict()
    return [u for u in cat.hom(lam.vertex, mu.vertex)
            if all(cat.compose(u, ll[i]) == ml[i] for i in D.source.objects)]


def is_colimit_cocone(cat, D, lam, all_cocones=None):
    if not is_cocone(cat, D, lam):
        return False
    cs = list(cocones(cat, D)) if all_cocones is None else all_cocones
    return all(len(factorizations(cat, D, lam, mu)) == 1 for mu in cs)


def colimit(cat, D):
    """Colimit cocone of D, or None.

    Among the (isomorphic) colimit cocones the one with least vertex, then
    lexicographically least legs, is returned.
    """
    cs = list(cocones(cat, D))
    for lam in cs:  # already in the required order
        if all(len(factorizations(cat, D, lam, mu)) == 1 for mu in cs):
            return lam
    return None


def limit(cat, D):
    """Limit cone of D (dual of `colimit`)."""
    return colimit(cat.op(), opposite_functor(D))


def is_limit_cone(cat, D, cone, all_cones=None):
    return is_colimit_cocone(cat.op(), opposite_functor(D), cone, all_cones)


# -- common diagram shapes ---------------------------------------------------

def pair_diagram(cat, tops, pairs):
    """Diagram with objects `tops` (weakly terminal) and one extra object per
    parallel pair (p, q), sent to the common domain, with arrows p and q.

    This is the normal form of a (multi)funneling diagram.
    """
    tops = list(tops)
    objs = [f"t{k}" for k in range(len(tops))]
    topidx = {}
    for k, t in enumerate(tops):
        topidx.setdefault(t, k)
    obj_map = {f"t{k}": t for k, t in enumerate(tops)}
    ms, mor_map, ident = [], {}, {}
    for k, t in enumerate(tops):
        ms.append((f"id_t{k}", f"t{k}", f"t{k}"))
        ident[f"t{k}"] = f"id_t{k}"
        mor_map[f"id_t{k}"] = cat.identity[t]
    for n, (p, q) in enumerate(pairs):
        o = f"r{n}"
        objs.append(o)
        obj_map[o] = cat.dom[p]
        ms.append((f"id_r{n}", o, o))
        ident[o] = f"id_r{n}"
        mor_map[f"id_r{n}"] = cat.identity[cat.dom[p]]
        for tag, m in (("p", p), ("q", q)):
            name = f"{tag}{n}"
            ms.append((name, o, f"t{topidx[cat.cod[m]]}"))
            mor_map[name] = m
    shape = FiniteCategory(objs, ms, ident, {}, check=False)
    return Diagram(shape, cat, obj_map, mor_map)


def funnel_diagram(cat, d0, pairs):
    return pair_diagram(cat, [d0], pairs)


def discrete_diagram(cat, objs):
    objs = list(objs)
    shape = FiniteCategory.discrete([f"x{k}" for k in range(len(objs))])
    return Diagram(shape, cat, {f"x{k}": o for k, o in enumerate(objs)},
                   {f"id_x{k}": cat.identity[o] for k, o in enumerate(objs)})


def cospan_diagram(cat, f, g):
    """Shape a → c ← b sent to f, g."""
    shape = FiniteCategory(
        ["a", "b", "c"],
        [("id_a", "a", "a"), ("id_b", "b", "b"), ("id_c", "c", "c"), ("f", "a", "c"), ("g", "b", "c")],
        {"a": "id_a", "b": "id_b", "c": "id_c"}, {}, check=False)
    return Diagram(shape, cat, {"a": cat.dom[f], "b": cat.dom[g], "c": cat.cod[f]},
                   {"id_a": cat.identity[cat.dom[f]], "id_b": cat.identity[cat.dom[g]],
                    "id_c": cat.identity[cat.cod[f]], "f": f, "g": g})


def parallel_diagram(cat, f, g):
    """Shape a ⇉ b sent to f, g."""
    shape = FiniteCategory(
        ["a", "b"], [("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b"), ("g", "a", "b")],
        {"a": "id_a", "b": "id_b"}, {}, check=False)
    return Diagram(shape, cat, {"a": cat.dom[f], "b": cat.cod[f]},
                   {"id_a": cat.identity[cat.dom[f]], "id_b": cat.identity[cat.cod[f]], "f": f, "g": g})


def joint_coequalizer(cat, d0, pairs):
    """Colimit of the funnel on `d0` with the given parallel pairs; None if absent."""
    return colimit(cat, funnel_diagram(cat, d0, pairs))


def coproduct(cat, objs):
    return colimit(cat, discrete_diagram(cat, objs))


def pullback(cat, f, g):
    return limit(cat, cospan_diagram(cat, f, g))


def equalizer(cat, f, g):
    return limit(cat, parallel_diagram(cat, f, g))


def under_comma_components(cat, x, D):
    """Connected components of the comma category (x ↓ D).

    Objects are pairs (shape object, m: x → D(shape object)).  Components are
    returned as lists ordered deterministically.
    """
    S = D.source
    nodes = [(i, m) for i in S.objects for m in cat.hom(x, D.obj[i])]
    uf = UnionFind(nodes)
    for a in S.morphisms:
        if S.is_identity(a):
            continue
        i = S.dom[a]
        for m in cat.hom(x, D.obj[i]):
            uf.union((i, m), (S.cod[a], cat.compose(D.mor[a], m)))
    return uf.groups(nodes)


def comma_connected(cat, D, x, node1, node2):
    if node1 == node2:
        return True
    for comp in under_comma_components(cat, x, D):
        if node1 in comp:
            return node2 in comp
    return False


# ---------------------------------------------------------------------------
# morphism properties

def is_mono(cat, m):
    d = cat.dom[m]
    for x in cat.objects:
        seen = set()
        for h in cat.hom(x, d):
            mh = cat.compose(m, h)
            if mh in seen:
                return False
            seen.add(mh)
    return True


def is_epi(cat, m):
    return is_mono(cat.op(), m)


def is_split_epi(cat, m):
    c = cat.cod[m]
    return any(cat.compose(m, s) == cat.identity[c] for s in cat.hom(c, cat.dom[m]))


def is_split_mono(cat, m):
    return is_split_epi(cat.op(), m)


def inverse(cat, m):
    d, c = cat.dom[m], cat.cod[m]
    for s in cat.hom(c, d):
        if cat.compose(m, s) == cat.identity[c] and cat.compose(s, m) == cat.identity[d]:
            return s
    return None


def is_iso(cat, m):
    return inverse(cat, m) is not None


def classify_morphism(cat, m):
    return {"mono": is_mono(cat, m), "epi": is_epi(cat, m),
            "splitEpi": is_split_epi(cat, m), "iso": is_iso(cat, m)}


def coequalized_pairs(cat, h):
    """Unordered distinct parallel pairs (p, q) into dom h with h∘p = h∘q."""
    d = cat.dom[h]
    out = []
    for x in cat.objects:
        hs = cat.hom(x, d)
        for a in range(len(hs)):
            for b in range(a + 1, len(hs)):
                if cat.compose(h, hs[a]) == cat.compose(h, hs[b]):
                    out.append((hs[a], hs[b]))
    return out


def parallel_pairs_into(cat, d0):
    """All unordered pairs of distinct morphisms into d0 sharing a domain."""
    out = []
    for x in cat.objects:
        hs = cat.hom(x, d0)
        for a in range(len(hs)):
            for b in range(a + 1, len(hs)):
                out.append((hs[a], hs[b]))
    return out


def is_strict_epi(cat, h):
    """Every k that coequalizes all pairs h coequalizes factors uniquely through h."""
    pairs = coequalized_pairs(cat, h)
    for k in cat.out_of(cat.dom[h]):
        if all(cat.compose(k, p) == cat.compose(k, q) for p, q in pairs):
            us = [u for u in cat.hom(cat.cod[h], cat.cod[k]) if cat.compose(u, h) == k]
            if len(us) != 1:
                return False
    return True


def strict_epis(cat):
    return cat.memo("strict_epis", lambda: frozenset(m for m in cat.morphisms if is_strict_epi(cat, m)))


def family_kernel(cat, family):
    """Spans (x, i, p, j, q) with f_i∘p = f_j∘q, p ≠ q or i ≠ j."""
    fam = list(family)
    out = []
    for i, fi in enumerate(fam):
        for j, fj in enumerate(fam):
            if j < i:
                continue
            for x in cat.objects:
                for p in cat.hom(x, cat.dom[fi]):
                    for q in cat.hom(x, cat.dom[fj]):
                        if (i, p) < (j, q) and cat.compose(fi, p) == cat.compose(fj, q):
                            out.append((i, p, j, q))
    return out


def is_strictly_epic_family(cat, family, cod):
    """Whether `family` (morphisms into `cod`) is a colimit cocone of its
    kernel diagram: compatible maps out of the domains factor uniquely."""
    fam = list(family)
    kernel = family_kernel(cat, fam)
    for E in cat.objects:
        for ks in product(*[cat.hom(cat.dom[f], E) for f in fam]):
            if all(cat.compose(ks[i], p) == cat.compose(ks[j], q) for i, p, j, q in kernel):
                us = [u for u in cat.hom(cod, E)
                      if all(cat.compose(u, f) == k for f, k in zip(fam, ks))]
                if len(us) != 1:
                    return False
    return True


# ---------------------------------------------------------------------------
# special objects

def is_initial(cat, o):
    return all(len(cat.hom(o, x)) == 1 for x in cat.objects)


def is_terminal(cat, o):
    return all(len(cat.hom(x, o)) == 1 for x in cat.objects)


def initial_objects(cat):
    return [o for o in cat.objects if is_initial(cat, o)]


def terminal_objects(cat):
    return [o for o in cat.objects if is_terminal(cat, o)]


def is_strict_initial(cat, o):
    return is_initial(cat, o) and all(is_iso(cat, m) for m in cat.into(o))


# ---------------------------------------------------------------------------
# equivalence search

def isomorphism_classes(cat):
    uf = UnionFind(cat.objects)
    for m in cat.morphisms:
        if cat.dom[m] != cat.cod[m] and is_iso(cat, m):
            uf.union(cat.dom[m], cat.cod[m])
    return uf.groups(cat.objects)


def skeleton(cat):
    reps = [cls[0] for cls in isomorphism_classes(cat)]
    return cat.full_subcategory(reps)


def _morphism_signature(cat, m):
    factor_count = sum(1 for g, f, h in cat.composition_table() if h == m
                       and not cat.is_identity(g) and not cat.is_identity(f))
    return (is_mono(cat, m), is_epi(cat, m), is_split_epi(cat, m), is_split_mono(cat, m),
            cat.dom[m] == cat.cod[m] and cat.compose(m, m) == m, factor_count)


def _object_signature(cat, o):
    return (len(cat.hom(o, o)),
            tuple(sorted(len(cat.hom(o, x)) for x in cat.objects)),
            tuple(sorted(len(cat.hom(x, o)) for x in cat.objects)))


def find_isomorphism(A, B):
    """An isomorphism of categories A → B as a Functor, or None."""
    if len(A.objects) != len(B.objects) or len(A.morphisms) != len(B.morphisms):
        return None
    osig_a = {o: _object_signature(A, o) for o in A.objects}
    osig_b = {o: _object_signature(B, o) for o in B.objects}
    if sorted(osig_a.values()) != sorted(osig_b.values()):
        return None
    msig_a = {m: _morphism_signature(A, m) for m in A.morphisms}
    msig_b = {m: _morphism_signature(B, m) for m in B.morphisms}
    if sorted(msig_a.values()) != sorted(msig_b.values()):
        return None

    def object_maps(k, sigma, used):
        if k == len(A.objects):
            yield dict(sigma)
            return
        a = A.objects[k]
        for b in B.objects:
            if b in used or osig_b[b] != osig_a[a]:
                continue
            if all(len(A.hom(a, x)) == len(B.hom(b, sigma[x])) and len(A.hom(x, a)) == len(B.hom(sigma[x], b))
                   for x in A.objects[:k]):
                sigma[a] = b
                used.add(b)
                yield from object_maps(k + 1, sigma, used)
                used.discard(b)
                del sigma[a]

    # morphisms with more factorizations come later: they are usually forced
    order = sorted(A.morphisms, key=lambda m: (msig_a[m][-1], A.mor_index(m)))

    for sigma in object_maps(0, {}, set()):
        phi = {A.identity[o]: B.identity[sigma[o]] for o in A.objects}
        state = _extend_iso(A, B, sigma, phi, msig_a, msig_b)
        if state is None:
            continue
        result = _search_morphisms(A, B, sigma, state, order, msig_a, msig_b)
        if result is not None:
            F = Functor(A, B, sigma, result)
            if not check_functor(F):
                return F
    return None


def _extend_iso(A, B, sigma, phi, msig_a, msig_b, new=None):
    """Close a partial morphism bijection under composition; None on conflict."""
    phi = dict(phi)
    used = {v: k for k, v in phi.items()}
    queue = list(phi) if new is None else list(new)
    for m in queue:
        if used.get(phi[m], m) != m:
            return None
        used[phi[m]] = m
    while queue:
        m = queue.pop()
        partners = [(m, f) for f in A.into(A.dom[m]) if f in phi] + \
                   [(g, m) for g in A.out_of(A.cod[m]) if g in phi]
        for g, f in partners:
            h = A.compose(g, f)
            hb = B.compose(phi[g], phi[f])
            if h in phi:
                if phi[h] != hb:
                    return None
                continue
            if msig_b[hb] != msig_a[h] or hb in used:
                return None
            phi[h] = hb
            used[hb] = h
            queue.append(h)
    return phi


def _search_morphisms(A, B, sigma, phi, order, msig_a, msig_b):
    rest = [m for m in order if m not in phi]
    if not rest:
        return phi
    m = rest[0]
    taken = set(phi.values())
    for cand in B.hom(sigma[A.dom[m]], sigma[A.cod[m]]):
        if cand in taken or msig_b[cand] != msig_a[m]:
            continue
        trial = dict(phi)
        trial[m] = cand
        ext = _extend_iso(A, B, sigma, trial, msig_a, msig_b, new=[m])
        if ext is None:
            continue
        res = _search_morphisms(A, B, sigma, ext, order, msig_a, msig_b)
        if res is not None:
            return res
    return None


def is_equivalence(F):
    """Full, faithful and essentially surjective."""
    A, B = F.source, F.target
    if check_functor(F):
        return False
    for a in A.objects:
        for a2 in A.objects:
            img = [F.mor[m] for m in A.hom(a, a2)]
            if len(set(img)) != len(img) or set(img) != set(B.hom(F.obj[a], F.obj[a2])):
                return False
    hit = {F.obj[a] for a in A.objects}
    for b in B.objects:
        if b in hit:
            continue
        if not any(is_iso(B, m) for h in hit for m in B.hom(h, b)):
            return False
    return True


def find_equivalence(A, B):
    """A full, faithful, essentially surjective functor A → B, or None.

    Skeleta are compared by backtracking isomorphism search; the skeletal
    isomorphism is then extended along chosen isomorphisms to each
    representative.
    """
    SA, SB = skeleton(A), skeleton(B)
    iso = find_isomorphism(SA, SB)
    if iso is None:
        return None
    rep, to_rep, from_rep = {}, {}, {}
    for cls in isomorphism_classes(A):
        r = cls[0]
        for a in cls:
            rep[a] = r
            if a == r:
                to_rep[a] = from_rep[a] = A.identity[a]
                continue
            m = next(m for m in A.hom(a, r) if is_iso(A, m))
            to_rep[a] = m
            from_rep[a] = inverse(A, m)
    obj = {a: iso.obj[rep[a]] for a in A.objects}
    mor = {}
    for m in A.morphisms:
        a, a2 = A.dom[m], A.cod[m]
        core = A.compose(to_rep[a2], m, from_rep[a])
        mor[m] = iso.mor[core]
    F = Functor(A, B, obj, mor)
    if not is_equivalence(F):
        raise AssertionError("equivalence construction failed")
    return F
