"""Arches: spans whose left leg covers and whose right leg respects every
identification the left leg makes, up to local equality.

A multiarch is a family of spans whose left legs form a generating family.
On a principal site without empty covers every multiarch has exactly one
span, i.e. it is an ordinary arch.  Connected components of multiarches from
A to B correspond to sheaf morphisms ℓA → ℓB.
"""

from dataclasses import dataclass
from itertools import product

from .fincat import CategoryError, FiniteCategory
from .unionfind import UnionFind


@dataclass(frozen=True, order=True)
class TArch:
    """A span A ← apex → B given by its left leg (in the class) and right leg."""
    apex: str
    left: str
    right: str


@dataclass(frozen=True)
class MultiArch:
    domain: str
    codomain: str
    spans: tuple  # TArch, sorted and without repeats

    @property
    def single(self):
        return self.spans[0] if len(self.spans) == 1 else None

    def label(self):
        if not self.spans:
            return "empty"
        return "+".join(f"{s.left}|{s.right}" for s in self.spans)


def _normalize(cat, A, B, spans):
    uniq = {(s.left, s.right): s for s in spans}
    ordered = sorted(uniq.values(), key=lambda s: (cat.obj_index(s.apex), cat.mor_index(s.left),
                                                  cat.mor_index(s.right)))
    return MultiArch(A, B, tuple(ordered))


def _sort_key(cat, M):
    return (len(M.spans) != 1,
            [(cat.obj_index(s.apex), cat.mor_index(s.left), cat.mor_index(s.right)) for s in M.spans])


def locally_equal(site, h, k):
    cache = site._cache.setdefault("loceq", {})
    key = (h, k) if h <= k else (k, h)
    if key not in cache:
        cache[key] = h == k or site.locally_equal(h, k)
    return cache[key]


def is_multiarch(site, spans):
    cat = site.cat
    for s1 in spans:
        for s2 in spans:
            for d in cat.objects:
                for h in cat.hom(d, s1.apex):
                    th = cat.compose(s1.left, h)
                    for k in cat.hom(d, s2.apex):
                        if cat.compose(s2.left, k) != th:
                            continue
                        if not locally_equal(site, cat.compose(s1.right, h), cat.compose(s2.right, k)):
                            return False
    return True


def is_arch(site, t, g):
    cat = site.cat
    return is_multiarch(site, [TArch(cat.dom[t], t, g)])


def enumerate_arches(site, A, B):
    """All (multi)arches from A to B in deterministic order."""
    cache = site._cache.setdefault("arches", {})
    if (A, B) in cache:
        return cache[(A, B)]
    cat = site.cat
    out = []
    for fam in site.arch_families(A):
        for rights in product(*[cat.hom(cat.dom[t], B) for t in fam]):
            spans = [TArch(cat.dom[t], t, g) for t, g in zip(fam, rights)]
            if is_multiarch(site, spans):
                out.append(_normalize(cat, A, B, spans))
    out = sorted(set(out), key=lambda M: _sort_key(cat, M))
    cache[(A, B)] = out
    return out


def arch_morphism_exists(site, M, N):
    """Some x maps every span of M into a span of N (t = t'x, g = g'x)."""
    cat = site.cat
    for s in M.spans:
        if not any(cat.compose(n.left, x) == s.left and cat.compose(n.right, x) == s.right
                   for n in N.spans for x in cat.hom(s.apex, n.apex)):
            return False
    return True


def arch_components(site, A, B):
    """Connected components of the category of arches from A to B."""
    cache = site._cache.setdefault("archcomp", {})
    if (A, B) in cache:
        return cache[(A, B)]
    arches = enumerate_arches(site, A, B)
    uf = UnionFind(arches)
    for i, M in enumerate(arches):
        for N in arches[i + 1:]:
            if uf.find(M) != uf.find(N) and (arch_morphism_exists(site, M, N)
                                             or arch_morphism_exists(site, N, M)):
                uf.union(M, N)
    comps = uf.groups(arches)
    cache[(A, B)] = comps
    return comps


def component_index(site, M):
    comps = arch_components(site, M.domain, M.codomain)
    for n, comp in enumerate(comps):
        if M in comp:
            return n
    for n, comp in enumerate(comps):
        if any(arch_morphism_exists(site, M, N) or arch_morphism_exists(site, N, M) for N in comp):
            return n
    raise CategoryError(f"multiarch {M.label()} is not connected to an enumerated arch")


def composition_options(site, second, first):
    """Every way of composing two multiarches through covering refinements.

    For each span (t, g) of `first` one picks a generating family H over its
    apex such that each g∘h factors through a left leg u of `second` as u∘y;
    the composite has spans (t∘h, v∘y) where v is the matching right leg.
    """
    cat = site.cat
    per_span = []
    for s in first.spans:
        opts = []
        for H in site.generating_families(s.apex):
            choices = []
            for h in H:
                gh = cat.compose(s.right, h)
                fac = [(n, y) for n in second.spans for y in cat.hom(cat.dom[h], n.apex)
                       if cat.compose(n.left, y) == gh]
                choices.append(fac)
            if all(choices):
                for pick in product(*choices):
                    opts.append([TArch(cat.dom[h], cat.compose(s.left, h), cat.compose(n.right, y))
                                 for h, (n, y) in zip(H, pick)])
        if not opts:
            raise CategoryError("no stability square: the class is not stable")
        per_span.append(opts)
    out = []
    for combo in product(*per_span):
        out.append(_normalize(cat, first.domain, second.codomain, [x for part in combo for x in part]))
    return out


def compose_arches(site, second, first):
    """Composite of first: A → B and second: B → C (any valid choice)."""
    if first.codomain != second.domain:
        raise CategoryError("arches are not composable")
    return composition_options(site, second, first)[0]


def identity_arch(site, A):
    cat = site.cat
    i = cat.identity[A]
    return _normalize(cat, A, A, [TArch(A, i, i)])


@dataclass
class RepresentableCategory:
    category: FiniteCategory
    representative: dict   # morphism name -> MultiArch


def representable_category(site):
    """Objects of the site, with arch components as morphisms."""
    cat = site.cat
    names, rep, ident, ms = {}, {}, {}, []
    for A in cat.objects:
        for B in cat.objects:
            comps = arch_components(site, A, B)
            idn = component_index(site, identity_arch(site, A)) if A == B else None
            for n, comp in enumerate(comps):
                if n == idn:
                    name = f"id_{A}"
                    ident[A] = name
                else:
                    name = f"{A}->{B}:{comp[0].label()}"
                names[(A, B, n)] = name
                rep[name] = comp[0]
                ms.append((name, A, B))
    comp_table = {}
    for f, (_, A, B) in zip(rep, ms):
        for g, (_, B2, C) in zip(rep, ms):
            if B2 != B:
                continue
            h = compose_arches(site, rep[g], rep[f])
            comp_table[(g, f)] = names[(A, C, component_index(site, h))]
    return RepresentableCategory(FiniteCategory(cat.objects, ms, ident, comp_table), rep)


def sheaf_map_of_arch(site, M):
    """The sheaf morphisms ℓA → ℓB induced by the arch (exactly one expected)."""
    from .sheaf import ell_element, hom_sheaves
    A, B = M.domain, M.codomain
    out = []
    for alpha in hom_sheaves(site, A, B):
        if all(alpha.at(s.apex)[ell_element(site, A, s.left)] == ell_element(site, B, s.right)
               for s in M.spans):
            out.append(alpha)
    return out
