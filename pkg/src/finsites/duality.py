"""Finite posets, join semilattices and their frames.

Covers distributivity, ideal frames and their points (prime filters), the
Stone-type recovery of a distributive join semilattice from its spectrum,
Alexandroff frames of downsets, flat maps, and the exhaustive generation of
posets and lattices up to isomorphism.
"""

from dataclasses import dataclass
from itertools import combinations, permutations, product

from .fincat import CategoryError, FiniteCategory, Functor


class OrderError(CategoryError):
    """Malformed order-theoretic input."""


class NotAFrameMap(OrderError):
    pass


# ---------------------------------------------------------------------------
# posets and semilattices

class FinPoset:
    def __init__(self, elements, leq_pairs, check=True):
        self.elements = tuple(elements)
        self._pos = {x: i for i, x in enumerate(self.elements)}
        rel = {(x, x) for x in self.elements}
        for a, b in leq_pairs:
            rel.add((a, b))
        self._leq = frozenset(rel)
        if check:
            issues = poset_issues(self)
            if issues:
                raise OrderError("invalid poset: " + issues[0], issues)

    def __repr__(self):
        return f"FinPoset({list(self.elements)})"

    def __len__(self):
        return len(self.elements)

    def leq(self, a, b):
        return (a, b) in self._leq

    def lt(self, a, b):
        return a != b and (a, b) in self._leq

    def index(self, x):
        return self._pos[x]

    def down(self, x):
        return frozenset(y for y in self.elements if self.leq(y, x))

    def up(self, x):
        return frozenset(y for y in self.elements if self.leq(x, y))

    def cover_pairs(self):
        """Strict relations (a, b), a < b, in element order (transitively reduced)."""
        return [(a, b) for a in self.elements for b in self.elements
                if self.lt(a, b) and not any(self.lt(a, c) and self.lt(c, b) for c in self.elements)]

    def strict_pairs(self):
        return [(a, b) for a in self.elements for b in self.elements if self.lt(a, b)]

    def lub(self, xs):
        ubs = [u for u in self.elements if all(self.leq(x, u) for x in xs)]
        least = [u for u in ubs if all(self.leq(u, v) for v in ubs)]
        return least[0] if least else None

    def glb(self, xs):
        lbs = [u for u in self.elements if all(self.leq(u, x) for x in xs)]
        great = [u for u in lbs if all(self.leq(v, u) for v in lbs)]
        return great[0] if great else None

    def category(self):
        return FiniteCategory.from_preorder(self.elements, self.leq)

    def downsets(self):
        out = []
        els = self.elements
        for r in range(len(els) + 1):
            for sub in combinations(els, r):
                s = frozenset(sub)
                if all(y in s for x in s for y in self.down(x)):
                    out.append(s)
        return out


def poset_issues(P):
    out = []
    for a, b in P._leq:
        if a not in P._pos or b not in P._pos:
            out.append(f"relation mentions unknown element ({a}, {b})")
    if out:
        return out
    for a, b in P._leq:
        if a != b and (b, a) in P._leq:
            out.append(f"antisymmetry fails for ({a}, {b})")
    for a, b in P._leq:
        for c in P.elements:
            if (b, c) in P._leq and (a, c) not in P._leq:
                out.append(f"transitivity fails for ({a}, {b}, {c})")
                break
    return out


class JoinSemilattice:
    """Finite poset with all finite joins (including the empty join)."""

    def __init__(self, poset, bottom=None, join=None, check=True):
        self.poset = poset
        self.elements = poset.elements
        if bottom is None:
            bottom = poset.lub([])
            if bottom is None:
                raise OrderError("no bottom element")
        self.bottom = bottom
        if join is None:
            join = {}
            for a in self.elements:
                for b in self.elements:
                    j = poset.lub([a, b])
                    if j is None:
                        raise OrderError(f"no join of {a} and {b}")
                    join[(a, b)] = j
        self._join = dict(join)
        if check:
            issues = semilattice_issues(self)
            if issues:
                raise OrderError("invalid join semilattice: " + issues[0], issues)

    @classmethod
    def from_order(cls, elements, leq_pairs):
        return cls(FinPoset(elements, leq_pairs))

    def __repr__(self):
        return f"JoinSemilattice({list(self.elements)})"

    def __len__(self):
        return len(self.elements)

    def leq(self, a, b):
        return self.poset.leq(a, b)

    def join(self, *xs):
        acc = self.bottom
        for x in xs:
            acc = self._join[(acc, x)]
        return acc

    def meet(self, a, b):
        return self.poset.glb([a, b])

    @property
    def top(self):
        return self.join(*self.elements)

    def down(self, x):
        return self.poset.down(x)


def semilattice_issues(S):
    P, out = S.poset, []
    if S.bottom not in P._pos or any(not P.leq(S.bottom, x) for x in P.elements):
        out.append("bottom is not least")
    for a in P.elements:
        for b in P.elements:
            j = S._join.get((a, b))
            if j is None:
                out.append(f"missing join of {a} and {b}")
            elif j != P.lub([a, b]):
                out.append(f"join of {a} and {b} is not their least upper bound")
    return out


# ---------------------------------------------------------------------------
# distributivity

def is_distributive(S):
    """(True, None) or (False, (a, b, c)) with a ≤ b∨c not of the form b'∨c'."""
    els = S.elements
    for b in els:
        for c in els:
            j = S.join(b, c)
            below_b, below_c = S.down(b), S.down(c)
            for a in els:
                if not S.leq(a, j):
                    continue
                if not any(S.join(x, y) == a for x in below_b for y in below_c):
                    return False, (a, b, c)
    return True, None


def finite_join_families(S):
    """For each c, every finite set of elements whose join is c."""
    fams = []
    for c in S.elements:
        below = sorted(S.down(c), key=S.poset.index)
        for r in range(len(below) + 1):
            for sub in combinations(below, r):
                if S.join(*sub) == c:
                    fams.append((c, sub))
    return fams


def finite_join_site(S, check=True):
    """Category of S with covers the finite join decompositions."""
    from .site import FGSite
    cat = S.poset.category()
    name = lambda x, y: f"id_{x}" if x == y else f"{x}->{y}"
    fams = [(c, [name(x, c) for x in sub]) for c, sub in finite_join_families(S)]
    return FGSite(cat, fams, check=check)


def poset_functor(f, P, Q):
    """The functor between thin categories induced by a monotone map."""
    name = lambda x, y: f"id_{x}" if x == y else f"{x}->{y}"
    A, B = P.category(), Q.category()
    mor = {}
    for x in P.elements:
        for y in P.elements:
            if P.leq(x, y):
                mor[name(x, y)] = name(f[x], f[y])
    return Functor(A, B, dict(f), mor)


def _require_monotone(f, P, Q):
    for x in P.elements:
        if x not in f or f[x] not in Q._pos:
            raise OrderError(f"map undefined at {x}")
    for a, b in P.strict_pairs():
        if not Q.leq(f[a], f[b]):
            raise OrderError(f"map not order-preserving at ({a}, {b})")


# ---------------------------------------------------------------------------
# frames

@dataclass
class FinFrame:
    """Finite distributive lattice of sets ordered by inclusion."""
    elements: tuple  # frozensets

    def __post_init__(self):
        self._set = set(self.elements)

    def __len__(self):
        return len(self.elements)

    def leq(self, a, b):
        return a <= b

    @property
    def bottom(self):
        return min(self.elements, key=len)

    @property
    def top(self):
        return max(self.elements, key=len)

    def join(self, *xs):
        """Least element containing the union."""
        u = frozenset().union(*xs) if xs else frozenset()
        cands = [e for e in self.elements if u <= e]
        return min(cands, key=len)

    def meet(self, *xs):
        if not xs:
            return self.top
        u = frozenset.intersection(*xs)
        cands = [e for e in self.elements if e <= u]
        return max(cands, key=len)

    def below(self, x):
        return [e for e in self.elements if e < x]


def ideal_frame(S):
    """Ideals (downsets closed under finite joins, containing bottom)."""
    ok, w = is_distributive(S)
    if not ok:
        raise OrderError(f"not distributive: {w}")
    return FinFrame(tuple(_ideals(S)))


def _ideals(S):
    out = []
    for d in S.poset.downsets():
        if S.bottom in d and all(S.join(a, b) in d for a in d for b in d):
            out.append(d)
    return sorted(out, key=lambda d: (len(d), sorted(S.poset.index(x) for x in d)))


def frame_points(L):
    """Completely prime filters of a finite frame.

    A filter of a finite lattice is principal; ↑p is completely prime when
    its complement contains the bottom and is closed under joins.
    """
    out = []
    for p in L.elements:
        F = frozenset(x for x in L.elements if p <= x)
        comp = [x for x in L.elements if x not in F]
        if L.bottom in F:
            continue
        if all(L.join(a, b) not in F for a in comp for b in comp):
            out.append(F)
    return out


def prime_filters(S):
    """Points of the ideal frame restricted along principal ideals."""
    L = ideal_frame(S)
    down = {s: frozenset(S.down(s)) for s in S.elements}
    out = []
    for F in frame_points(L):
        out.append(frozenset(s for s in S.elements if down[s] in F))
    return sorted(out, key=lambda P: sorted(S.poset.index(x) for x in P))


@dataclass
class Spectrum:
    points: list       # prime filters
    opens: dict        # element -> frozenset of point indices


def spectrum(S):
    pts = prime_filters(S)
    opens = {s: frozenset(i for i, P in enumerate(pts) if s in P) for s in S.elements}
    return Spectrum(pts, opens)


@dataclass
class RoundTripResult:
    ok: bool
    mapping: dict = None
    note: str = ""


def stone_round_trip(S):
    """Recover S from its ideal frame and from the compact opens of its spectrum."""
    ok, w = is_distributive(S)
    if not ok:
        return RoundTripResult(False, None, f"not distributive: {w}")
    L = ideal_frame(S)
    # compact elements of the ideal frame: the finitely generated ideals
    compact = [I for I in L.elements
               if any(I == frozenset(S.down(S.join(*gen))) for r in range(len(I) + 1)
                      for gen in combinations(sorted(I, key=S.poset.index), r))]
    to_ideal = {s: frozenset(S.down(s)) for s in S.elements}
    if sorted(map(tuple, map(sorted, to_ideal.values()))) != sorted(map(tuple, map(sorted, compact))):
        return RoundTripResult(False, None, "principal ideals differ from compact ideals")
    sp = spectrum(S)
    U = sp.opens
    if len(set(U.values())) != len(S.elements):
        return RoundTripResult(False, None, "points do not separate elements")
    for a in S.elements:
        for b in S.elements:
            if (U[a] <= U[b]) != S.leq(a, b) or U[S.join(a, b)] != U[a] | U[b]:
                return RoundTripResult(False, None, f"spectrum order differs at ({a}, {b})")
    if U[S.bottom]:
        return RoundTripResult(False, None, "bottom is not the empty open")
    return RoundTripResult(True, {s: sorted(U[s]) for s in S.elements})


def alexandroff(P):
    """Frame of downsets of P."""
    return FinFrame(tuple(sorted(P.downsets(), key=lambda d: (len(d), sorted(P.index(x) for x in d)))))


def supercompact_elements(L):
    """Non-bottom elements not equal to the join of the elements strictly below."""
    return [x for x in L.elements if x != L.bottom and L.join(*L.below(x)) != x]


def alexandroff_round_trip(P):
    L = alexandroff(P)
    sc = supercompact_elements(L)
    to_down = {p: P.down(p) for p in P.elements}
    if set(sc) != set(to_down.values()) or len(sc) != len(P.elements):
        return RoundTripResult(False, None, "supercompact downsets differ from principal ones")
    for a in P.elements:
        for b in P.elements:
            if (to_down[a] <= to_down[b]) != P.leq(a, b):
                return RoundTripResult(False, None, f"order differs at ({a}, {b})")
    return RoundTripResult(True, {p: sorted(to_down[p], key=P.index) for p in P.elements})


# ---------------------------------------------------------------------------
# maps

def is_flat_map(f, P, Q):
    """Every d lies below some f(c), and below f(c), f(c') only via a common
    lower bound c'' of c and c'."""
    _require_monotone(f, P, Q)
    for d in Q.elements:
        over = [c for c in P.elements if Q.leq(d, f[c])]
        if not over:
            return False
        for c in over:
            for c2 in over:
                if not any(P.leq(c3, c) and P.leq(c3, c2) and Q.leq(d, f[c3]) for c3 in P.elements):
                    return False
    return True


def is_dist_join_hom(f, S, T):
    """Finite joins preserved; every element lies below an image; elements
    below two images decompose into pieces below images of common lower bounds."""
    _require_monotone(f, S.poset, T.poset)
    if f[S.bottom] != T.bottom:
        return False
    for a in S.elements:
        for b in S.elements:
            if f[S.join(a, b)] != T.join(f[a], f[b]):
                return False
    for d in T.elements:
        if not any(T.leq(d, f[c]) for c in S.elements):
            return False
    for d in T.elements:
        for c in S.elements:
            if not T.leq(d, f[c]):
                continue
            for c2 in S.elements:
                if not T.leq(d, f[c2]):
                    continue
                common = [c3 for c3 in S.elements if S.leq(c3, c) and S.leq(c3, c2)]
                pieces = [e for e in T.elements if T.leq(e, d) and any(T.leq(e, f[c3]) for c3 in common)]
                if T.join(*pieces) != d:
                    return False
    return True


def is_completely_continuous(h, L, M):
    """A join-preserving map of finite frames that also preserves all meets.

    Raises NotAFrameMap when joins (including the empty join) are not
    preserved.
    """
    for x in L.elements:
        if x not in h or h[x] not in M._set:
            raise NotAFrameMap(f"map undefined at {sorted(x)}")
    if h[L.bottom] != M.bottom:
        raise NotAFrameMap("bottom not preserved")
    for a in L.elements:
        for b in L.elements:
            if h[L.join(a, b)] != M.join(h[a], h[b]):
                raise NotAFrameMap("binary join not preserved")
    if h[L.top] != M.top:
        return False
    return all(h[L.meet(a, b)] == M.meet(h[a], h[b]) for a in L.elements for b in L.elements)


# ---------------------------------------------------------------------------
# exhaustive generation up to isomorphism

def _naturally_labelled(n):
    """Posets on range(n) where i < j in the order implies i < j as integers,
    as tuples of strict down-sets."""
    def rec(k, downs):
        if k == n:
            yield tuple(downs)
            return
        for r in range(k + 1):
            for sub in combinations(range(k), r):
                s = frozenset(sub)
                if all(downs[x] <= s for x in s):
                    yield from rec(k + 1, downs + [s])
    yield from rec(0, [])


def _canonical_form(n, downs):
    up = [frozenset(j for j in range(n) if i in downs[j]) for i in range(n)]
    key = [(len(downs[i]), len(up[i])) for i in range(n)]
    blocks = {}
    for i in sorted(range(n), key=lambda i: key[i]):
        blocks.setdefault(key[i], []).append(i)
    best = None
    for perms in product(*[permutations(b) for _, b in sorted(blocks.items())]):
        order = [i for p in perms for i in p]
        pos = {v: k for k, v in enumerate(order)}
        rel = tuple(sorted((pos[a], pos[b]) for b in range(n) for a in downs[b]))
        if best is None or rel < best:
            best = rel
    return (tuple(sorted(key)), best)


def enumerate_posets(n):
    """Posets with n elements, one per isomorphism class."""
    seen = {}
    for downs in _naturally_labelled(n):
        cf = _canonical_form(n, downs)
        if cf not in seen:
            seen[cf] = downs
    out = []
    for cf in sorted(seen):
        _, rel = cf
        els = [str(i) for i in range(n)]
        out.append(FinPoset(els, [(str(a), str(b)) for a, b in rel]))
    return out


def enumerate_join_semilattices(n):
    """Join semilattices (equivalently lattices) with n elements, up to iso."""
    if n == 0:
        return []
    if n == 1:
        return [JoinSemilattice(FinPoset(["0"], []))]
    out = []
    for mid in enumerate_posets(n - 2):
        els = ["0"] + [f"m{x}" for x in mid.elements] + ["1"]
        rel = [("0", x) for x in els] + [(x, "1") for x in els]
        rel += [(f"m{a}", f"m{b}") for a, b in mid.strict_pairs()]
        P = FinPoset(els, rel)
        if all(P.lub([a, b]) is not None for a in els for b in els):
            out.append(JoinSemilattice(P))
    return _dedupe_lattices(out)


def _dedupe_lattices(lats):
    seen, out = set(), []
    for L in lats:
        P = L.poset
        idx = {x: i for i, x in enumerate(P.elements)}
        downs = [frozenset(idx[y] for y in P.elements if P.lt(y, x)) for x in P.elements]
        cf = _canonical_form(len(P.elements), downs)
        if cf not in seen:
            seen.add(cf)
            out.append(L)
    return out


def enumerate_distributive(n):
    return [S for S in enumerate_join_semilattices(n) if is_distributive(S)[0]]
