"""The bundled corpus: self-verifying example documents with expected results.

Each entry is a JSON file holding a name, an input document and a list of
expectations.  An expectation names a check, its arguments, the expected
value and a provenance tag ("published", "trivial" or "derived"); published
expectations also carry a citation string.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from itertools import product

from . import arch, classify as cl, duality as du, fincat as fc, sheaf as sh, site as st
from .formats import InputError, SchemaError, load, parse

PROVENANCE = ("published", "trivial", "derived")

DEFAULT_FUNNEL_CAP = cl.DEFAULT_FUNNEL_CAP
DEFAULT_COPRODUCT_BOUND = 2


def corpus_dir():
    return str(resources.files("finsites") / "corpus")


def entry_paths(directory=None):
    d = directory or corpus_dir()
    return [os.path.join(d, f) for f in sorted(os.listdir(d)) if f.endswith(".json")]


def load_entry(path):
    doc = load(path)
    for key in ("name", "input", "expect"):
        if key not in doc:
            raise SchemaError(f"$.{key}: corpus entry lacks this field")
    for n, e in enumerate(doc["expect"]):
        if e.get("provenance") not in PROVENANCE:
            raise SchemaError(f"$.expect[{n}].provenance: must be one of {', '.join(PROVENANCE)}")
        if e["provenance"] == "published" and not e.get("citation"):
            raise SchemaError(f"$.expect[{n}].citation: published expectations need a citation")
        if "check" not in e or "value" not in e:
            raise SchemaError(f"$.expect[{n}]: needs 'check' and 'value'")
    return doc


def find_entry(name, directory=None):
    for p in entry_paths(directory):
        if os.path.splitext(os.path.basename(p))[0] == name:
            return load_entry(p)
    raise InputError(f"no corpus entry named {name!r}")


# ---------------------------------------------------------------------------
# context: what an input document becomes

@dataclass
class Options:
    funnel_cap: int = DEFAULT_FUNNEL_CAP
    coproduct_bound: int = DEFAULT_COPRODUCT_BOUND
    directory: str = None


class Subject:
    """Parsed input with lazily derived views (site, category, semilattice)."""

    def __init__(self, doc, base=None):
        self.doc = doc
        self.obj = parse(doc, base)

    @property
    def site(self):
        o = self.obj
        if isinstance(o, st.Site):
            return o
        if isinstance(o, fc.FiniteCategory):
            return st.trivial_site(o)
        if isinstance(o, du.JoinSemilattice):
            return du.finite_join_site(o, check=False)
        if isinstance(o, du.FinPoset):
            return st.trivial_site(o.category())
        raise InputError("input has no site")

    @property
    def cat(self):
        o = self.obj
        if isinstance(o, du.JoinSemilattice):
            return o.poset.category()
        return self.site.cat


# ---------------------------------------------------------------------------
# checks; each returns the observed value (or "inconclusive")

def _arch_homs(subj, args, opts):
    return len(arch.arch_components(subj.site, args["A"], args["B"]))


def _sheaf_homs(subj, args, opts):
    return len(sh.hom_sheaves(subj.site, args["A"], args["B"]))


def cross_oracle(site):
    """Compare arch components with sheaf morphisms between representables.

    Returns a list of disagreements (empty when the two agree, including on
    composition)."""
    cat = site.cat
    issues = []
    alpha_of = {}
    for A in cat.objects:
        for B in cat.objects:
            comps = arch.arch_components(site, A, B)
            homs = sh.hom_sheaves(site, A, B)
            if len(comps) != len(homs):
                issues.append(f"{A},{B}: {len(comps)} components vs {len(homs)} sheaf maps")
                continue
            seen = set()
            for n, comp in enumerate(comps):
                induced = [arch.sheaf_map_of_arch(site, M) for M in comp]
                if any(len(ms) != 1 for ms in induced):
                    issues.append(f"{A},{B}: an arch of component {n} does not induce exactly one map")
                    continue
                images = {ms[0] for ms in induced}
                if len(images) != 1:
                    issues.append(f"{A},{B}: component {n} induces {len(images)} sheaf maps")
                    continue
                (alpha,) = images
                seen.add(alpha)
                alpha_of[(A, B, n)] = alpha
            if len(seen) != len(homs) and not any(i.startswith(f"{A},{B}:") for i in issues):
                issues.append(f"{A},{B}: components do not reach every sheaf map")
    if issues:
        return issues
    for A, B, C in product(cat.objects, repeat=3):
        c1, c2 = arch.arch_components(site, A, B), arch.arch_components(site, B, C)
        for (i, f), (j, g) in product(enumerate(c1), enumerate(c2)):
            h = arch.compose_arches(site, g[0], f[0])
            k = arch.component_index(site, h)
            if sh.compose_nt(alpha_of[(B, C, j)], alpha_of[(A, B, i)]) != alpha_of[(A, C, k)]:
                issues.append(f"composition {A}->{B}->{C} ({i}, {j}) disagrees")
    return issues


def _cross_oracle(subj, args, opts):
    issues = cross_oracle(subj.site)
    return issues[0] if issues else True


def _topology_axioms(subj, args, opts):
    bad = subj.site.check_topology()
    return True if bad is None else f"{bad[0]} fails at {bad[1]}"


def _subcanonical(subj, args, opts):
    return st.is_subcanonical(subj.site)


def _supercompact_count(subj, args, opts):
    return len(sh.supercompact_objects(subj.site))


def _target_category(ref, opts):
    if ref == "self":
        return None
    return Subject(find_entry(ref, opts.directory)["input"]).cat


def _supercompact_equivalent(subj, args, opts):
    sc = sh.supercompact_category(subj.site).category
    target = _target_category(args.get("target", "self"), opts) or subj.cat
    return fc.find_equivalence(sc, target) is not None


def quotient_agreement(site):
    """Representable categories before and after the canonical quotient agree,
    and the generating class becomes epic.  Returns a list of issues."""
    cong = st.canonical_congruence(site)
    Q, F = cong.quotient, cong.functor
    issues = []
    R1 = arch.representable_category(site).category
    R2 = arch.representable_category(Q).category
    if fc.find_isomorphism(R1, R2) is None:
        issues.append("representable categories differ")
    for t in sorted(site.tclass, key=site.cat.mor_index):
        if not fc.is_epi(Q.cat, F.mor[t]):
            issues.append(f"image of {t} is not epic")
    return issues


def _quotient_agreement(subj, args, opts):
    issues = quotient_agreement(subj.site)
    return issues[0] if issues else True


def _quotient_morphisms(subj, args, opts):
    return len(st.canonical_congruence(subj.site).quotient.cat.morphisms)


def generated_cocones(site, funnel_cap=DEFAULT_FUNNEL_CAP, coproduct_bound=DEFAULT_COPRODUCT_BOUND):
    """Funneling cocones over every normalized funnel, then coproduct-shaped
    multifunnels with at most `coproduct_bound` tops.  Yields (kind, D, cocone)."""
    cat = site.cat
    for d0 in cat.objects:
        for pairs in cl.funnels(cat, d0, funnel_cap) or []:
            D = fc.funnel_diagram(cat, d0, pairs)
            for cc in fc.cocones(cat, D):
                yield "funnel", D, cc
    seen = set()
    for k in range(coproduct_bound + 1):
        for tops in product(cat.objects, repeat=k):
            key = tuple(sorted(tops, key=cat.obj_index))
            if key in seen:
                continue
            seen.add(key)
            D = fc.pair_diagram(cat, list(key), [])
            for cc in fc.cocones(cat, D):
                yield "multifunnel", D, cc


def colimit_agreement(site, funnel_cap=DEFAULT_FUNNEL_CAP, coproduct_bound=DEFAULT_COPRODUCT_BOUND):
    """Returns (funnel cocones tried, multifunnel cocones tried, disagreements)."""
    counts = {"funnel": 0, "multifunnel": 0}
    bad = []
    for kind, D, cc in generated_cocones(site, funnel_cap, coproduct_bound):
        counts[kind] += 1
        a = sh.preserves_funnel_colimit(site, D, cc)
        b = sh.check_colim_criteria(site, D, cc)[0]
        if a != b:
            bad.append((kind, D.obj, cc.as_dict(), a, b))
    return counts["funnel"], counts["multifunnel"], bad


def _colimit_agreement(subj, args, opts):
    _, _, bad = colimit_agreement(subj.site, opts.funnel_cap, opts.coproduct_bound)
    return True if not bad else f"disagreement on {bad[0][1]} with legs {bad[0][2]}"


def _classify(subj, args, opts):
    prop = args["property"]
    rep = cl.classify(subj.cat, opts.funnel_cap)
    v = rep[prop]
    if "witness" in args:
        return [v.status, cl._jsonable(v.witness)]
    return v.status


def classifier_implications(cat, funnel_cap=DEFAULT_FUNNEL_CAP):
    """Violations of the implications between classifier verdicts; None
    entries mean some verdict was inconclusive."""
    r = cl.classify(cat, funnel_cap).verdicts
    s = {k: v.status for k, v in r.items()}
    if "inconclusive" in s.values():
        return None
    t = {k: v == "true" for k, v in s.items()}
    out = []
    if t["coalescent"] and not (t["reductive"] and t["strictInitial"] and t["funnelingColimits"]):
        out.append("coalescent without reductive and strict initial")
    if (t["reductive"] and t["pullbacks"]) != (t["locallyRegular"] and t["funnelingColimits"]):
        out.append("reductive with pullbacks differs from locally regular with funneling colimits")
    if t["effectual"] and t["reductive"] and t["pullbacks"] and not t["effective"]:
        out.append("effectual reductive with pullbacks but not effective")
    return out


def _classifier_implications(subj, args, opts):
    out = classifier_implications(subj.cat, opts.funnel_cap)
    if out is None:
        return "inconclusive"
    return out[0] if out else True


def _strict_epi(subj, args, opts):
    return fc.is_strict_epi(subj.cat, args["morphism"])


def _effective_epimorphic_sieve(subj, args, opts):
    cat = subj.cat
    return st.is_effective_epimorphic_sieve(cat, st.generated_sieve(cat, args["generators"], args["cod"]))


def _round_trip(subj, args, opts):
    return cl.correspondence_round_trip(subj.cat, opts.funnel_cap).ok


def _distributive(subj, args, opts):
    ok, w = du.is_distributive(subj.obj)
    return [ok, list(w)] if args.get("witness") else ok


def _prime_filters(subj, args, opts):
    return len(du.prime_filters(subj.obj))


def _stone_round_trip(subj, args, opts):
    return du.stone_round_trip(subj.obj).ok


def _alexandroff_round_trip(subj, args, opts):
    P = subj.obj.poset if isinstance(subj.obj, du.JoinSemilattice) else subj.obj
    return du.alexandroff_round_trip(P).ok


def _family_axiom(subj, args, opts):
    site = du.finite_join_site(subj.obj, check=False)
    rep = st.check_stable_family_class(site.cat, site.family_class)
    ax = args["axiom"]
    held = rep.holds[ax]
    if args.get("witness"):
        return [held, cl._jsonable(rep.witnesses.get(ax))]
    return held


def _morphism_of_sites(subj, args, opts):
    F, src, tgt = subj.obj
    return st.is_morphism_of_sites(F, src, tgt).ok


def _comorphism_of_sites(subj, args, opts):
    F, src, tgt = subj.obj
    return st.is_comorphism_of_sites(F, src, tgt)[0]


CHECKS = {
    "arch_homs": _arch_homs,
    "sheaf_homs": _sheaf_homs,
    "cross_oracle": _cross_oracle,
    "topology_axioms": _topology_axioms,
    "subcanonical": _subcanonical,
    "supercompact_count": _supercompact_count,
    "supercompact_equivalent": _supercompact_equivalent,
    "quotient_agreement": _quotient_agreement,
    "quotient_morphisms": _quotient_morphisms,
    "colimit_agreement": _colimit_agreement,
    "classify": _classify,
    "classifier_implications": _classifier_implications,
    "strict_epi": _strict_epi,
    "effective_epimorphic_sieve": _effective_epimorphic_sieve,
    "round_trip": _round_trip,
    "distributive": _distributive,
    "prime_filters": _prime_filters,
    "stone_round_trip": _stone_round_trip,
    "alexandroff_round_trip": _alexandroff_round_trip,
    "family_axiom": _family_axiom,
    "morphism_of_sites": _morphism_of_sites,
    "comorphism_of_sites": _comorphism_of_sites,
}


# ---------------------------------------------------------------------------
# running

@dataclass(frozen=True)
class Outcome:
    entry: str
    check: str
    args: str
    expected: object
    got: object
    status: str          # pass, fail, inconclusive, error
    provenance: str

    def line(self):
        tag = self.status.upper()
        return (f"{tag:<12} {self.entry} :: {self.check}{self.args} "
                f"expected {_show(self.expected)} got {_show(self.got)} [{self.provenance}]")


def _show(v):
    return json.dumps(v, ensure_ascii=False, sort_keys=True)


def _fmt_args(args):
    if not args:
        return ""
    return "(" + ", ".join(f"{k}={_show(v)}" for k, v in sorted(args.items())) + ")"


def run_entry(path, opts=None):
    opts = opts or Options()
    try:
        entry = load_entry(path)
        subj = Subject(entry["input"], os.path.dirname(path))
    except InputError as exc:
        name = os.path.splitext(os.path.basename(path))[0]
        return [Outcome(name, "load", "", True, str(exc), "error", "trivial")]
    out = []
    for e in entry["expect"]:
        args = e.get("args", {})
        try:
            got = CHECKS[e["check"]](subj, args, opts)
        except KeyError as exc:
            got, status = f"unknown check or id {exc}", "error"
        except Exception as exc:  # reported as an error line, never silently dropped
            got, status = f"{type(exc).__name__}: {exc}", "error"
        else:
            if got == "inconclusive" and e["value"] != "inconclusive":
                status = "inconclusive"
            else:
                status = "pass" if got == e["value"] else "fail"
        out.append(Outcome(entry["name"], e["check"], _fmt_args(args), e["value"], got, status,
                           e["provenance"]))
    return out


def run_corpus(paths=None, parallel=1, opts=None):
    """Evaluate every entry; results come back in input order regardless of
    how many worker processes are used."""
    paths = list(paths or entry_paths(opts.directory if opts else None))
    opts = opts or Options()
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(run_entry, paths, [opts] * len(paths)))
    else:
        results = [run_entry(p, opts) for p in paths]
    return [o for r in results for o in r]


def summarize(outcomes):
    counts = {s: 0 for s in ("pass", "fail", "inconclusive", "error")}
    for o in outcomes:
        counts[o.status] += 1
    return counts


def report_text(outcomes):
    c = summarize(outcomes)
    lines = [o.line() for o in outcomes]
    lines.append(f"{len(outcomes)} expectations: {c['pass']} passed, {c['fail']} failed, "
                 f"{c['inconclusive']} inconclusive, {c['error']} errors")
    return "\n".join(lines) + "\n"


def exit_code(outcomes):
    c = summarize(outcomes)
    if c["fail"] or c["error"]:
        return 1
    if c["inconclusive"]:
        return 3
    return 0
