"""Command-line interface.

Exit codes: 0 success, 1 an expectation or checked property failed,
2 input error, 3 only inconclusive results.
"""

import argparse
import os
import sys

from . import arch, classify as cl, duality as du, fincat as fc, sheaf as sh, site as st
from .corpus import (DEFAULT_COPRODUCT_BOUND, Options, Subject, corpus_dir, exit_code, report_text,
                     run_corpus, summarize)
from .formats import InputError, dumps, emit, emit_category, emit_site, infer_kind, load

OK, FAILED, INPUT_ERROR, INCONCLUSIVE = 0, 1, 2, 3


def _resolve_path(path):
    if os.path.exists(path):
        return path
    alt = os.path.join(corpus_dir(), path)
    if os.path.exists(alt):
        return alt
    alt = os.path.join(corpus_dir(), path + ".json")
    return alt if os.path.exists(alt) else path


def _subject(path):
    path = _resolve_path(path)
    doc = load(path)
    if infer_kind(doc) == "entry":
        doc = doc["input"]
    return Subject(doc, os.path.dirname(path))


def _need(subj, kinds, what):
    if not isinstance(subj.obj, kinds):
        raise InputError(f"this command needs {what}")
    return subj.obj


class Output:
    def __init__(self, as_json):
        self.as_json = as_json
        self.lines = []
        self.data = {}

    def say(self, line=""):
        self.lines.append(line)

    def flush(self):
        if self.as_json:
            sys.stdout.write(dumps(self.data))
        else:
            sys.stdout.write("\n".join(self.lines) + ("\n" if self.lines else ""))


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args, out):
    subj = _subject(args.file)
    o = subj.obj
    kind = infer_kind(subj.doc)
    out.data = {"kind": kind, "valid": True}
    if isinstance(o, tuple):
        F, src, tgt = o
        out.say(f"valid functor: {len(F.source.objects)} objects to {len(F.target.objects)} objects")
        return OK
    if isinstance(o, du.FinPoset):
        out.say(f"valid poset: {len(o)} elements")
        return OK
    if isinstance(o, du.JoinSemilattice):
        out.say(f"valid join semilattice: {len(o)} elements, bottom {o.bottom}")
        return OK
    cat = subj.cat
    out.say(f"valid {kind}: {len(cat.objects)} objects, {len(cat.morphisms)} morphisms")
    out.data.update(objects=len(cat.objects), morphisms=len(cat.morphisms))
    if isinstance(o, st.PrincipalSite):
        rep = st.check_stable_class(cat, o.tclass, o.empty_covered)
        out.data["axioms"] = {k: v for k, v in rep.holds.items()}
        for k, v in rep.holds.items():
            out.say(f"  {k}: {'holds' if v else 'fails'}")
        if not rep.holds.get("ax4", True):
            out.say("  ax4 is advisory: the saturated class generates the same topology")
    elif isinstance(o, st.FGSite):
        rep = st.check_stable_family_class(cat, o.family_class)
        out.data["axioms"] = dict(rep.holds)
        for k, v in rep.holds.items():
            out.say(f"  {k}: {'holds' if v else 'inconclusive' if v is None else 'fails'}")
    return OK


def cmd_classify(args, out):
    cat = _subject(args.file).cat
    rep = cl.classify(cat, args.funnel_cap)
    for line in rep.lines():
        out.say(line)
    out.data = rep.as_dict()
    return INCONCLUSIVE if rep.inconclusive() else OK


def _site(args):
    subj = _subject(args.file)
    site = subj.site
    for o in getattr(args, "objects", []):
        if o not in site.cat._oi:
            raise InputError(f"unknown object {o!r}")
    return site


def cmd_arch_homs(args, out):
    site = _site(args)
    comps = arch.arch_components(site, args.A, args.B)
    out.say(str(len(comps)))
    for n, comp in enumerate(comps):
        out.say(f"  [{n}] {comp[0].label()} ({len(comp)} arches)")
    out.data = {"count": len(comps), "components": [[M.label() for M in comp] for comp in comps]}
    return OK


def cmd_sheaf_homs(args, out):
    site = _site(args)
    homs = sh.hom_sheaves(site, args.A, args.B)
    out.say(str(len(homs)))
    for n, a in enumerate(homs):
        out.say(f"  [{n}] " + "; ".join(f"{o}: {list(a.at(o))}" for o in site.cat.objects))
    out.data = {"count": len(homs),
                "maps": [{o: list(a.at(o)) for o in site.cat.objects} for a in homs]}
    return OK


def cmd_supercompact(args, out):
    site = _site(args)
    sc = sh.supercompact_category(site)
    cat = sc.category
    out.say(f"{len(cat.objects)} supercompact objects, {len(cat.morphisms)} morphisms")
    for o in cat.objects:
        sizes = sc.sheaves[o].sizes
        out.say(f"  {o}: " + ", ".join(f"{c}={sizes[c]}" for c in site.cat.objects))
    for m in cat.morphisms:
        if not cat.is_identity(m):
            out.say(f"  {m}: {cat.dom[m]} -> {cat.cod[m]}")
    out.data = emit_category(cat)
    return OK


def cmd_quotient_site(args, out):
    site = _site(args)
    cong = st.canonical_congruence(site)
    merged = [(m, r) for m, r in cong.classes.items() if m != r]
    out.say(f"{len(merged)} morphisms identified with a representative")
    for m, r in merged:
        out.say(f"  {m} ~ {r}")
    doc = emit_site(cong.quotient)
    out.say(dumps(doc).rstrip("\n"))
    out.data = {"classes": cong.classes, "quotient": doc}
    return OK


def cmd_morphism_check(args, out):
    subj = _subject(args.file)
    if not isinstance(subj.obj, tuple):
        raise InputError("morphism-check needs a functor document")
    F, src, tgt = subj.obj
    rep = st.is_morphism_of_sites(F, src, tgt)
    co, cw = st.is_comorphism_of_sites(F, src, tgt)
    for n, v in rep.conditions.items():
        out.say(f"condition {n}: {'holds' if v else 'fails'}")
    out.say(f"morphism of sites: {'yes' if rep.ok else 'no'}")
    if rep.witness:
        out.say(f"  first failure: condition {rep.witness[0]} at {cl.format_witness(rep.witness[1])}")
    out.say(f"comorphism of sites: {'yes' if co else 'no'}")
    if cw:
        out.say(f"  fails to lift the minimal cover of {cw[0]}")
    out.data = {"conditions": {str(k): v for k, v in rep.conditions.items()}, "morphism": rep.ok,
                "comorphism": co}
    return OK if rep.ok else FAILED


def cmd_spectrum(args, out):
    S = _need(_subject(args.file), du.JoinSemilattice, "a join semilattice document")
    ok, w = du.is_distributive(S)
    if not ok:
        out.say(f"not distributive: witness ({', '.join(w)})")
        out.data = {"distributive": False, "witness": list(w)}
        return FAILED
    sp = du.spectrum(S)
    out.say(f"{len(sp.points)} prime filters")
    for i, P in enumerate(sp.points):
        out.say(f"  p{i}: {{{', '.join(sorted(P, key=S.poset.index))}}}")
    for s in S.elements:
        out.say(f"  open({s}) = {{{', '.join(f'p{i}' for i in sorted(sp.opens[s]))}}}")
    out.data = {"distributive": True,
                "points": [sorted(P, key=S.poset.index) for P in sp.points],
                "opens": {s: sorted(sp.opens[s]) for s in S.elements}}
    return OK


def cmd_stone(args, out):
    S = _need(_subject(args.file), du.JoinSemilattice, "a join semilattice document")
    r = du.stone_round_trip(S)
    out.say("round trip: ok" if r.ok else f"round trip failed: {r.note}")
    out.data = {"ok": r.ok, "mapping": r.mapping, "note": r.note}
    return OK if r.ok else FAILED


def cmd_alexandroff(args, out):
    subj = _subject(args.file)
    P = subj.obj.poset if isinstance(subj.obj, du.JoinSemilattice) else _need(subj, du.FinPoset, "a poset")
    r = du.alexandroff_round_trip(P)
    out.say("round trip: ok" if r.ok else f"round trip failed: {r.note}")
    out.data = {"ok": r.ok, "mapping": r.mapping, "note": r.note}
    return OK if r.ok else FAILED


ENUMERATORS = {
    "poset": du.enumerate_posets,
    "jsl": du.enumerate_join_semilattices,
    "distributive": du.enumerate_distributive,
}


def cmd_enumerate(args, out):
    gen = ENUMERATORS[args.kind]
    out.data = {"kind": args.kind, "counts": {}, "documents": []}
    for n in range(args.min_size, args.max_size + 1):
        found = gen(n)
        out.say(f"size {n}: {len(found)}")
        out.data["counts"][str(n)] = len(found)
        if args.documents:
            out.data["documents"].extend(emit(x) for x in found)
    if not args.documents:
        del out.data["documents"]
    return OK


def cmd_corpus(args, out):
    opts = Options(args.funnel_cap, args.coproduct_bound, args.dir)
    outcomes = run_corpus(None, args.parallel, opts)
    text = report_text(outcomes)
    out.lines = text.rstrip("\n").split("\n")
    out.data = {"summary": summarize(outcomes),
                "outcomes": [dict(entry=o.entry, check=o.check, args=o.args, expected=o.expected,
                                  got=o.got, status=o.status, provenance=o.provenance)
                             for o in outcomes]}
    return exit_code(outcomes)


# ---------------------------------------------------------------------------
# parser

def build_parser():
    p = argparse.ArgumentParser(prog="finsites", description=(
        "Finite sites: stable classes, arches, sheafification, classifiers and the "
        "localic dualities, checked on finite examples."))
    p.add_argument("--json", action="store_true", help="emit a machine-readable document")
    p.add_argument("--funnel-cap", type=int, default=cl.DEFAULT_FUNNEL_CAP,
                   help="largest number of funnels examined per object before a verdict is inconclusive")
    p.add_argument("--coproduct-bound", type=int, default=DEFAULT_COPRODUCT_BOUND,
                   help="largest number of tops in generated coproduct-shaped diagrams")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_text, file=True, objects=False):
        sp = sub.add_parser(name, help=help_text)
        if objects:
            sp.add_argument("A")
            sp.add_argument("B")
        if file:
            sp.add_argument("file", help="JSON document or bundled corpus entry name")
        sp.set_defaults(fn=fn, objects_needed=objects)
        return sp

    add("validate", cmd_validate, "parse a document and run its load-time checks")
    add("classify", cmd_classify, "decide the category-level properties")
    add("arch-homs", cmd_arch_homs, "count arch components from A to B", objects=True)
    add("sheaf-homs", cmd_sheaf_homs, "count sheaf maps between representables", objects=True)
    add("supercompact-category", cmd_supercompact, "supercompact objects of the sheaf topos")
    add("quotient-site", cmd_quotient_site, "quotient by the canonical congruence")
    add("morphism-check", cmd_morphism_check, "check a functor as a (co)morphism of sites")
    add("spectrum", cmd_spectrum, "prime filters of a distributive join semilattice")
    add("stone-roundtrip", cmd_stone, "recover a semilattice from its spectrum")
    add("alexandroff-roundtrip", cmd_alexandroff, "recover a poset from its downset frame")
    e = add("enumerate", cmd_enumerate, "enumerate small orders up to isomorphism", file=False)
    e.add_argument("--kind", choices=sorted(ENUMERATORS), default="poset")
    e.add_argument("--max-size", type=int, default=4)
    e.add_argument("--min-size", type=int, default=0)
    e.add_argument("--documents", action="store_true", help="include the documents in --json output")
    c = add("corpus", cmd_corpus, "evaluate the bundled corpus", file=False)
    c.add_argument("--parallel", type=int, default=1, metavar="N")
    c.add_argument("--dir", default=None, help="evaluate another corpus directory")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.objects_needed:
        args.objects = [args.A, args.B]
    out = Output(args.json)
    try:
        code = args.fn(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for issue in (exc.issues or [])[1:6]:
            print(f"  {issue}", file=sys.stderr)
        return INPUT_ERROR
    except fc.CategoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
