"""JSON documents for categories, sites, posets, semilattices and functors.

`parse` turns a document (a dict) into a library object and `emit` produces
the canonical document; ``emit(parse(d)) == d`` for canonical documents.
"""

import json
import os

import jsonschema

from .duality import FinPoset, JoinSemilattice, OrderError
from .fincat import CategoryError, FiniteCategory, Functor, check_functor
from .site import FGSite, PrincipalSite


class InputError(CategoryError):
    """A document that cannot be parsed or fails validation."""


class SchemaError(InputError):
    """The document does not match the published schema; the message names the path."""


class LawError(InputError):
    """The document parses but violates a category, order or stability law."""


_ID = {"type": "string", "minLength": 1}
_IDS = {"type": "array", "items": _ID}
_PAIR = {"type": "array", "items": _ID, "minItems": 2, "maxItems": 2}
_TRIPLE = {"type": "array", "items": _ID, "minItems": 3, "maxItems": 3}

CATEGORY_SCHEMA = {
    "type": "object",
    "required": ["objects", "morphisms", "identities"],
    "properties": {
        "kind": {"const": "category"},
        "objects": _IDS,
        "morphisms": {"type": "array", "items": {
            "type": "object", "required": ["name", "dom", "cod"],
            "properties": {"name": _ID, "dom": _ID, "cod": _ID}}},
        "identities": {"type": "object", "additionalProperties": _ID},
        "composition": {"type": "array", "items": _TRIPLE},
    },
}

POSET_SCHEMA = {
    "type": "object",
    "required": ["elements", "leq"],
    "properties": {"kind": {"enum": ["poset", "semilattice"]}, "elements": _IDS,
                   "leq": {"type": "array", "items": _PAIR}},
}

SEMILATTICE_SCHEMA = {
    "type": "object",
    "required": ["elements", "leq"],
    "properties": dict(POSET_SCHEMA["properties"], bottom=_ID,
                       join={"type": "array", "items": _TRIPLE}),
}

SITE_SCHEMA = {
    "type": "object",
    "required": ["category"],
    "properties": {
        "kind": {"const": "site"},
        "category": {"type": "object"},
        "stable_class": _IDS,
        "stable_families": {"type": "array", "items": {"oneOf": [
            _IDS,
            {"type": "object", "required": ["cod", "members"],
             "properties": {"cod": _ID, "members": _IDS}}]}},
        "empty_covered": _IDS,
    },
    "oneOf": [{"required": ["stable_class"]}, {"required": ["stable_families"]}],
}

FUNCTOR_SCHEMA = {
    "type": "object",
    "required": ["source", "target", "on_objects", "on_morphisms"],
    "properties": {
        "kind": {"const": "functor"},
        "source": {"type": ["object", "string"]},
        "target": {"type": ["object", "string"]},
        "on_objects": {"type": "object", "additionalProperties": _ID},
        "on_morphisms": {"type": "object", "additionalProperties": _ID},
    },
}

SCHEMAS = {"category": CATEGORY_SCHEMA, "poset": POSET_SCHEMA, "semilattice": SEMILATTICE_SCHEMA,
           "site": SITE_SCHEMA, "functor": FUNCTOR_SCHEMA}


def check_schema(doc, kind, where="$"):
    errors = sorted(jsonschema.Draft202012Validator(SCHEMAS[kind]).iter_errors(doc),
                    key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        issues = [f"{_path(where, e.absolute_path)}: {e.message}" for e in errors]
        raise SchemaError(f"{kind} document does not match the schema: {issues[0]}", issues)


def _path(where, parts):
    out = where
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def infer_kind(doc):
    if not isinstance(doc, dict):
        raise SchemaError("$: document must be a JSON object")
    if "kind" in doc:
        return doc["kind"]
    if "input" in doc and "expect" in doc:
        return "entry"
    if "on_objects" in doc:
        return "functor"
    if "stable_class" in doc or "stable_families" in doc:
        return "site"
    if "morphisms" in doc:
        return "category"
    if "join" in doc:
        return "semilattice"
    if "leq" in doc:
        return "poset"
    raise SchemaError("$: cannot tell what kind of document this is")


# -- categories ---------------------------------------------------------------

def parse_category(doc, check=True, where="$"):
    check_schema(doc, "category", where)
    ms = [(m["name"], m["dom"], m["cod"]) for m in doc["morphisms"]]
    comp = {}
    for g, f, h in doc.get("composition", []):
        if (g, f) in comp and comp[(g, f)] != h:
            raise LawError(f"conflicting composites at ({g}, {f})")
        comp[(g, f)] = h
    try:
        return FiniteCategory(doc["objects"], ms, dict(doc["identities"]), comp, check=check)
    except CategoryError as exc:
        raise LawError(str(exc), exc.issues) from None


def emit_category(cat):
    comp = [[g, f, h] for g, f, h in cat.composition_table()
            if not cat.is_identity(g) and not cat.is_identity(f)]
    return {
        "kind": "category",
        "objects": list(cat.objects),
        "morphisms": [{"name": m, "dom": cat.dom[m], "cod": cat.cod[m]} for m in cat.morphisms],
        "identities": {o: cat.identity[o] for o in cat.objects},
        "composition": comp,
    }


# -- sites --------------------------------------------------------------------

def parse_site(doc, check=True, where="$"):
    check_schema(doc, "site", where)
    inner = doc["category"]
    if infer_kind(inner) == "category":
        cat = parse_category(inner, where=where + ".category")
    else:
        cat = parse_poset(inner, where=where + ".category").category()
    flagged = doc.get("empty_covered", [])
    _known(flagged, cat.objects, where + ".empty_covered")
    try:
        if "stable_families" in doc:
            fams = []
            for n, f in enumerate(doc["stable_families"]):
                members = f["members"] if isinstance(f, dict) else f
                _known(members, cat.dom, f"{where}.stable_families[{n}]")
                if isinstance(f, dict):
                    _known([f["cod"]], cat.objects, f"{where}.stable_families[{n}].cod")
                    fams.append((f["cod"], list(members)))
                elif not f:
                    raise SchemaError(f"{where}.stable_families[{n}]: an empty family needs a codomain; "
                                      "list the object under empty_covered")
                else:
                    fams.append((cat.cod[f[0]], list(f)))
            return FGSite(cat, fams, flagged, check=check)
        _known(doc["stable_class"], cat.dom, where + ".stable_class")
        return PrincipalSite(cat, doc["stable_class"], flagged, check=check)
    except CategoryError as exc:
        if isinstance(exc, InputError):
            raise
        raise LawError(str(exc), exc.issues) from None


def _known(ids, universe, where):
    for n, x in enumerate(ids):
        if x not in universe:
            raise SchemaError(f"{where}[{n}]: unknown id {x!r}")


def emit_site(site):
    cat = site.cat
    doc = {"kind": "site", "category": emit_category(cat)}
    if isinstance(site, PrincipalSite):
        doc["stable_class"] = cat.sort_morphisms(site.tclass)
    else:
        fams = [(c, F) for c, F in site.family_class if F]
        fams.sort(key=lambda cf: (cat.obj_index(cf[0]), len(cf[1]), [cat.mor_index(m) for m in cf[1]]))
        doc["stable_families"] = [list(F) for _, F in fams]
    doc["empty_covered"] = sorted(site.empty_covered, key=cat.obj_index)
    return doc


# -- orders -------------------------------------------------------------------

def parse_poset(doc, where="$"):
    check_schema(doc, "poset", where)
    for n, pair in enumerate(doc["leq"]):
        _known(pair, doc["elements"], f"{where}.leq[{n}]")
    try:
        return FinPoset(doc["elements"], [tuple(p) for p in doc["leq"]])
    except OrderError as exc:
        raise LawError(str(exc), exc.issues) from None


def emit_poset(P):
    return {"kind": "poset", "elements": list(P.elements), "leq": [list(p) for p in P.strict_pairs()]}


def parse_semilattice(doc, where="$"):
    check_schema(doc, "semilattice", where)
    P = parse_poset(doc, where)
    join = None
    if "join" in doc:
        join = {}
        for a, b, j in doc["join"]:
            join[(a, b)] = join[(b, a)] = j
        for a in P.elements:
            join.setdefault((a, a), a)
    try:
        return JoinSemilattice(P, doc.get("bottom"), join)
    except OrderError as exc:
        raise LawError(str(exc), exc.issues) from None


def emit_semilattice(S):
    doc = emit_poset(S.poset)
    doc["kind"] = "semilattice"
    doc["bottom"] = S.bottom
    els = S.elements
    doc["join"] = [[a, b, S.join(a, b)] for i, a in enumerate(els) for b in els[i + 1:]]
    return doc


# -- functors -----------------------------------------------------------------

def _resolve(ref, base):
    if isinstance(ref, str):
        path = ref if os.path.isabs(ref) else os.path.join(base or ".", ref)
        return load(path), os.path.dirname(path)
    return ref, base


def parse_functor(doc, base=None):
    """Functor document: source and target are site documents or paths."""
    check_schema(doc, "functor")
    src_doc, _ = _resolve(doc["source"], base)
    tgt_doc, _ = _resolve(doc["target"], base)
    src, tgt = _as_site(parse(src_doc)), _as_site(parse(tgt_doc))
    on_obj, on_mor = doc["on_objects"], dict(doc["on_morphisms"])
    for o, i in src.cat.identity.items():
        if o in on_obj and on_obj[o] in tgt.cat.identity:
            on_mor.setdefault(i, tgt.cat.identity[on_obj[o]])
    # a morphism with only one possible image may be left out
    for m in src.cat.morphisms:
        a, b = on_obj.get(src.cat.dom[m]), on_obj.get(src.cat.cod[m])
        if m not in on_mor and a in tgt.cat.identity and b in tgt.cat.identity:
            hs = tgt.cat.hom(a, b)
            if len(hs) == 1:
                on_mor[m] = hs[0]
    F = Functor(src.cat, tgt.cat, on_obj, on_mor)
    issues = check_functor(F)
    if issues:
        raise LawError(f"not a functor: {issues[0]}", issues)
    return F, src, tgt


def _as_site(x):
    from .duality import finite_join_site
    from .site import trivial_site
    if isinstance(x, FiniteCategory):
        return trivial_site(x)
    if isinstance(x, JoinSemilattice):
        return finite_join_site(x)
    if isinstance(x, FinPoset):
        return trivial_site(x.category())
    return x


def emit_functor(F, src, tgt):
    return {"kind": "functor", "source": emit(src), "target": emit(tgt),
            "on_objects": {o: F.obj[o] for o in F.source.objects},
            "on_morphisms": {m: F.mor[m] for m in F.source.morphisms}}


# -- dispatch -----------------------------------------------------------------

def parse(doc, base=None):
    kind = infer_kind(doc)
    if kind == "category":
        return parse_category(doc)
    if kind == "site":
        return parse_site(doc)
    if kind == "poset":
        return parse_poset(doc)
    if kind == "semilattice":
        return parse_semilattice(doc)
    if kind == "functor":
        return parse_functor(doc, base)
    if kind == "entry":
        return parse(doc["input"], base)
    raise SchemaError(f"$.kind: unknown document kind {kind!r}")


def emit(obj):
    if isinstance(obj, FiniteCategory):
        return emit_category(obj)
    if isinstance(obj, (PrincipalSite, FGSite)):
        return emit_site(obj)
    if isinstance(obj, JoinSemilattice):
        return emit_semilattice(obj)
    if isinstance(obj, FinPoset):
        return emit_poset(obj)
    raise TypeError(f"cannot emit {type(obj).__name__}")


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def dumps(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n"
