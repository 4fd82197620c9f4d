import os

import pytest
from hypothesis import settings

from finsites import duality as du, fincat as fc, site as st
from finsites.corpus import Subject, entry_paths, load_entry

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def _entries():
    return [load_entry(p) for p in entry_paths()]


ENTRIES = _entries()
SITE_ENTRIES = [e for e in ENTRIES if e["input"].get("kind") == "site"]
CATEGORY_SUBJECTS = {e["name"]: Subject(e["input"]) for e in SITE_ENTRIES}


def corpus_site(name):
    return Subject(next(e for e in ENTRIES if e["name"] == name)["input"]).site


@pytest.fixture(params=[e["name"] for e in SITE_ENTRIES])
def corpus_site_entry(request):
    return request.param, corpus_site(request.param)


def category(objs, gens, comp):
    ms = [(f"id_{o}", o, o) for o in objs] + list(gens)
    return fc.FiniteCategory(objs, ms, {o: f"id_{o}" for o in objs}, comp)


def parallel_pair():
    return category(["A", "B"], [("f", "A", "B"), ("g", "A", "B")], {})


def diamond():
    return du.FinPoset(["0", "a", "b", "1"],
                       [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1"), ("0", "1")])


def corpus_file(name):
    return os.path.join(os.path.dirname(entry_paths()[0]), name + ".json")
