import json
import re
import shutil

import pytest

from finsites import formats as fm
from finsites.cli import main
from finsites.corpus import entry_paths

from conftest import corpus_file, parallel_pair


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_site(capsys):
    code, out, _ = run(capsys, "validate", "diamond_coalescent")
    assert code == 0
    assert out.startswith("valid site: 4 objects, 9 morphisms")


def test_validate_json(capsys):
    code, out, _ = run(capsys, "--json", "validate", corpus_file("chain3"))
    assert code == 0
    doc = json.loads(out)
    assert doc["valid"] and doc["objects"] == 3


def test_arch_and_sheaf_homs_agree(capsys):
    _, a, _ = run(capsys, "arch-homs", "A", "B", "parallel_pair")
    _, s, _ = run(capsys, "sheaf-homs", "A", "B", "parallel_pair")
    assert a.splitlines()[0] == s.splitlines()[0] == "2"


def test_unknown_object_is_an_input_error(capsys):
    code, _, err = run(capsys, "arch-homs", "A", "Z", "parallel_pair")
    assert code == 2 and "unknown object 'Z'" in err


def test_supercompact_category_of_parallel_pair(capsys):
    code, out, _ = run(capsys, "--json", "supercompact-category", "parallel_pair")
    assert code == 0
    assert json.loads(out)["objects"] == ["A", "B", "B/1"]


def test_classify_reports_witness(capsys):
    code, out, _ = run(capsys, "classify", "diamond")
    assert code == 0
    assert "positive: false (witness: (a, a))" in out


def test_classify_inconclusive_exit_code(capsys):
    code, out, _ = run(capsys, "--funnel-cap", "1", "classify", "tworel_C")
    assert code == 3 and "inconclusive" in out


def test_quotient_site(capsys):
    code, out, _ = run(capsys, "--json", "quotient-site", "congruence")
    assert code == 0
    doc = json.loads(out)
    assert doc["classes"]["v"] == "u"
    assert len(doc["quotient"]["category"]["morphisms"]) == 6


def test_morphism_check_exit_codes(capsys):
    code, out, _ = run(capsys, "morphism-check", "functor_antichain_to_point")
    assert code == 1 and "condition 3: fails" in out
    code, out, _ = run(capsys, "morphism-check", "functor_diamond_to_point")
    assert code == 0 and "morphism of sites: yes" in out


def test_spectrum_and_stone(capsys):
    code, out, _ = run(capsys, "spectrum", "diamond_lattice")
    assert code == 0 and out.startswith("2 prime filters")
    code, out, _ = run(capsys, "spectrum", "njsl5")
    assert code == 1 and "witness (c, a, b)" in out
    assert run(capsys, "stone-roundtrip", "diamond_lattice")[0] == 0
    assert run(capsys, "stone-roundtrip", "njsl5")[0] == 1
    assert run(capsys, "alexandroff-roundtrip", "njsl5")[0] == 0


def test_spectrum_needs_a_semilattice(capsys):
    code, _, err = run(capsys, "spectrum", "parallel_pair")
    assert code == 2 and "join semilattice" in err


def test_enumerate_counts(capsys):
    code, out, _ = run(capsys, "--json", "enumerate", "--kind", "distributive", "--min-size", "1", "--max-size", "6")
    assert code == 0
    assert json.loads(out)["counts"] == {"1": 1, "2": 1, "3": 1, "4": 2, "5": 3, "6": 5}


def test_schema_and_law_errors_exit_2(capsys, tmp_path):
    bad_schema = tmp_path / "s.json"
    bad_schema.write_text(json.dumps({"objects": "A", "morphisms": [], "identities": {}}))
    code, _, err = run(capsys, "validate", str(bad_schema))
    assert code == 2 and "$.objects" in err
    doc = fm.emit(parallel_pair())
    doc["composition"] = [["f", "id_A", "g"]]
    bad_law = tmp_path / "l.json"
    bad_law.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", str(bad_law))
    assert code == 2 and err.startswith("error:")


def test_missing_file_exit_2(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/file.json")
    assert code == 2 and "cannot read" in err


def test_corpus_passes(capsys):
    code, out, _ = run(capsys, "corpus")
    assert code == 0
    assert re.fullmatch(r"(\d+) expectations: \1 passed, 0 failed, 0 inconclusive, 0 errors",
                        out.splitlines()[-1])


def test_corpus_reports_failure(capsys, tmp_path):
    for p in entry_paths():
        shutil.copy(p, tmp_path)
    doc = json.loads((tmp_path / "point.json").read_text())
    doc["expect"].append({"check": "supercompact_count", "value": 99, "provenance": "trivial"})
    (tmp_path / "point.json").write_text(json.dumps(doc))
    code, out, _ = run(capsys, "corpus", "--dir", str(tmp_path))
    assert code == 1
    assert "supercompact_count" in out and "99" in out


def test_corpus_parallel_output_is_identical(capsys):
    _, serial, _ = run(capsys, "corpus")
    _, parallel, _ = run(capsys, "corpus", "--parallel", "4")
    assert serial == parallel


@pytest.mark.parametrize("argv", [[], ["nope"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2
