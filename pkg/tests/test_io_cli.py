import json
import subprocess
import sys

import pytest

from conftest import FIXTURES, ROOT
from recollem.cli import emit_report, run
from recollem.errors import SchemaError
from recollem.exactla import QQ
from recollem.io import category_from_json, category_to_json, load_json, rep_from_json
from recollem.report import Report


@pytest.fixture(autouse=True)
def at_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def report_of(tmp_path, argv, name="out.json"):
    path = tmp_path / name
    code = run(argv + ["--report", str(path)])
    return code, path


def test_category_round_trip():
    data = load_json(FIXTURES / "a3rel.json")
    cat = category_from_json(data, QQ)
    assert category_from_json(category_to_json(cat), QQ) == cat


def test_schema_error_has_path():
    data = load_json(FIXTURES / "a2.json")
    data["hom"]["1->2"] = "one"
    with pytest.raises(SchemaError) as err:
        category_from_json(data, QQ)
    assert "hom" in err.value.path


def test_rep_schema_error_has_path():
    cat = category_from_json(load_json(FIXTURES / "a2.json"), QQ)
    with pytest.raises(SchemaError) as err:
        rep_from_json(cat, {"dim": {"1": 1, "2": "x"}})
    assert err.value.path


def test_validate_exit_zero(tmp_path):
    code, path = report_of(tmp_path, ["validate", "fixtures/a2.json"])
    assert code == 0
    assert json.loads(path.read_text())["holds"] is True


def test_vcheck_pass_and_fail(tmp_path):
    code, path = report_of(tmp_path, ["vcheck", "fixtures/a2.json", "--s-objects", "2", "--q-objects", "1",
                                      "--suite", "fixtures/simples.json"])
    assert code == 0 and json.loads(path.read_text())["holds"] is True
    code, path = report_of(tmp_path, ["vcheck", "fixtures/a2.json", "--s-objects", "1", "--q-objects", "2",
                                      "--suite", "fixtures/simples.json"])
    body = json.loads(path.read_text())
    assert code == 2 and body["holds"] is False
    clause = body["reports"][0]["clauses"][0]
    assert clause["witness"]


def test_abrec_has_six_clauses(tmp_path):
    code, path = report_of(tmp_path, ["abrec", "fixtures/a2.json", "--sub", "2"])
    body = json.loads(path.read_text())
    assert code == 0 and len(body["reports"][0]["clauses"]) == 6
    assert body["tool"] == "recollem" and body["field"] == "q" and body["seed"] == 0


def test_bigthm_sections(tmp_path):
    code, path = report_of(tmp_path, ["bigthm", "fixtures/a3.json", "--s-objects", "1,3", "--q-objects", "1,2",
                                      "--complexes", "fixtures/a3_complexes.json"])
    names = [c["name"] for c in json.loads(path.read_text())["reports"][0]["clauses"]]
    assert code == 0 and names == ["h1", "t1", "t2", "t3", "t4", "t5", "t6"]


def test_input_errors_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["validate", str(bad)]) == 1
    assert run(["validate", "fixtures/nope.json"]) == 1
    assert run(["validate", "fixtures/a2.json", "--frobnicate"]) == 1
    assert run(["hom", "fixtures/a2.json"]) == 1
    assert run(["validate", "fixtures/a2.json", "--field", "fp:4"]) == 1
    assert run(["bogus"]) == 1
    assert "error" in capsys.readouterr().err


def test_unwritable_report(tmp_path):
    assert run(["validate", "fixtures/a2.json", "--report", str(tmp_path / "missing" / "x.json")]) == 1


def test_prime_field_flag(tmp_path):
    code, path = report_of(tmp_path, ["hom", "fixtures/a2.json", "fixtures/repr1_a2.json",
                                      "fixtures/simple2_a2.json", "--field", "fp:5"])
    assert code == 0 and json.loads(path.read_text())["field"] == "fp:5"


def test_reports_are_byte_identical(tmp_path):
    argv = ["derrec", "fixtures/a3rel.json", "--sub", "1,3", "--seed", "7"]
    _, p1 = report_of(tmp_path, argv, "a.json")
    _, p2 = report_of(tmp_path, argv, "b.json")
    assert p1.read_bytes() == p2.read_bytes()


def test_markdown_rendering(tmp_path):
    code, path = report_of(tmp_path, ["abrec", "fixtures/a2.json", "--sub", "2", "--format", "md"], "r.md")
    text = path.read_text()
    assert code == 0 and "| triangle_identities | pass |" in text


def test_emit_report_empty():
    meta = {"tool": "recollem", "version": "0", "command": "none", "field": "q", "seed": 0}
    body = json.loads(emit_report([], meta))
    assert body["reports"] == [] and body["holds"] is True
    assert emit_report([], meta, "md").startswith("<!--")


def test_report_witness_only_on_failure():
    r = Report("x")
    r.clause("good", True, witness=[1])
    r.clause("bad", False, witness=[2])
    assert "witness" not in r.get("good") and r.get("bad")["witness"] == [2]
    assert not r.holds


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "recollem", "validate", "fixtures/a2.json"],
                         cwd=ROOT, capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["holds"] is True


def test_size_cap_env(tmp_path, monkeypatch):
    monkeypatch.setenv("RECOLLEM_MAX_ENTRIES", "1")
    assert run(["abrec", "fixtures/a3rel.json", "--sub", "1,3", "--report", str(tmp_path / "x.json")]) == 1
