"""Replay every committed golden report and compare bytes."""

import json

import pytest

from conftest import GOLDEN, ROOT
from recollem.cli import run

CASES = json.loads((GOLDEN / "manifest.json").read_text())


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(case, tmp_path, monkeypatch):
    monkeypatch.chdir(ROOT)
    suffix = case.get("suffix", "json")
    expected = (GOLDEN / f"{case['name']}.{suffix}").read_bytes()
    for k in range(2):
        out = tmp_path / f"{k}.{suffix}"
        assert run(case["argv"] + ["--report", str(out)]) == case.get("exit", 0)
        assert out.read_bytes() == expected


def test_every_golden_file_is_in_the_manifest():
    listed = {f"{c['name']}.{c.get('suffix', 'json')}" for c in CASES} | {"manifest.json"}
    assert {p.name for p in GOLDEN.iterdir()} == listed
