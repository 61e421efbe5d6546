"""Regenerate golden/*.json from golden/manifest.json.  Run from the repository root."""

import json
import sys
from pathlib import Path

from recollem.cli import run

root = Path(__file__).resolve().parent.parent
cases = json.loads((root / "golden" / "manifest.json").read_text())
for case in cases:
    out = root / "golden" / f"{case['name']}.{case.get('suffix', 'json')}"
    code = run(case["argv"] + ["--report", str(out)])
    if code != case.get("exit", 0):
        sys.exit(f"{case['name']}: exit {code}, expected {case.get('exit', 0)}")
    print(out.relative_to(root))
