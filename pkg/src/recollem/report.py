"""Verification reports: one boolean per clause, a witness for each failure."""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional


def jsonable(value):
    """Convert report payloads (tuples, field elements, nested dicts) to plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, float):
        return value
    return str(value)


class Report:
    def __init__(self, kind: str, params: Optional[Dict[str, Any]] = None):
        self.kind = kind
        self.params = dict(params or {})
        self.clauses: List[Dict[str, Any]] = []
        self.data: Dict[str, Any] = {}
        self.status: Optional[str] = None

    def clause(self, name: str, holds: bool, witness=None, **detail) -> bool:
        entry = {"name": name, "holds": bool(holds)}
        if not holds and witness is not None:
            entry["witness"] = witness
        if detail:
            entry["detail"] = detail
        self.clauses.append(entry)
        return bool(holds)

    def get(self, name: str) -> Optional[Dict[str, Any]]:
        for c in self.clauses:
            if c["name"] == name:
                return c
        return None

    @property
    def holds(self) -> bool:
        return self.status in (None, "ok") and all(c["holds"] for c in self.clauses)

    def to_json(self) -> Dict[str, Any]:
        out = {
            "kind": self.kind,
            "params": self.params,
            "holds": self.holds,
            "clauses": self.clauses,
        }
        if self.status is not None:
            out["status"] = self.status
        if self.data:
            out["data"] = self.data
        return jsonable(out)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def to_markdown(self) -> str:
        lines = [f"# {self.kind} report", ""]
        for k in sorted(self.params):
            lines.append(f"- {k}: `{jsonable(self.params[k])}`")
        if self.status is not None:
            lines.append(f"- status: {self.status}")
        lines.append(f"- overall: {'PASS' if self.holds else 'FAIL'}")
        lines += ["", "| clause | result | witness |", "|---|---|---|"]
        for c in self.clauses:
            w = c.get("witness")
            w = "" if w is None else json.dumps(jsonable(w), sort_keys=True)
            lines.append(f"| {c['name']} | {'pass' if c['holds'] else 'FAIL'} | {w} |")
        if self.data:
            lines += ["", "```json", json.dumps(jsonable(self.data), sort_keys=True, indent=2), "```"]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"Report({self.kind!r}, holds={self.holds}, clauses={len(self.clauses)})"
