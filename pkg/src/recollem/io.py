"""Reading and writing the JSON interchange files.

Categories come either in explicit form::

    {"name": "A2", "objects": ["1", "2"], "hom": {"1->2": 1, ...},
     "comp": {"a->b->c": [[[coeff_k for k] for j] for i]}, "id": {"a": [coeff]}}

where ``comp["a->b->c"][i][j][k]`` is the ``k``-th coordinate of ``g_j o f_i``,
or as a quiver::

    {"name": "A3", "quiver": {"vertices": [...], "arrows": [[name, src, tgt], ...],
                              "relations": [{"a.b": 1}], "nilpotency_bound": 8}}

Representations may be given explicitly or symbolically as
``{"simple": "1"}``, ``{"representable": "1"}`` or ``{"zero": true}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, List, Mapping, Union

from .complexes import Complex
from .errors import SchemaError
from .exactla import Field, Matrix
from .idempotent import Module, algebra_from_table
from .lincat import AlgebraWithIdempotent, LinCat, from_quiver
from .repcat import Rep, representable, simple, zero_rep


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} (line {e.lineno})", str(path)) from None


def _split(key: str, parts: int, path: str) -> List[str]:
    out = key.split("->")
    if len(out) != parts:
        raise SchemaError(f"bad key {key!r}", path)
    return out


def category_from_json(data: Mapping, field: Field) -> LinCat:
    if not isinstance(data, Mapping):
        raise SchemaError("category must be an object", "$")
    name = str(data.get("name", "C"))
    if "quiver" in data:
        q = data["quiver"]
        if not isinstance(q, Mapping) or "vertices" not in q:
            raise SchemaError("quiver needs 'vertices'", "$.quiver")
        return from_quiver(q["vertices"], q.get("arrows", []), q.get("relations", []),
                           nilpotency_bound=q.get("nilpotency_bound", 8), field=field, name=name)
    for key in ("objects", "hom", "comp", "id"):
        if key not in data:
            raise SchemaError(f"missing {key!r}", "$")
    objects = [str(o) for o in data["objects"]]
    hom = {}
    for key, d in data["hom"].items():
        a, b = _split(key, 2, "$.hom")
        if not isinstance(d, int) or isinstance(d, bool):
            raise SchemaError("hom dimension must be an integer", f"$.hom.{key}")
        hom[a, b] = d
    comp = {}
    for key, tensor in data["comp"].items():
        a, b, c = _split(key, 3, "$.comp")
        p = f"$.comp.{key}"
        hab, hbc, hac = hom.get((a, b), 0), hom.get((b, c), 0), hom.get((a, c), 0)
        if not isinstance(tensor, list) or len(tensor) != hab:
            raise SchemaError(f"expected {hab} rows of composites", p)
        cols = []
        for i, row in enumerate(tensor):
            if not isinstance(row, list) or len(row) != hbc:
                raise SchemaError(f"expected {hbc} composites", f"{p}[{i}]")
            for j, vec in enumerate(row):
                if not isinstance(vec, list) or len(vec) != hac:
                    raise SchemaError(f"expected {hac} coordinates", f"{p}[{i}][{j}]")
                cols.append([field(x) for x in vec])
        comp[a, b, c] = Matrix.from_columns(field, cols, hac) if cols else Matrix.zeros(field, hac, 0)
    ident = {str(a): [field(x) for x in v] for a, v in data["id"].items()}
    return LinCat(field, objects, hom, comp, ident, name=name)


def category_to_json(cat: LinCat) -> dict:
    objs = cat.objects
    hom = {f"{a}->{b}": cat.homdim(a, b) for a in objs for b in objs if cat.homdim(a, b)}
    comp = {}
    for a in objs:
        for b in objs:
            for c in objs:
                hab, hbc = cat.homdim(a, b), cat.homdim(b, c)
                if not (hab and hbc and cat.homdim(a, c)):
                    continue
                m = cat.comp(a, b, c)
                comp[f"{a}->{b}->{c}"] = [[[str(x) for x in m.column(i * hbc + j)] for j in range(hbc)]
                                          for i in range(hab)]
    ident = {a: [str(x) for x in cat.identity(a).column(0)] for a in objs}
    return {"name": cat.name, "objects": list(objs), "hom": hom, "comp": comp, "id": ident}


def algebra_from_json(data: Mapping, field: Field) -> AlgebraWithIdempotent:
    """``{"name", "dim", "mult": [[[c_k]]], "unit": [...], "idem": [...]}``; ``mult[i][j][k]`` is the
    ``k``-th coordinate of ``b_i b_j``."""
    if not isinstance(data, Mapping):
        raise SchemaError("algebra must be an object", "$")
    for key in ("dim", "mult", "unit", "idem"):
        if key not in data:
            raise SchemaError(f"missing {key!r}", "$")
    n = data["dim"]
    mult = data["mult"]
    if not isinstance(mult, list) or len(mult) != n:
        raise SchemaError(f"expected {n} rows", "$.mult")
    table = {}
    for i, row in enumerate(mult):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"expected {n} products", f"$.mult[{i}]")
        for j, vec in enumerate(row):
            if not isinstance(vec, list) or len(vec) != n:
                raise SchemaError(f"expected {n} coordinates", f"$.mult[{i}][{j}]")
            table[i, j] = {k: c for k, c in enumerate(vec) if field(c)}
    for key in ("unit", "idem"):
        if not isinstance(data[key], list) or len(data[key]) != n:
            raise SchemaError(f"expected {n} coordinates", f"$.{key}")
    return algebra_from_table(field, str(data.get("name", "R")), n, table, data["unit"], data["idem"])


def algebra_to_json(alg: AlgebraWithIdempotent) -> dict:
    n = alg.dim
    mult = [[[str(x) for x in alg.mult.column(i * n + j)] for j in range(n)] for i in range(n)]
    return {"name": alg.name, "dim": n, "mult": mult,
            "unit": [str(x) for x in alg.unit], "idem": [str(x) for x in alg.idem]}


def rep_from_json(cat: LinCat, data, path: str = "rep") -> Rep:
    if isinstance(data, Mapping):
        if "simple" in data:
            return simple(cat, str(data["simple"]))
        if "representable" in data:
            return representable(cat, str(data["representable"]))
        if data.get("zero"):
            return zero_rep(cat)
    return Rep.from_json(cat, data, path)


def reps_from_json(cat: LinCat, data, key: str = "reps") -> List[Rep]:
    items = data.get(key) if isinstance(data, Mapping) else data
    if not isinstance(items, list):
        raise SchemaError(f"expected a list of representations under {key!r}", "$")
    return [rep_from_json(cat, r, f"$.{key}[{k}]") for k, r in enumerate(items)]


def complexes_from_json(cat: LinCat, data) -> List[Complex]:
    """A list under ``"complexes"``; each entry is a complex or a representation with optional ``degree``."""
    items = data.get("complexes") if isinstance(data, Mapping) else data
    if not isinstance(items, list):
        raise SchemaError("expected a list under 'complexes'", "$")
    out = []
    for k, c in enumerate(items):
        p = f"$.complexes[{k}]"
        if isinstance(c, Mapping) and "terms" in c:
            out.append(Complex.from_json(cat, c, p))
        else:
            deg = c.get("degree", 0) if isinstance(c, Mapping) else 0
            body = {kk: vv for kk, vv in c.items() if kk != "degree"} if isinstance(c, Mapping) else c
            out.append(Complex.concentrated(rep_from_json(cat, body, p), int(deg)))
    return out


def modules_from_json(alg: AlgebraWithIdempotent, data) -> List[Module]:
    items = data.get("modules") if isinstance(data, Mapping) else data
    if not isinstance(items, list):
        raise SchemaError("expected a list under 'modules'", "$")
    return [Module.from_json(alg, m, f"$.modules[{k}]") for k, m in enumerate(items)]
