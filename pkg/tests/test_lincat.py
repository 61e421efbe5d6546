import copy
import json
import random
from itertools import product

import networkx as nx
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES
from recollem.errors import InfiniteDimensionError, LookupFailure, PreconditionError, SchemaError
from recollem.exactla import GF, QQ
from recollem.generators import random_category
from recollem.idempotent import algebra_from_table
from recollem.io import category_from_json, category_to_json
from recollem.lincat import (
    full_subcategory,
    from_quiver,
    opposite,
    peirce_category,
    unit_category,
    validate_category,
)


def test_unit_category_is_valid():
    c = unit_category()
    assert c.homdim("*", "*") == 1
    assert validate_category(c).valid


def test_a2_is_valid(a2):
    assert validate_category(a2).valid
    assert (a2.homdim("1", "2"), a2.homdim("2", "1")) == (1, 0)


def test_perturbed_unit_law_is_reported():
    data = json.loads((FIXTURES / "a2.json").read_text())
    bad = copy.deepcopy(data)
    bad["comp"]["1->1->2"] = [[["2"]]]
    report = validate_category(category_from_json(bad, QQ))
    assert not report.valid
    assert "unit" in {v.kind for v in report.violations}


def test_comp_shape_mismatch_is_schema_error():
    data = json.loads((FIXTURES / "a2.json").read_text())
    data["comp"]["1->1->2"] = [[["1", "0"]]]
    with pytest.raises(SchemaError):
        category_from_json(data, QQ)


def test_single_vertex_quiver_is_unit():
    c = from_quiver(["x"], [])
    assert c.homdim("x", "x") == 1 and validate_category(c).valid


def test_a3_relation_kills_long_path(a3, a3rel):
    assert a3.homdim("1", "3") == 1
    assert a3rel.homdim("1", "3") == 0
    assert a3rel.homdim("1", "2") == 1


def test_loop_without_relation_is_infinite():
    with pytest.raises(InfiniteDimensionError):
        from_quiver(["1"], [("x", "1", "1")])


def test_nilpotent_loop_is_finite():
    c = from_quiver(["1"], [("x", "1", "1")], [{"x.x.x": 1}])
    assert c.homdim("1", "1") == 3
    assert validate_category(c).valid


def _path_counts(verts, arrows):
    g = nx.MultiDiGraph()
    g.add_nodes_from(verts)
    for _, s, t in arrows:
        g.add_edge(s, t)
    counts = {}
    for a, b in product(verts, repeat=2):
        if a == b:
            counts[a, b] = 1
        else:
            counts[a, b] = sum(1 for _ in nx.all_simple_edge_paths(g, a, b))
    return counts


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_path_category_hom_dims_match_path_counts(n, seed):
    rng = random.Random(seed)
    verts = [str(i) for i in range(n)]
    arrows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(rng.randint(0, 1)):
                arrows.append((f"e{i}{j}{k}", verts[i], verts[j]))
    c = from_quiver(verts, arrows)
    expected = _path_counts(verts, arrows)
    assert {(a, b): c.homdim(a, b) for a, b in product(verts, repeat=2)} == expected
    assert validate_category(c).valid


@given(st.integers(0, 2**32 - 1), st.sampled_from([QQ, GF(2), GF(3)]))
def test_random_quiver_categories_validate(seed, field):
    c = random_category(random.Random(seed), field)
    assert validate_category(c).valid
    assert opposite(opposite(c)) == c
    assert validate_category(opposite(c)).valid


def test_opposite_involution_on_a3(a3):
    assert category_to_json(opposite(opposite(a3))) == category_to_json(a3)
    op = opposite(a3)
    assert op.homdim("3", "1") == 1 and op.homdim("1", "3") == 0


def test_full_subcategory(a2):
    whole = category_to_json(full_subcategory(a2, ["1", "2"]))
    mine = category_to_json(a2)
    assert {k: whole[k] for k in ("objects", "hom", "comp", "id")} == {k: mine[k] for k in ("objects", "hom", "comp", "id")}
    s = full_subcategory(a2, ["2"])
    assert s.objects == ("2",) and s.homdim("2", "2") == 1
    with pytest.raises(LookupFailure):
        full_subcategory(a2, ["9"])


# -- Peirce ----------------------------------------------------------------

def _corner_dims_by_matrices(mats, e):
    """dim of yRx computed from actual matrices, independent of the structure constants."""
    one = sympy.eye(e.shape[0])
    f = one - e
    idem = {"E": e, "E*": f}
    out = {}
    for x, y in product(("E", "E*"), repeat=2):
        vecs = [list(idem[y] * m * idem[x]) for m in mats]
        out[x, y] = sympy.Matrix(vecs).rank() if vecs else 0
    return out


def test_peirce_ut2(ut2):
    c = peirce_category(ut2)
    E11 = sympy.Matrix([[1, 0], [0, 0]])
    E12 = sympy.Matrix([[0, 1], [0, 0]])
    E22 = sympy.Matrix([[0, 0], [0, 1]])
    expected = _corner_dims_by_matrices([E11, E12, E22], E11)
    assert expected == {("E", "E"): 1, ("E*", "E"): 1, ("E", "E*"): 0, ("E*", "E*"): 1}
    assert {(x, y): c.homdim(x, y) for x, y in expected} == expected
    assert validate_category(c).valid


def test_peirce_kxk(kxk):
    c = peirce_category(kxk)
    assert c.homdim("E", "E") == 1 and c.homdim("E*", "E*") == 1
    assert c.homdim("E", "E*") == 0 and c.homdim("E*", "E") == 0


def test_peirce_k_with_unit_idempotent():
    alg = algebra_from_table(QQ, "k", 1, {(0, 0): {0: 1}}, [1], [1])
    c = peirce_category(alg)
    assert c.homdim("E", "E") == 1
    assert c.homdim("E*", "E*") == 0 and c.homdim("E", "E*") == 0 and c.homdim("E*", "E") == 0


def test_non_idempotent_is_rejected(ut2):
    alg = algebra_from_table(QQ, "UT2", 3,
                             {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}},
                             [1, 0, 1], [2, 0, 0])
    with pytest.raises(PreconditionError):
        peirce_category(alg)


@pytest.mark.parametrize("n", [2, 3])
def test_peirce_total_dimension_is_dim_r(n):
    from recollem.idempotent import upper_triangular
    for k in range(n):
        alg = upper_triangular(QQ, n, idem_index=k)
        c = peirce_category(alg)
        assert sum(c.homdim(x, y) for x, y in product(c.objects, repeat=2)) == alg.dim
