import pytest
import sympy
from sympy import GF as SGF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given
from hypothesis import strategies as st

from recollem.errors import FieldMismatchError, MatrixSizeError, SchemaError, ShapeError
from recollem.exactla import GF, QQ, Field, Matrix, decompose, kron, rank, solve


def M(rows, field=QQ):
    return Matrix.from_rows(field, [[field(x) for x in r] for r in rows])


def to_sympy(m):
    return sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(str(m.data[i][j])))


@st.composite
def int_matrices(draw, max_side=5, lo=-3, hi=3):
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r))
    return r, c, rows


def build(shape_rows, field=QQ):
    r, c, rows = shape_rows
    if r == 0:
        return Matrix.zeros(field, 0, c)
    return Matrix.from_rows(field, [[field(x) for x in row] for row in rows], c)


# -- fields ---------------------------------------------------------------

def test_field_parse():
    assert Field.parse("q") == QQ
    assert Field.parse("fp:7") == GF(7)
    with pytest.raises(SchemaError):
        Field.parse("fp:x")
    with pytest.raises(SchemaError):
        Field.parse("reals")


def test_field_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        Field(6)


def test_fp_normalizes_fractions():
    F = GF(5)
    assert F("1/2") == 3
    with pytest.raises(FieldMismatchError):
        F("1/5")


def test_mixing_fields_is_an_error():
    with pytest.raises(FieldMismatchError):
        M([[1]]) @ M([[1]], GF(3))


# -- decompose ------------------------------------------------------------

def test_zero_matrix():
    d = decompose(Matrix.zeros(QQ, 2, 2))
    assert d.rank == 0 and d.kernel_basis.cols == 2


def test_identity():
    d = decompose(Matrix.identity(QQ, 3))
    assert d.rank == 3
    assert d.kernel_basis.cols == 0
    assert d.cokernel_projection.rows == 0


def test_rank_one_kernel():
    d = decompose(M([[1, 2], [2, 4]]))
    assert d.rank == 1
    assert d.kernel_basis == M([[-2], [1]])


def test_cokernel_projection_kills_image():
    m = M([[1, 0], [0, 0], [1, 0]])
    d = decompose(m)
    assert d.cokernel_projection.rows == 2
    assert (d.cokernel_projection @ m).is_zero()
    assert d.cokernel_projection.rank() == 2


@given(int_matrices())
def test_decompose_matches_sympy(sm):
    m = build(sm)
    d = decompose(m)
    ref = to_sympy(m)
    assert d.rank == ref.rank()
    assert d.rank + d.kernel_basis.cols == m.cols
    assert (m @ d.kernel_basis).is_zero()
    assert d.kernel_basis.rank() == d.kernel_basis.cols
    assert d.cokernel_projection.rows == m.rows - d.rank
    assert (d.cokernel_projection @ m).is_zero()


@given(int_matrices())
def test_rank_of_transpose(sm):
    m = build(sm)
    assert rank(m) == rank(m.T)


@given(int_matrices(), st.sampled_from([2, 3, 7]))
def test_rank_mod_p_matches_sympy(sm, p):
    m = build(sm, GF(p))
    r, c, rows = sm
    if r == 0 or c == 0:
        assert rank(m) == 0
        return
    ref = DomainMatrix([[SGF(p)(x) for x in row] for row in rows], (r, c), SGF(p)).rank()
    assert rank(m) == ref


@given(int_matrices())
def test_decompose_is_deterministic(sm):
    a, b = decompose(build(sm)), decompose(build(sm))
    assert a == b


def test_size_cap(monkeypatch):
    monkeypatch.setenv("RECOLLEM_MAX_ENTRIES", "4")
    with pytest.raises(MatrixSizeError):
        decompose(Matrix.zeros(QQ, 3, 3))


# -- solve ----------------------------------------------------------------

def test_solve_identity():
    b = M([[1], [5]])
    assert solve(Matrix.identity(QQ, 2), b) == b


def test_solve_consistent():
    assert solve(M([[1], [2]]), M([[1], [2]])) == M([[1]])


def test_solve_inconsistent():
    assert solve(M([[1], [2]]), M([[1], [3]])) is None


def test_solve_shape_error():
    with pytest.raises(ShapeError):
        solve(M([[1], [2]]), M([[1]]))


@given(int_matrices(max_side=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_recovers_consistent_rhs(sm, xs):
    m = build(sm)
    if m.cols == 0:
        return
    x = Matrix.column_vector(QQ, [QQ(v) for v in xs[: m.cols]])
    b = m @ x
    sol = solve(m, b)
    assert sol is not None and m @ sol == b


# -- kron -----------------------------------------------------------------

def test_kron_identities():
    assert kron(Matrix.identity(QQ, 2), Matrix.identity(QQ, 3)) == Matrix.identity(QQ, 6)


def test_kron_scalars():
    assert kron(M([[2]]), M([[3]])) == M([[6]])


def test_kron_row_by_column():
    assert kron(M([[1, 0]]), M([[0], [1]])) == M([[0, 0], [1, 0]])


@given(int_matrices(max_side=3))
def test_kron_with_one(sm):
    m = build(sm)
    assert kron(m, M([[1]])) == m


@given(st.data())
def test_kron_mixed_product(data):
    def draw(r, c):
        return M([[data.draw(st.integers(-2, 2)) for _ in range(c)] for _ in range(r)])
    ra, ca, rb, cb, cc, cd = (data.draw(st.integers(1, 3)) for _ in range(6))
    a, b = draw(ra, ca), draw(rb, cb)
    c, d = draw(ca, cc), draw(cb, cd)
    assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)


def test_json_roundtrip_is_exact():
    m = M([["3/4", "-2"], ["0", "1/3"]])
    assert m.to_json() == [["3/4", "-2"], ["0", "1/3"]]
    assert Matrix.from_json(QQ, m.to_json()) == m
