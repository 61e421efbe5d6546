"""Exact dense linear algebra over the rationals and prime fields.

Matrices are immutable, row-major, and act on column vectors.  Rational
entries are ``gmpy2.mpq``; prime-field entries are Python ints in ``[0, p)``.
Gaussian elimination always pivots on the first nonzero entry of a column so
that every basis returned here is reproducible bit-for-bit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .errors import FieldMismatchError, MatrixSizeError, SchemaError, ShapeError

DEFAULT_MAX_ENTRIES = 4096
MAX_ENTRIES_ENV = "RECOLLEM_MAX_ENTRIES"


def max_entries() -> int:
    """Entry cap applied to every elimination input (env override allowed)."""
    raw = os.environ.get(MAX_ENTRIES_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise SchemaError(f"{MAX_ENTRIES_ENV} must be an integer, got {raw!r}")
    return DEFAULT_MAX_ENTRIES


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Ground field: ``Field(0)`` is Q, ``Field(p)`` is F_p."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        characteristic = int(characteristic)
        if characteristic != 0 and (characteristic > 2**31 or not _is_prime(characteristic)):
            raise ValueError(f"characteristic must be 0 or a prime <= 2^31, got {characteristic}")
        object.__setattr__(self, "characteristic", characteristic)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime_field"

    @property
    def zero(self):
        return mpq(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return mpq(1) if self.characteristic == 0 else 1

    def __call__(self, value):
        p = self.characteristic
        if isinstance(value, str):
            value = value.strip()
            try:
                q = mpq(value)
            except ValueError:
                raise SchemaError(f"not a field element: {value!r}")
        elif isinstance(value, Fraction):
            q = mpq(value.numerator, value.denominator)
        elif isinstance(value, bool):
            q = mpq(int(value))
        elif isinstance(value, int):
            return mpq(value) if p == 0 else value % p
        elif type(value) is type(mpq(0)):
            q = value
        else:
            raise SchemaError(f"not a field element: {value!r}")
        if p == 0:
            return q
        den = int(q.denominator)
        if den % p == 0:
            raise FieldMismatchError(f"{value!r} is not defined in characteristic {p}")
        return (int(q.numerator) * pow(den, p - 2, p)) % p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic == 0:
            return 1 / x
        return pow(x, self.characteristic - 2, self.characteristic)

    def is_element(self, x) -> bool:
        if self.characteristic == 0:
            return type(x) is type(mpq(0))
        return type(x) is int and 0 <= x < self.characteristic

    def fmt(self, x) -> str:
        return str(x)

    def spec(self) -> str:
        return "q" if self.characteristic == 0 else f"fp:{self.characteristic}"

    @classmethod
    def parse(cls, spec: str) -> "Field":
        spec = spec.strip().lower()
        if spec in ("q", "qq", "rationals"):
            return cls(0)
        if spec.startswith("fp:"):
            try:
                return cls(int(spec[3:]))
            except ValueError as exc:
                raise SchemaError(f"bad field spec {spec!r}: {exc}")
        raise SchemaError(f"bad field spec {spec!r}; expected 'q' or 'fp:<p>'")

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data: Sequence[Sequence], *, check: bool = True):
        if rows < 0 or cols < 0:
            raise ShapeError(f"negative shape {rows}x{cols}")
        data = tuple(tuple(r) for r in data)
        if check:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ShapeError(f"entry count does not match shape {rows}x{cols}")
            for r in data:
                for x in r:
                    if not field.is_element(x):
                        raise FieldMismatchError(f"entry {x!r} is not an element of {field!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, [[z] * cols for _ in range(rows)], check=False)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, [[o if i == j else z for j in range(n)] for i in range(n)], check=False)

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Iterable], cols: Optional[int] = None) -> "Matrix":
        data = [[field(x) for x in r] for r in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(field, len(data), cols, data)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = list(columns)
        data = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(field, rows, len(columns), data, check=False)

    @classmethod
    def column_vector(cls, field: Field, values: Sequence) -> "Matrix":
        return cls(field, len(values), 1, [[v] for v in values], check=False)

    @classmethod
    def unit_vector(cls, field: Field, n: int, i: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, 1, [[o if k == i else z] for k in range(n)], check=False)

    # -- basic access -------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int):
        return self.data[i]

    def column(self, j: int):
        return tuple(r[j] for r in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "Matrix":
        if self.rows == 0:
            return Matrix.zeros(self.field, self.cols, 0)
        return Matrix(self.field, self.cols, self.rows, list(zip(*self.data)), check=False)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.rows, len(idx), [[r[j] for j in idx] for r in self.data], check=False)

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(idx), self.cols, [self.data[i] for i in idx], check=False)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix(self.field, r1 - r0, c1 - c0, [r[c0:c1] for r in self.data[r0:r1]], check=False)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        o = self.field.one
        return all(
            (x == o) if i == j else (not x) for i, r in enumerate(self.data) for j, x in enumerate(r)
        )

    # -- arithmetic ---------------------------------------------------
    def _same_field(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        p = self.field.characteristic
        n, k = self.rows, other.cols
        if self.cols == 0 or n == 0 or k == 0:
            return Matrix.zeros(self.field, n, k)
        bt = list(zip(*other.data))
        z = self.field.zero
        out = []
        for r in self.data:
            nz = [(j, x) for j, x in enumerate(r) if x]
            if not nz:
                out.append([z] * k)
                continue
            row = []
            for col in bt:
                s = z
                for j, x in nz:
                    y = col[j]
                    if y:
                        s += x * y
                row.append(s % p if p else s)
            out.append(row)
        return Matrix(self.field, n, k, out, check=False)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        p = self.field.characteristic
        if p:
            data = [[(a + b) % p for a, b in zip(r, s)] for r, s in zip(self.data, other.data)]
        else:
            data = [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)]
        return Matrix(self.field, self.rows, self.cols, data, check=False)

    def __neg__(self) -> "Matrix":
        p = self.field.characteristic
        if p:
            data = [[(-a) % p for a in r] for r in self.data]
        else:
            data = [[-a for a in r] for r in self.data]
        return Matrix(self.field, self.rows, self.cols, data, check=False)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c) if not self.field.is_element(c) else c
        p = self.field.characteristic
        if p:
            data = [[(c * a) % p for a in r] for r in self.data]
        else:
            data = [[c * a for a in r] for r in self.data]
        return Matrix(self.field, self.rows, self.cols, data, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Matrix({self.rows}x{self.cols} over {self.field!r}: [{body}])"

    def rank(self) -> int:
        return decompose(self, want=("rank",)).rank

    # -- serialization ------------------------------------------------
    def to_json(self):
        return [[str(x) for x in r] for r in self.data]

    @classmethod
    def from_json(cls, field: Field, data, rows: Optional[int] = None, cols: Optional[int] = None, path=None) -> "Matrix":
        if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
            raise SchemaError("matrix must be a list of rows", path)
        nrows = len(data)
        ncols = len(data[0]) if data else (cols or 0)
        if rows is not None and rows != nrows:
            raise SchemaError(f"expected {rows} rows, got {nrows}", path)
        if cols is not None and nrows and cols != ncols:
            raise SchemaError(f"expected {cols} columns, got {ncols}", path)
        if any(len(r) != ncols for r in data):
            raise SchemaError("ragged matrix rows", path)
        try:
            entries = [[field(x) for x in r] for r in data]
        except SchemaError as exc:
            raise SchemaError(str(exc), path)
        return cls(field, nrows, ncols if cols is None else cols, entries, check=False)


# -- stacking helpers ------------------------------------------------

def hstack(field: Field, rows: int, blocks: Sequence[Matrix]) -> Matrix:
    data = [[] for _ in range(rows)]
    cols = 0
    for b in blocks:
        if b.field != field:
            raise FieldMismatchError(f"{b.field!r} vs {field!r}")
        if b.rows != rows:
            raise ShapeError(f"hstack: block has {b.rows} rows, expected {rows}")
        for i in range(rows):
            data[i].extend(b.data[i])
        cols += b.cols
    return Matrix(field, rows, cols, data, check=False)


def vstack(field: Field, cols: int, blocks: Sequence[Matrix]) -> Matrix:
    data = []
    for b in blocks:
        if b.field != field:
            raise FieldMismatchError(f"{b.field!r} vs {field!r}")
        if b.cols != cols:
            raise ShapeError(f"vstack: block has {b.cols} columns, expected {cols}")
        data.extend(b.data)
    return Matrix(field, len(data), cols, data, check=False)


def block_diag(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    z = field.zero
    data = []
    c0 = 0
    for b in blocks:
        for r in b.data:
            data.append([z] * c0 + list(r) + [z] * (cols - c0 - b.cols))
        c0 += b.cols
    return Matrix(field, rows, cols, data, check=False)


def block_matrix(field: Field, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: dict) -> Matrix:
    """Assemble from a sparse dict ``{(i, j): Matrix}``; missing blocks are zero."""
    z = field.zero
    rows = sum(row_sizes)
    cols = sum(col_sizes)
    data = [[z] * cols for _ in range(rows)]
    roff = [sum(row_sizes[:i]) for i in range(len(row_sizes))]
    coff = [sum(col_sizes[:j]) for j in range(len(col_sizes))]
    for (i, j), b in blocks.items():
        if b.shape != (row_sizes[i], col_sizes[j]):
            raise ShapeError(f"block ({i},{j}) has shape {b.shape}, expected {(row_sizes[i], col_sizes[j])}")
        for r in range(b.rows):
            data[roff[i] + r][coff[j]:coff[j] + b.cols] = b.data[r]
    return Matrix(field, rows, cols, data, check=False)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; row index ``i*rb + k``, column index ``j*cb + l``."""
    a._same_field(b)
    p = a.field.characteristic
    data = []
    for ra in a.data:
        for rb in b.data:
            row = []
            for x in ra:
                if p:
                    row.extend((x * y) % p for y in rb)
                else:
                    row.extend(x * y for y in rb)
            data.append(row)
    return Matrix(a.field, a.rows * b.rows, a.cols * b.cols, data, check=False)


# -- elimination -----------------------------------------------------

def _check_cap(rows: int, cols: int):
    cap = max_entries()
    if rows * cols > cap:
        raise MatrixSizeError(
            f"{rows}x{cols} matrix exceeds the {cap}-entry cap (set {MAX_ENTRIES_ENV} to raise it)"
        )


def _rref(rows: list, ncols: int, field: Field, pivot_limit: Optional[int] = None):
    """In-place reduced row echelon form; returns pivot columns."""
    p = field.characteristic
    limit = ncols if pivot_limit is None else pivot_limit
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        lead = pr[c]
        if lead != 1:
            inv = field.inv(lead)
            if p:
                pr = [(x * inv) % p for x in pr]
            else:
                pr = [x * inv for x in pr]
            rows[r] = pr
        nz = [(j, pr[j]) for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            row = list(row)
            if p:
                for j, x in nz:
                    row[j] = (row[j] - f * x) % p
            else:
                for j, x in nz:
                    row[j] = row[j] - f * x
            rows[i] = row
        pivots.append(c)
        r += 1
    return pivots


@dataclass(frozen=True)
class Decomposition:
    rank: int
    pivots: tuple
    kernel_basis: Optional[Matrix] = None
    image_basis: Optional[Matrix] = None
    cokernel_projection: Optional[Matrix] = None


def rref(m: Matrix):
    """Return ``(R, pivots)`` with ``R`` the reduced row echelon form of ``m``."""
    _check_cap(m.rows, m.cols)
    rows = [list(r) for r in m.data]
    pivots = _rref(rows, m.cols, m.field)
    return Matrix(m.field, m.rows, m.cols, rows, check=False), tuple(pivots)


def _kernel_from_rref(field: Field, rows: list, pivots: Sequence[int], ncols: int) -> Matrix:
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    z, o = field.zero, field.one
    p = field.characteristic
    cols = []
    for f in free:
        v = [z] * ncols
        v[f] = o
        for i, c in enumerate(pivots):
            x = rows[i][f]
            if x:
                v[c] = (-x) % p if p else -x
        cols.append(v)
    return Matrix.from_columns(field, cols, ncols)


def decompose(m: Matrix, want=("rank", "kernel", "image", "cokernel")) -> Decomposition:
    """Rank, kernel basis, image basis and a cokernel projection of ``m``.

    ``kernel_basis`` is ``cols x (cols - rank)`` with ``m @ kernel_basis == 0``;
    ``image_basis`` is the pivot columns of ``m``; ``cokernel_projection`` is
    ``(rows - rank) x rows``, surjective, with kernel equal to the image of ``m``.
    """
    _check_cap(m.rows, m.cols)
    rows = [list(r) for r in m.data]
    pivots = _rref(rows, m.cols, m.field)
    kern = img = coker = None
    if "kernel" in want:
        kern = _kernel_from_rref(m.field, rows, pivots, m.cols)
    if "image" in want or "cokernel" in want:
        img = m.select_columns(pivots)
    if "cokernel" in want:
        coker = left_kernel(img)
    return Decomposition(len(pivots), tuple(pivots), kern, img, coker)


def kernel(m: Matrix) -> Matrix:
    return decompose(m, want=("kernel",)).kernel_basis


def left_kernel(m: Matrix) -> Matrix:
    """Rows spanning ``{y : y @ m == 0}``, as a ``k x rows`` matrix."""
    return kernel(m.T).T if m.cols else Matrix.identity(m.field, m.rows)


def rank(m: Matrix) -> int:
    return decompose(m, want=("rank",)).rank


def solve(m: Matrix, b: Matrix) -> Optional[Matrix]:
    """Return ``x`` with ``m @ x == b`` exactly, or ``None`` if inconsistent."""
    m._same_field(b)
    if m.rows != b.rows:
        raise ShapeError(f"solve: {m.rows} rows vs {b.rows} rows")
    _check_cap(m.rows, m.cols + b.cols)
    n = m.cols
    rows = [list(r) + list(s) for r, s in zip(m.data, b.data)]
    pivots = _rref(rows, n + b.cols, m.field, pivot_limit=n)
    for i in range(len(pivots), m.rows):
        if any(rows[i][n:]):
            return None
    z = m.field.zero
    out = [[z] * b.cols for _ in range(n)]
    for i, c in enumerate(pivots):
        out[c] = rows[i][n:]
    return Matrix(m.field, n, b.cols, out, check=False)


def solve_or_raise(m: Matrix, b: Matrix, what: str = "linear system") -> Matrix:
    from .errors import InternalConsistencyError

    x = solve(m, b)
    if x is None:
        raise InternalConsistencyError(f"{what} has no solution")
    return x


def right_inverse(m: Matrix) -> Matrix:
    """Section of a surjective matrix."""
    return solve_or_raise(m, Matrix.identity(m.field, m.rows), "right inverse")


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ShapeError("inverse of a non-square matrix")
    return solve_or_raise(m, Matrix.identity(m.field, m.rows), "inverse")


def joint_kernel(field: Field, ncols: int, blocks: Iterable[Matrix]) -> Matrix:
    """Kernel of the vertical stack of ``blocks`` without materializing the stack."""
    basis = None
    for blk in blocks:
        if blk.cols != ncols:
            raise ShapeError(f"joint_kernel: block has {blk.cols} columns, expected {ncols}")
        if blk.rows == 0:
            continue
        m = blk if basis is None else blk @ basis
        if m.is_zero():
            continue
        k = kernel(m)
        basis = k if basis is None else basis @ k
        if basis.cols == 0:
            break
    return Matrix.identity(field, ncols) if basis is None else basis


def column_span(field: Field, nrows: int, blocks: Iterable[Matrix]) -> Matrix:
    """Independent columns spanning the column space of ``hstack(blocks)``."""
    span = Matrix.zeros(field, nrows, 0)
    for blk in blocks:
        if blk.rows != nrows:
            raise ShapeError(f"column_span: block has {blk.rows} rows, expected {nrows}")
        if blk.cols == 0 or blk.is_zero():
            continue
        if span.cols == nrows:
            break
        span = decompose(hstack(field, nrows, [span, blk]), want=("image",)).image_basis
    return span


def cokernel_of_span(field: Field, nrows: int, blocks: Iterable[Matrix]) -> Matrix:
    """Surjection from ``k^nrows`` whose kernel is the span of ``blocks``."""
    return left_kernel(column_span(field, nrows, blocks))


def in_column_span(span: Matrix, v: Matrix) -> bool:
    return solve(span, v) is not None
