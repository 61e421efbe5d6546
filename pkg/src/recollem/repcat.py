"""Representations of a finite linear category (covariant functors into vect).

``Rep.action[(a, b, i)]`` is the matrix ``X(f_i): X(a) -> X(b)`` of the i-th
basis morphism of ``hom(a, b)``; it has shape ``dim(b) x dim(a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import CategoryMismatchError, PreconditionError, SchemaError, ShapeError
from .exactla import (
    Matrix,
    block_diag,
    decompose,
    joint_kernel,
    kron,
    right_inverse,
    solve,
    solve_or_raise,
)
from .lincat import LinCat, same_category


class Rep:
    """A representation ``X: C -> vect_k``."""

    def __init__(self, cat: LinCat, dim: Mapping[str, int], action: Optional[Mapping] = None, *, check: bool = True):
        self.cat = cat
        F = cat.field
        self.dim = {a: int(dim.get(a, 0)) for a in cat.objects}
        extra = set(dim) - set(cat.objects)
        if extra:
            raise SchemaError(f"dimension given for unknown objects {sorted(extra)}")
        if any(d < 0 for d in self.dim.values()):
            raise SchemaError("negative dimension")
        action = action or {}
        acts = {}
        for a, b, i in cat.basis():
            m = action.get((a, b, i))
            shape = (self.dim[b], self.dim[a])
            if m is None:
                if shape[0] and shape[1]:
                    raise SchemaError(f"missing action for {cat.labels(a, b)[i]} ({a}->{b}#{i})")
                m = Matrix.zeros(F, *shape)
            elif m.shape != shape:
                raise ShapeError(f"action of {a}->{b}#{i} has shape {m.shape}, expected {shape}")
            acts[a, b, i] = m
        self.action: Dict[Tuple[str, str, int], Matrix] = acts
        if check:
            problems = rep_violations(self)
            if problems:
                raise SchemaError("not a functor: " + "; ".join(problems[:5]))

    @property
    def field(self):
        return self.cat.field

    def act(self, a: str, b: str, coords) -> Matrix:
        """Matrix of the morphism with coordinate column ``coords`` in hom(a, b)."""
        vals = coords.column(0) if isinstance(coords, Matrix) else tuple(coords)
        out = Matrix.zeros(self.field, self.dim[b], self.dim[a])
        for i, c in enumerate(vals):
            if c:
                out = out + self.action[a, b, i].scale(c)
        return out

    def total_dim(self) -> int:
        return sum(self.dim.values())

    def dims(self) -> tuple:
        return tuple(self.dim[a] for a in self.cat.objects)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def validate(self) -> "Rep":
        problems = rep_violations(self)
        if problems:
            raise SchemaError("not a functor: " + "; ".join(problems[:5]))
        return self

    def __eq__(self, other):
        return (
            isinstance(other, Rep)
            and same_category(self.cat, other.cat)
            and self.dim == other.dim
            and self.action == other.action
        )

    __hash__ = None

    def __repr__(self):
        return f"Rep({self.cat.name}, dims={dict(self.dim)})"

    # JSON: {"cat": name, "dim": {obj: n}, "action": {"a->b#i": matrix}}
    def to_json(self):
        acts = {}
        for (a, b, i), m in self.action.items():
            if m.rows and m.cols:
                acts[f"{a}->{b}#{i}"] = m.to_json()
        return {"cat": self.cat.name, "dim": dict(self.dim), "action": acts}

    @classmethod
    def from_json(cls, cat: LinCat, data, path: str = "rep") -> "Rep":
        if not isinstance(data, Mapping):
            raise SchemaError("representation must be an object", path)
        if "cat" in data and data["cat"] != cat.name:
            raise CategoryMismatchError(f"representation is over {data['cat']!r}, not {cat.name!r}")
        dims = data.get("dim")
        if not isinstance(dims, Mapping):
            raise SchemaError("missing 'dim' object", path)
        dim = {}
        for k, v in dims.items():
            cat.check_object(k)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise SchemaError(f"dimension of {k} must be a non-negative integer", f"{path}.dim.{k}")
            dim[str(k)] = v
        action = {}
        for key, m in (data.get("action") or {}).items():
            try:
                ab, i = key.split("#")
                a, b = ab.split("->")
                i = int(i)
            except ValueError:
                raise SchemaError(f"bad action key {key!r}; expected 'a->b#i'", f"{path}.action") from None
            a, b = cat.check_object(a), cat.check_object(b)
            if not 0 <= i < cat.homdim(a, b):
                raise SchemaError(f"hom({a},{b}) has no basis element {i}", f"{path}.action.{key}")
            action[a, b, i] = Matrix.from_json(
                cat.field, m, dim.get(b, 0), dim.get(a, 0), path=f"{path}.action.{key}"
            )
        return cls(cat, dim, action)


def rep_violations(x: Rep) -> List[str]:
    c, F = x.cat, x.field
    out = []
    for a in c.objects:
        if x.act(a, a, c.identity(a)) != Matrix.identity(F, x.dim[a]):
            out.append(f"identity of {a} does not act as the identity")
    for a, b, d in product(c.objects, repeat=3):
        hab, hbd = c.homdim(a, b), c.homdim(b, d)
        if not (hab and hbd) or not (x.dim[a] and x.dim[d]):
            continue
        m = c.comp(a, b, d)
        for i in range(hab):
            for j in range(hbd):
                lhs = x.action[b, d, j] @ x.action[a, b, i]
                rhs = x.act(a, d, m.select_columns([i * hbd + j]))
                if lhs != rhs:
                    out.append(f"composition {c.labels(a, b)[i]} then {c.labels(b, d)[j]} not respected")
    return out


class NatTrans:
    """A natural transformation; ``comps[a]`` has shape ``dim target(a) x dim source(a)``."""

    def __init__(self, source: Rep, target: Rep, comps: Mapping[str, Matrix], *, check: bool = True):
        if not same_category(source.cat, target.cat):
            raise CategoryMismatchError("source and target live over different categories")
        self.source, self.target = source, target
        F = source.field
        cs = {}
        for a in source.cat.objects:
            shape = (target.dim[a], source.dim[a])
            m = comps.get(a)
            if m is None:
                m = Matrix.zeros(F, *shape)
            elif m.shape != shape:
                raise ShapeError(f"component at {a} has shape {m.shape}, expected {shape}")
            cs[a] = m
        self.comps: Dict[str, Matrix] = cs
        if check:
            bad = naturality_violations(self)
            if bad:
                raise SchemaError("not natural: " + "; ".join(bad[:5]))

    @property
    def cat(self):
        return self.source.cat

    @property
    def field(self):
        return self.source.field

    def __getitem__(self, a):
        return self.comps[a]

    def validate(self) -> "NatTrans":
        bad = naturality_violations(self)
        if bad:
            raise SchemaError("not natural: " + "; ".join(bad[:5]))
        return self

    def then(self, other: "NatTrans") -> "NatTrans":
        """``other o self``."""
        if self.target != other.source:
            raise CategoryMismatchError("composable transformations must share the middle representation")
        return NatTrans(self.source, other.target, {a: other.comps[a] @ self.comps[a] for a in self.comps}, check=False)

    def __add__(self, other: "NatTrans") -> "NatTrans":
        return NatTrans(self.source, self.target, {a: self.comps[a] + other.comps[a] for a in self.comps}, check=False)

    def __neg__(self):
        return NatTrans(self.source, self.target, {a: -m for a, m in self.comps.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "NatTrans":
        return NatTrans(self.source, self.target, {a: m.scale(c) for a, m in self.comps.items()}, check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comps.values())

    def is_iso(self) -> bool:
        return all(m.rows == m.cols and m.rank() == m.rows for m in self.comps.values())

    def ranks(self) -> Dict[str, int]:
        return {a: m.rank() for a, m in self.comps.items()}

    def __eq__(self, other):
        return (
            isinstance(other, NatTrans)
            and self.source == other.source
            and self.target == other.target
            and self.comps == other.comps
        )

    __hash__ = None

    def __repr__(self):
        return f"NatTrans({self.source!r} -> {self.target!r})"


def naturality_violations(t: NatTrans) -> List[str]:
    x, y, c = t.source, t.target, t.cat
    out = []
    for a, b, i in c.basis():
        if y.action[a, b, i] @ t.comps[a] != t.comps[b] @ x.action[a, b, i]:
            out.append(f"square for {c.labels(a, b)[i]} ({a}->{b}) does not commute")
    return out


def _same_cat(*reps):
    c = reps[0].cat
    for r in reps[1:]:
        if not same_category(c, r.cat):
            raise CategoryMismatchError(f"representations over {c.name!r} and {r.cat.name!r}")


# -- constructions ---------------------------------------------------------------

def zero_rep(cat: LinCat) -> Rep:
    return Rep(cat, {}, check=False)


def identity(x: Rep) -> NatTrans:
    return NatTrans(x, x, {a: Matrix.identity(x.field, d) for a, d in x.dim.items()}, check=False)


def zero_map(x: Rep, y: Rep) -> NatTrans:
    _same_cat(x, y)
    return NatTrans(x, y, {}, check=False)


def representable(c: LinCat, obj) -> Rep:
    """``hom(obj, -)``; morphisms act by post-composition."""
    o = c.check_object(obj)
    dim = {x: c.homdim(o, x) for x in c.objects}
    action = {(x, y, i): c.post_matrix(o, x, y, i) for x, y, i in c.basis()}
    return Rep(c, dim, action, check=False)


def simple(c: LinCat, obj) -> Rep:
    """The one-dimensional representation concentrated at ``obj``.

    Requires ``End(obj)`` to be local with residue field k; the character is
    read off as normalised traces of left multiplication.
    """
    x = c.check_object(obj)
    F = c.field
    n = c.homdim(x, x)
    if n == 0:
        raise PreconditionError(f"End({x}) is zero; there is no simple at {x}")
    if F.characteristic and n % F.characteristic == 0:
        raise PreconditionError(f"cannot normalise traces: characteristic divides dim End({x}) = {n}")
    m = c.comp(x, x, x)
    ninv = F.inv(F(n))
    chars = []
    for b in range(n):
        lb = m.select_columns([a * n + b for a in range(n)])
        tr = sum((lb[i, i] for i in range(n)), F.zero)
        chars.append(F(tr * ninv) if not F.characteristic else (tr * ninv) % F.characteristic)
    action = {(x, x, b): Matrix(F, 1, 1, [[chars[b]]]) for b in range(n)}
    dim = {x: 1}
    s = Rep(c, dim, action, check=False)
    if rep_violations(s):
        raise PreconditionError(f"End({x}) has no character vanishing on composites through other objects")
    return s


def direct_sum(xs: Sequence[Rep], cat: Optional[LinCat] = None) -> Rep:
    if not xs:
        if cat is None:
            raise PreconditionError("empty direct sum needs a category")
        return zero_rep(cat)
    _same_cat(*xs)
    c = xs[0].cat
    dim = {a: sum(x.dim[a] for x in xs) for a in c.objects}
    action = {k: block_diag(c.field, [x.action[k] for x in xs]) for k in xs[0].action}
    return Rep(c, dim, action, check=False)


def sum_injections(xs: Sequence[Rep], total: Optional[Rep] = None) -> List[NatTrans]:
    total = total or direct_sum(xs)
    F = total.field
    out = []
    offs = {a: 0 for a in total.dim}
    for x in xs:
        comps = {}
        for a in total.dim:
            rows = [[F.zero] * x.dim[a] for _ in range(total.dim[a])]
            for k in range(x.dim[a]):
                rows[offs[a] + k][k] = F.one
            comps[a] = Matrix(F, total.dim[a], x.dim[a], rows, check=False)
            offs[a] += x.dim[a]
        out.append(NatTrans(x, total, comps, check=False))
    return out


def sum_projections(xs: Sequence[Rep], total: Optional[Rep] = None) -> List[NatTrans]:
    total = total or direct_sum(xs)
    return [NatTrans(total, x, {a: m.T for a, m in inj.comps.items()}, check=False)
            for x, inj in zip(xs, sum_injections(xs, total))]


def oslash(x: Rep, n: int) -> Rep:
    """``x`` tensored with an n-dimensional space."""
    if n < 0:
        raise PreconditionError("multiplicity must be non-negative")
    F = x.field
    eye = Matrix.identity(F, n)
    return Rep(x.cat, {a: d * n for a, d in x.dim.items()},
               {k: kron(m, eye) for k, m in x.action.items()}, check=False)


def subrep(x: Rep, bases: Mapping[str, Matrix]) -> Rep:
    """Representation on subspaces ``bases[a]`` (full column rank) assumed stable under the action."""
    dim = {a: bases[a].cols for a in x.cat.objects}
    action = {
        (a, b, i): solve_or_raise(bases[b], m @ bases[a], "stable subspace")
        for (a, b, i), m in x.action.items()
    }
    return Rep(x.cat, dim, action, check=False)


def quotient_rep(x: Rep, projections: Mapping[str, Matrix]) -> Rep:
    """Representation on quotients given by surjections ``projections[a]``."""
    sections = {a: right_inverse(p) for a, p in projections.items()}
    dim = {a: projections[a].rows for a in x.cat.objects}
    action = {
        (a, b, i): projections[b] @ m @ sections[a]
        for (a, b, i), m in x.action.items()
    }
    return Rep(x.cat, dim, action, check=False)


@dataclass
class KernelData:
    sub: Rep
    incl: NatTrans


@dataclass
class CokernelData:
    quot: Rep
    proj: NatTrans


def kernel(f: NatTrans) -> KernelData:
    bases = {a: decompose(m, want=("kernel",)).kernel_basis for a, m in f.comps.items()}
    sub = subrep(f.source, bases)
    return KernelData(sub, NatTrans(sub, f.source, bases, check=False))


def cokernel(f: NatTrans) -> CokernelData:
    projs = {a: decompose(m, want=("cokernel",)).cokernel_projection for a, m in f.comps.items()}
    quot = quotient_rep(f.target, projs)
    return CokernelData(quot, NatTrans(f.target, quot, projs, check=False))


def image(f: NatTrans) -> KernelData:
    """Image as a subobject of the target."""
    bases = {a: decompose(m, want=("image",)).image_basis for a, m in f.comps.items()}
    sub = subrep(f.target, bases)
    return KernelData(sub, NatTrans(sub, f.target, bases, check=False))


def factor_through(f: NatTrans, g: NatTrans) -> Optional[NatTrans]:
    """The ``h`` with ``g o h = f``, when ``g`` is a mono whose image contains that of ``f``."""
    comps = {}
    for a in f.comps:
        h = solve(g.comps[a], f.comps[a])
        if h is None:
            return None
        comps[a] = h
    return NatTrans(f.source, g.source, comps, check=False)


def _offsets(x: Rep, y: Rep):
    offs, total = {}, 0
    for a in x.cat.objects:
        offs[a] = total
        total += y.dim[a] * x.dim[a]
    return offs, total


def hom_space(x: Rep, y: Rep) -> List[NatTrans]:
    """Basis of the natural transformations ``x => y``."""
    _same_cat(x, y)
    F = x.field
    c = x.cat
    offs, total = _offsets(x, y)

    def constraints():
        for a, b, i in c.basis():
            nrows = y.dim[b] * x.dim[a]
            if not nrows:
                continue
            blocks = []
            if x.dim[a]:
                blocks.append((a, kron(y.action[a, b, i], Matrix.identity(F, x.dim[a]))))
            if y.dim[b]:
                blocks.append((b, -kron(Matrix.identity(F, y.dim[b]), x.action[a, b, i].T)))
            rows = [[F.zero] * total for _ in range(nrows)]
            for o, m in blocks:
                off = offs[o]
                for r in range(nrows):
                    row = rows[r]
                    for k, v in enumerate(m.row(r)):
                        if v:
                            row[off + k] = row[off + k] + v
            if F.characteristic:
                p = F.characteristic
                rows = [[v % p for v in row] for row in rows]
            yield Matrix(F, nrows, total, rows, check=False)

    ker = joint_kernel(F, total, constraints())
    out = []
    for j in range(ker.cols):
        col = ker.column(j)
        comps = {}
        for a in c.objects:
            dy, dx = y.dim[a], x.dim[a]
            flat = col[offs[a]: offs[a] + dy * dx]
            comps[a] = Matrix(F, dy, dx, [flat[r * dx:(r + 1) * dx] for r in range(dy)], check=False)
        out.append(NatTrans(x, y, comps, check=False))
    return out


def nat_coordinates(basis: Sequence[NatTrans], t: NatTrans) -> Optional[Matrix]:
    """Coordinates of ``t`` in a hom-space basis, or None if ``t`` is not in the span."""
    F = t.field
    objs = t.cat.objects

    def flat(s):
        out = []
        for a in objs:
            for r in s.comps[a].data:
                out.extend(r)
        return out

    n = len(flat(t))
    m = Matrix.from_columns(F, [flat(s) for s in basis], n) if basis else Matrix.zeros(F, n, 0)
    return solve(m, Matrix.column_vector(F, flat(t)))


@dataclass
class YonedaIso:
    """Mutually inverse maps between ``hom_space(repr(a), x)`` and ``x(a)``.

    ``forward`` has a column per hom-space basis element (its value at the
    identity of ``a``); ``backward`` is its inverse in those coordinates.
    """

    obj: str
    representable: Rep
    target: Rep
    basis: List[NatTrans]
    forward: Matrix
    backward: Matrix

    def element(self, t: NatTrans) -> Matrix:
        return t.comps[self.obj] @ self.target.cat.identity(self.obj)

    def transformation(self, v: Matrix) -> NatTrans:
        return yoneda_transformation(self.representable, v, self.obj, self.target)


def yoneda_transformation(rep_a: Rep, v: Matrix, a: str, x: Rep) -> NatTrans:
    """``u |-> x(u) v`` as a transformation ``repr(a) => x``."""
    c = x.cat
    comps = {}
    for b in c.objects:
        cols = [(x.action[a, b, u] @ v).column(0) for u in range(c.homdim(a, b))]
        comps[b] = Matrix.from_columns(x.field, cols, x.dim[b]) if cols else Matrix.zeros(x.field, x.dim[b], 0)
    return NatTrans(rep_a, x, comps, check=False)


def yoneda_iso(c: LinCat, a, x: Rep) -> YonedaIso:
    a = c.check_object(a)
    if not same_category(c, x.cat):
        raise CategoryMismatchError("representation is over a different category")
    ra = representable(c, a)
    basis = hom_space(ra, x)
    F = c.field
    ida = c.identity(a)
    fwd_cols = [(t.comps[a] @ ida).column(0) for t in basis]
    fwd = Matrix.from_columns(F, fwd_cols, x.dim[a]) if fwd_cols else Matrix.zeros(F, x.dim[a], 0)
    back_cols = []
    for k in range(x.dim[a]):
        t = yoneda_transformation(ra, Matrix.unit_vector(F, x.dim[a], k), a, x)
        back_cols.append(nat_coordinates(basis, t).column(0))
    back = Matrix.from_columns(F, back_cols, len(basis)) if back_cols else Matrix.zeros(F, len(basis), 0)
    return YonedaIso(a, ra, x, basis, fwd, back)


def dual(x: Rep) -> Rep:
    """Pointwise dual, a representation of the opposite category."""
    op = x.cat.opposite()
    action = {(a, b, i): x.action[b, a, i].T for a, b, i in op.basis()}
    return Rep(op, dict(x.dim), action, check=False)


def dual_map(t: NatTrans, source_dual: Optional[Rep] = None, target_dual: Optional[Rep] = None) -> NatTrans:
    """``D(t): D(target) => D(source)``."""
    s = target_dual or dual(t.target)
    d = source_dual or dual(t.source)
    return NatTrans(s, d, {a: m.T for a, m in t.comps.items()}, check=False)
