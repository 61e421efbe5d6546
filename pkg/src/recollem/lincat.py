"""Finite k-linear categories.

A :class:`LinCat` is stored by hom-space dimensions and composition structure
constants.  ``comp[(a, b, c)]`` is the matrix of the composition map
``hom(a, b) (x) hom(b, c) -> hom(a, c)``; column ``i * dim hom(b, c) + j`` holds
the coordinates of ``g_j o f_i`` (first ``f_i``, then ``g_j``).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import InfiniteDimensionError, LookupFailure, PreconditionError, SchemaError
from .exactla import QQ, Field, Matrix, decompose, kron, solve_or_raise, _rref


class LinCat:
    """A finite category enriched in finite-dimensional vector spaces."""

    def __init__(
        self,
        field: Field,
        objects: Sequence[str],
        hom: Mapping[Tuple[str, str], int],
        comp: Mapping[Tuple[str, str, str], Matrix],
        ident: Mapping[str, Sequence],
        name: str = "C",
        labels: Optional[Mapping[Tuple[str, str], Sequence[str]]] = None,
    ):
        objects = tuple(str(o) for o in objects)
        if len(set(objects)) != len(objects):
            raise SchemaError("duplicate object ids")
        self.field = field
        self.objects = objects
        self.name = name
        objset = set(objects)
        for (a, b) in hom:
            if a not in objset or b not in objset:
                raise SchemaError(f"hom entry {a}->{b} names an unknown object")
        self._hom = {(a, b): int(hom.get((a, b), 0)) for a in objects for b in objects}
        if any(d < 0 for d in self._hom.values()):
            raise SchemaError("negative hom dimension")
        self._comp = {}
        for a, b, c in product(objects, repeat=3):
            shape = (self._hom[a, c], self._hom[a, b] * self._hom[b, c])
            m = comp.get((a, b, c))
            if m is None:
                m = Matrix.zeros(field, *shape)
            elif m.shape != shape:
                raise SchemaError(f"comp {a}->{b}->{c} has shape {m.shape}, expected {shape}")
            self._comp[a, b, c] = m
        for key in comp:
            if any(o not in objset for o in key):
                raise SchemaError(f"comp entry {'->'.join(key)} names an unknown object")
        self._ident = {}
        for a in objects:
            v = tuple(ident.get(a, ()))
            if len(v) != self._hom[a, a]:
                raise SchemaError(f"identity of {a} has {len(v)} coordinates, expected {self._hom[a, a]}")
            self._ident[a] = Matrix.column_vector(field, v)
        self._labels = {}
        for a, b in self._hom:
            lab = tuple(labels.get((a, b), ())) if labels else ()
            if len(lab) != self._hom[a, b]:
                lab = tuple(f"{a}->{b}#{i}" for i in range(self._hom[a, b]))
            self._labels[a, b] = lab
        self._op = None

    # -- access -----------------------------------------------------------
    def check_object(self, a) -> str:
        a = str(a)
        if a not in self._ident:
            raise LookupFailure(f"unknown object {a!r} in category {self.name}")
        return a

    def homdim(self, a: str, b: str) -> int:
        return self._hom[a, b]

    def comp(self, a: str, b: str, c: str) -> Matrix:
        return self._comp[a, b, c]

    def identity(self, a: str) -> Matrix:
        return self._ident[a]

    def labels(self, a: str, b: str) -> Tuple[str, ...]:
        return self._labels[a, b]

    def basis(self):
        """Iterate ``(a, b, i)`` over all hom-basis elements in a fixed order."""
        for a in self.objects:
            for b in self.objects:
                for i in range(self._hom[a, b]):
                    yield a, b, i

    def total_dimension(self) -> int:
        return sum(self._hom.values())

    def post_matrix(self, o: str, x: str, y: str, i: int) -> Matrix:
        """``hom(o, x) -> hom(o, y)``, ``u |-> f_i o u`` for the basis element ``f_i`` of ``hom(x, y)``."""
        hxy = self._hom[x, y]
        m = self._comp[o, x, y]
        return m.select_columns([p * hxy + i for p in range(self._hom[o, x])])

    def pre_matrix(self, c: str, d: str, b: str, h: int) -> Matrix:
        """``hom(d, b) -> hom(c, b)``, ``u |-> u o h`` for the basis element ``h`` of ``hom(c, d)``."""
        hdb = self._hom[d, b]
        m = self._comp[c, d, b]
        return m.select_columns([h * hdb + u for u in range(hdb)])

    def compose(self, a: str, b: str, c: str, f: Matrix, g: Matrix) -> Matrix:
        """Coordinates of ``g o f`` for coordinate columns ``f`` in hom(a,b), ``g`` in hom(b,c)."""
        return self._comp[a, b, c] @ kron(f, g)

    # -- structure --------------------------------------------------------
    def opposite(self) -> "LinCat":
        if self._op is None:
            op = opposite(self)
            op._op = self
            self._op = op
        return self._op

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, LinCat)
            and self.field == other.field
            and self.objects == other.objects
            and self.name == other.name
            and self._hom == other._hom
            and self._comp == other._comp
            and self._ident == other._ident
        )

    def __hash__(self):
        return hash((self.name, self.objects, tuple(sorted(self._hom.items()))))

    def __repr__(self):
        return f"LinCat({self.name!r}, objects={list(self.objects)}, total_hom_dim={self.total_dimension()})"


def same_category(c1: LinCat, c2: LinCat) -> bool:
    return c1 is c2 or c1 == c2


@dataclass(frozen=True)
class Violation:
    kind: str
    objects: tuple
    detail: str

    def to_json(self):
        return {"kind": self.kind, "objects": list(self.objects), "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"valid": self.valid, "violations": [v.to_json() for v in self.violations]}


def validate_category(c: LinCat) -> ValidationReport:
    """List every violated associativity and unit constraint."""
    F = c.field
    out: List[Violation] = []
    obj = c.objects
    for a, b, cc, d in product(obj, repeat=4):
        hab, hbc, hcd = c.homdim(a, b), c.homdim(b, cc), c.homdim(cc, d)
        if not (hab and hbc and hcd):
            continue
        left = c.comp(a, cc, d) @ kron(c.comp(a, b, cc), Matrix.identity(F, hcd))
        right = c.comp(a, b, d) @ kron(Matrix.identity(F, hab), c.comp(b, cc, d))
        if left != right:
            bad = [j for j in range(left.cols) if left.column(j) != right.column(j)]
            for j in bad[:4]:
                f, rest = divmod(j, hbc * hcd)
                g, h = divmod(rest, hcd)
                out.append(Violation(
                    "associativity", (a, b, cc, d),
                    f"(h o g) o f != h o (g o f) for f={c.labels(a, b)[f]}, g={c.labels(b, cc)[g]}, h={c.labels(cc, d)[h]}",
                ))
    for a, b in product(obj, repeat=2):
        hab = c.homdim(a, b)
        if not hab:
            continue
        eye = Matrix.identity(F, hab)
        pre = c.comp(a, a, b) @ kron(c.identity(a), eye)
        post = c.comp(a, b, b) @ kron(eye, c.identity(b))
        if pre != eye:
            out.append(Violation("unit", (a, b), f"f o id_{a} != f on hom({a},{b})"))
        if post != eye:
            out.append(Violation("unit", (a, b), f"id_{b} o f != f on hom({a},{b})"))
    return ValidationReport(tuple(out))


# -- quiver presentations ---------------------------------------------------

@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


def _parse_path(path, arrows_by_name) -> Tuple[str, ...]:
    if isinstance(path, str):
        path = tuple(p for p in path.split(".") if p)
    path = tuple(path)
    for p in path:
        if p not in arrows_by_name:
            raise SchemaError(f"relation uses unknown arrow {p!r}")
    for x, y in zip(path, path[1:]):
        if arrows_by_name[x].target != arrows_by_name[y].source:
            raise SchemaError(f"relation path {'.'.join(path)} does not compose")
    return path


def from_quiver(
    vertices: Sequence,
    arrows: Iterable,
    relations: Iterable[Mapping] = (),
    nilpotency_bound: int = 8,
    field: Field = QQ,
    name: str = "Q",
    relation_endpoints: Optional[Sequence[Tuple[str, str]]] = None,
) -> LinCat:
    """Path category of a quiver modulo the ideal generated by ``relations``.

    ``arrows`` are ``(name, source, target)`` triples; each relation maps a
    path (``"a.b"`` = first ``a`` then ``b``) to a coefficient.  Every path of
    length ``nilpotency_bound`` must lie in the ideal; otherwise the hom spaces
    are treated as infinite-dimensional.  Residue classes of the shortest
    paths form the hom bases.
    """
    verts = tuple(str(v) for v in vertices)
    arr = []
    for a in arrows:
        if isinstance(a, Mapping):
            a = (a["name"], a["source"], a["target"])
        n, s, t = (str(x) for x in a)
        if s not in verts or t not in verts:
            raise SchemaError(f"arrow {n} has unknown endpoint")
        arr.append(Arrow(n, s, t))
    by_name = {a.name: a for a in arr}
    if len(by_name) != len(arr):
        raise SchemaError("duplicate arrow names")
    L = int(nilpotency_bound)
    if L < 1:
        raise SchemaError("nilpotency_bound must be positive")

    def src(p, v):
        return by_name[p[0]].source if p else v

    def tgt(p, v):
        return by_name[p[-1]].target if p else v

    # all paths of length <= L, keyed by (source, target)
    paths: Dict[Tuple[str, str], List[Tuple[str, ...]]] = {(a, b): [] for a in verts for b in verts}
    frontier = [(v, ()) for v in verts]
    for v, _ in frontier:
        paths[v, v].append(())
    for _ in range(L):
        nxt = []
        for v, p in frontier:
            end = tgt(p, v)
            for a in arr:
                if a.source == end:
                    q = p + (a.name,)
                    nxt.append((v, q))
                    paths[v, a.target].append(q)
        frontier = nxt

    rels = []
    for k, r in enumerate(relations):
        terms = []
        for path, coeff in r.items():
            p = _parse_path(path, by_name)
            terms.append((p, field(coeff)))
        terms = [(p, c) for p, c in terms if c]
        if not terms:
            continue
        if any(not p for p, _ in terms):
            if relation_endpoints is None:
                raise SchemaError("relations containing trivial paths need explicit endpoints")
            s, t = (str(x) for x in relation_endpoints[k])
        else:
            s, t = src(terms[0][0], None), tgt(terms[0][0], None)
        for p, _ in terms:
            if p and (src(p, None) != s or tgt(p, None) != t):
                raise SchemaError(f"relation {k} mixes paths with different endpoints")
        rels.append((s, t, terms))

    def ideal_elements(truncate: bool):
        """Yield ``(a, b, {path: coeff})`` for elements ``p r q`` of the ideal."""
        for s, t, terms in rels:
            for a in verts:
                for p in paths[a, s]:
                    for b in verts:
                        for q in paths[t, b]:
                            el = {}
                            long_term = False
                            for w, cf in terms:
                                full = p + w + q
                                if len(full) >= L:
                                    long_term = True
                                    if truncate or len(full) > L:
                                        continue
                                el[full] = el.get(full, field.zero) + cf
                            if not truncate and long_term and any(len(p + w + q) > L for w, _ in terms):
                                continue
                            el = {w: cf for w, cf in el.items() if cf}
                            if el:
                                yield a, b, el

    def order(a, b, maxlen):
        return sorted((w for w in paths[a, b] if len(w) <= maxlen), key=lambda w: (-len(w), w))

    # every path of length L must already be in the (untruncated) ideal
    untrunc: Dict[Tuple[str, str], list] = {}
    for a, b, el in ideal_elements(truncate=False):
        untrunc.setdefault((a, b), []).append(el)
    for a in verts:
        for b in verts:
            longest = [w for w in paths[a, b] if len(w) == L]
            if not longest:
                continue
            cols = order(a, b, L)
            idx = {w: i for i, w in enumerate(cols)}
            rows = [[el.get(w, field.zero) for w in cols] for el in untrunc.get((a, b), [])]
            piv = set(_rref(rows, len(cols), field)) if rows else set()
            # a path is in the span iff reducing it by the ideal gives zero; with
            # longest-first ordering this holds iff its column is a pivot whose
            # row has no other nonzero entries among non-pivot columns
            for w in longest:
                j = idx[w]
                if j not in piv:
                    raise InfiniteDimensionError(
                        f"hom({a},{b}) still growing at nilpotency bound {L} (path {'.'.join(w)})"
                    )
                r = rows[sorted(piv).index(j)]
                if any(r[k] for k in range(len(cols)) if k not in piv):
                    raise InfiniteDimensionError(
                        f"hom({a},{b}) still growing at nilpotency bound {L} (path {'.'.join(w)})"
                    )

    trunc: Dict[Tuple[str, str], list] = {}
    for a, b, el in ideal_elements(truncate=True):
        trunc.setdefault((a, b), []).append(el)

    basis: Dict[Tuple[str, str], List[Tuple[str, ...]]] = {}
    reducer: Dict[Tuple[str, str], Dict[Tuple[str, ...], Dict[Tuple[str, ...], object]]] = {}
    for a in verts:
        for b in verts:
            cols = order(a, b, L - 1)
            rows = [[el.get(w, field.zero) for w in cols] for el in trunc.get((a, b), [])]
            piv = _rref(rows, len(cols), field) if rows else []
            pivset = set(piv)
            free = [cols[j] for j in range(len(cols)) if j not in pivset]
            free.sort(key=lambda w: (len(w), w))
            basis[a, b] = free
            red = {}
            for i, j in enumerate(piv):
                red[cols[j]] = {cols[k]: -rows[i][k] if not field.characteristic else (-rows[i][k]) % field.characteristic
                                for k in range(len(cols)) if k not in pivset and rows[i][k]}
            reducer[a, b] = red

    def coords(a, b, w):
        bs = basis[a, b]
        v = [field.zero] * len(bs)
        if len(w) >= L:
            return v
        pos = {x: i for i, x in enumerate(bs)}
        if w in pos:
            v[pos[w]] = field.one
            return v
        for x, cf in reducer[a, b].get(w, {}).items():
            v[pos[x]] = cf
        return v

    hom = {(a, b): len(basis[a, b]) for a in verts for b in verts}
    comp = {}
    for a, b, c in product(verts, repeat=3):
        hac = hom[a, c]
        cols = []
        for p in basis[a, b]:
            for q in basis[b, c]:
                cols.append(coords(a, c, p + q))
        comp[a, b, c] = Matrix.from_columns(field, cols, hac) if cols else Matrix.zeros(field, hac, 0)
    ident = {v: coords(v, v, ()) for v in verts}
    labels = {
        (a, b): tuple(".".join(w) if w else f"e{a}" for w in basis[a, b]) for a in verts for b in verts
    }
    return LinCat(field, verts, hom, comp, ident, name=name, labels=labels)


def unit_category(field: Field = QQ, obj: str = "*") -> LinCat:
    return from_quiver([obj], [], field=field, name="unit")


# -- subcategories and opposites ----------------------------------------------

def full_subcategory(c: LinCat, objs: Iterable, name: Optional[str] = None) -> LinCat:
    keep = [c.check_object(o) for o in objs]
    keep = [o for o in c.objects if o in set(keep)]
    hom = {(a, b): c.homdim(a, b) for a in keep for b in keep}
    comp = {(a, b, d): c.comp(a, b, d) for a, b, d in product(keep, repeat=3)}
    ident = {a: c.identity(a).column(0) for a in keep}
    labels = {(a, b): c.labels(a, b) for a in keep for b in keep}
    if name is None:
        name = f"{c.name}|{','.join(keep)}"
    return LinCat(c.field, keep, hom, comp, ident, name=name, labels=labels)


def opposite(c: LinCat) -> LinCat:
    """Opposite category; ``opposite(opposite(c)) == c`` exactly."""
    objs = c.objects
    hom = {(a, b): c.homdim(b, a) for a in objs for b in objs}
    comp = {}
    for a, b, d in product(objs, repeat=3):
        m = c.comp(d, b, a)  # hom(d,b) (x) hom(b,a) -> hom(d,a)
        h_ab, h_bd = hom[a, b], hom[b, d]  # op dims: hom(b,a), hom(d,b)
        perm = [g * h_ab + f for f in range(h_ab) for g in range(h_bd)]
        comp[a, b, d] = m.select_columns(perm)
    ident = {a: c.identity(a).column(0) for a in objs}
    labels = {(a, b): c.labels(b, a) for a in objs for b in objs}
    name = c.name[:-3] if c.name.endswith("^op") else c.name + "^op"
    return LinCat(c.field, objs, hom, comp, ident, name=name, labels=labels)


@dataclass(frozen=True)
class SubcatSpec:
    """A full subcategory of ``parent`` on the listed objects."""

    parent: LinCat
    objects: tuple = ()

    def __post_init__(self):
        objs = [self.parent.check_object(o) for o in self.objects]
        chosen = set(objs)
        object.__setattr__(self, "objects", tuple(o for o in self.parent.objects if o in chosen))

    @cached_property
    def cat(self) -> LinCat:
        return full_subcategory(self.parent, self.objects)

    @property
    def complement(self) -> tuple:
        return tuple(o for o in self.parent.objects if o not in self.objects)

    def __contains__(self, obj):
        return obj in self.objects


# -- algebras with an idempotent ----------------------------------------------

@dataclass(frozen=True)
class AlgebraWithIdempotent:
    """A finite-dimensional unital algebra with a chosen idempotent ``e``.

    ``mult`` is ``dim x dim^2``; column ``i * dim + j`` holds ``b_i * b_j``.
    """

    field: Field
    dim: int
    mult: Matrix
    unit: tuple
    idem: tuple
    name: str = "R"

    def vec(self, coords) -> Matrix:
        return Matrix.column_vector(self.field, list(coords))

    @property
    def unit_vec(self) -> Matrix:
        return self.vec(self.unit)

    @property
    def idem_vec(self) -> Matrix:
        return self.vec(self.idem)

    def basis_vec(self, i: int) -> Matrix:
        return Matrix.unit_vector(self.field, self.dim, i)

    def product(self, x: Matrix, y: Matrix) -> Matrix:
        return self.mult @ kron(x, y)

    def left_mult(self, x: Matrix) -> Matrix:
        """Matrix of ``y |-> x y``."""
        return self.mult @ kron(x, Matrix.identity(self.field, self.dim))

    def right_mult(self, x: Matrix) -> Matrix:
        """Matrix of ``y |-> y x``."""
        return self.mult @ kron(Matrix.identity(self.field, self.dim), x)

    def validate(self) -> List[str]:
        F, n = self.field, self.dim
        problems = []
        if self.mult.shape != (n, n * n):
            return [f"mult has shape {self.mult.shape}, expected {(n, n * n)}"]
        if len(self.unit) != n or len(self.idem) != n:
            return ["unit/idem have the wrong length"]
        eye = Matrix.identity(F, n)
        left = self.mult @ kron(self.mult, eye)
        right = self.mult @ kron(eye, self.mult)
        if left != right:
            problems.append("multiplication is not associative")
        if self.left_mult(self.unit_vec) != eye or self.right_mult(self.unit_vec) != eye:
            problems.append("unit is not a two-sided identity")
        return problems

    def is_idempotent(self) -> bool:
        e = self.idem_vec
        return self.product(e, e) == e


@dataclass
class PeirceData:
    """The two-object category of a Peirce decomposition with its embeddings into R."""

    algebra: AlgebraWithIdempotent
    cat: LinCat
    idempotents: Dict[str, Matrix]
    bases: Dict[Tuple[str, str], Matrix] = dc_field(default_factory=dict)

    def coordinates(self, x: str, y: str, r: Matrix) -> Matrix:
        """Coordinates in hom(x, y) of an element ``r`` of ``y R x``."""
        return solve_or_raise(self.bases[x, y], r, f"element of {y}R{x}")


PEIRCE_OBJECTS = ("E", "E*")


def peirce_decomposition(alg: AlgebraWithIdempotent) -> PeirceData:
    F = alg.field
    problems = alg.validate()
    if problems:
        raise PreconditionError("; ".join(problems))
    if not alg.is_idempotent():
        raise PreconditionError("idem is not idempotent: e*e != e")
    e = alg.idem_vec
    f = alg.unit_vec - e
    idem = {"E": e, "E*": f}
    bases = {}
    for x, y in product(PEIRCE_OBJECTS, repeat=2):
        # hom(X, Y) = y R x
        cols = [alg.product(alg.product(idem[y], alg.basis_vec(i)), idem[x]) for i in range(alg.dim)]
        span = Matrix.from_columns(F, [c.column(0) for c in cols], alg.dim)
        bases[x, y] = decompose(span, want=("image",)).image_basis
    hom = {k: v.cols for k, v in bases.items()}
    comp = {}
    for x, y, z in product(PEIRCE_OBJECTS, repeat=3):
        cols = []
        for i in range(hom[x, y]):
            fi = bases[x, y].select_columns([i])
            for j in range(hom[y, z]):
                gj = bases[y, z].select_columns([j])
                cols.append(solve_or_raise(bases[x, z], alg.product(gj, fi), "Peirce composite").column(0))
        comp[x, y, z] = Matrix.from_columns(F, cols, hom[x, z]) if cols else Matrix.zeros(F, hom[x, z], 0)
    ident = {x: solve_or_raise(bases[x, x], idem[x], "Peirce identity").column(0) for x in PEIRCE_OBJECTS}
    cat = LinCat(F, PEIRCE_OBJECTS, hom, comp, ident, name=f"peirce({alg.name})")
    return PeirceData(alg, cat, idem, bases)


def peirce_category(alg: AlgebraWithIdempotent) -> LinCat:
    """Two-object category with hom(E,E)=eRe, hom(E*,E)=eR(1-e), hom(E,E*)=(1-e)Re, hom(E*,E*)=(1-e)R(1-e)."""
    return peirce_decomposition(alg).cat
