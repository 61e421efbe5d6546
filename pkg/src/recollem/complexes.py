"""Bounded chain complexes of representations.

Homological indexing: ``diff[n]`` maps ``terms[n] -> terms[n-1]``.  Shifts
follow ``X[k]_n = X_{n-k}`` with the differential multiplied by ``(-1)^k``;
the cone of ``f: X -> Y`` has ``cone_n = Y_n (+) X_{n-1}`` and
``d(y, x) = (dy + f x, -dx)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    CategoryMismatchError,
    InternalConsistencyError,
    ResolutionLengthError,
    SchemaError,
)
from .exactla import Matrix, block_matrix, hstack, joint_kernel, right_inverse, solve, vstack
from .lincat import LinCat, same_category
from .repcat import (
    NatTrans,
    Rep,
    cokernel,
    direct_sum,
    dual,
    factor_through,
    hom_space,
    identity,
    kernel,
    representable,
    subrep,
    yoneda_transformation,
    zero_map,
    zero_rep,
)
from .report import Report

RESOLUTION_CAP = 16


class Complex:
    def __init__(self, cat: LinCat, terms: Mapping[int, Rep], diff: Optional[Mapping[int, NatTrans]] = None,
                 *, check: bool = True):
        self.cat = cat
        self.terms: Dict[int, Rep] = {}
        for n, x in terms.items():
            if not same_category(x.cat, cat):
                raise CategoryMismatchError(f"term {n} lives over {x.cat.name!r}")
            if not x.is_zero():
                self.terms[int(n)] = x
        self.diff: Dict[int, NatTrans] = {}
        for n, d in (diff or {}).items():
            n = int(n)
            if d.is_zero():
                continue
            if d.source != self[n] or d.target != self[n - 1]:
                raise SchemaError(f"differential {n} does not map term {n} to term {n - 1}")
            self.diff[n] = d
        if check:
            self.validate()

    def __getitem__(self, n: int) -> Rep:
        x = self.terms.get(n)
        return x if x is not None else zero_rep(self.cat)

    def d(self, n: int) -> NatTrans:
        t = self.diff.get(n)
        return t if t is not None else zero_map(self[n], self[n - 1])

    @property
    def field(self):
        return self.cat.field

    @property
    def support(self) -> Tuple[int, int]:
        """``(lo, hi)``; ``(0, -1)`` for the zero complex."""
        if not self.terms:
            return 0, -1
        return min(self.terms), max(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def validate(self) -> "Complex":
        for n in self.diff:
            if n - 1 in self.diff:
                comp = self.d(n).then(self.d(n - 1))
                if not comp.is_zero():
                    raise SchemaError(f"d o d != 0 at degree {n}")
            self.diff[n].validate()
        for x in self.terms.values():
            x.validate()
        return self

    @classmethod
    def concentrated(cls, x: Rep, degree: int = 0) -> "Complex":
        return cls(x.cat, {degree: x}, check=False)

    def dims(self) -> Dict[int, tuple]:
        return {n: x.dims() for n, x in sorted(self.terms.items())}

    def __repr__(self):
        return f"Complex({self.cat.name}, {self.dims()})"

    def to_json(self):
        return {
            "terms": {str(n): x.to_json() for n, x in sorted(self.terms.items())},
            "diff": {str(n): {a: m.to_json() for a, m in d.comps.items() if m.rows and m.cols}
                     for n, d in sorted(self.diff.items())},
        }

    @classmethod
    def from_json(cls, cat: LinCat, data, path: str = "complex") -> "Complex":
        if not isinstance(data, Mapping) or "terms" not in data:
            raise SchemaError("complex needs a 'terms' object", path)
        terms = {}
        for n, r in data["terms"].items():
            try:
                deg = int(n)
            except ValueError:
                raise SchemaError(f"degree {n!r} is not an integer", f"{path}.terms") from None
            terms[deg] = Rep.from_json(cat, r, f"{path}.terms.{n}")
        zero = zero_rep(cat)
        diff = {}
        for n, comps in (data.get("diff") or {}).items():
            try:
                deg = int(n)
            except ValueError:
                raise SchemaError(f"degree {n!r} is not an integer", f"{path}.diff") from None
            src, tgt = terms.get(deg, zero), terms.get(deg - 1, zero)
            if not isinstance(comps, Mapping):
                raise SchemaError("differential must map objects to matrices", f"{path}.diff.{n}")
            ms = {}
            for a, m in comps.items():
                a = cat.check_object(a)
                ms[a] = Matrix.from_json(cat.field, m, tgt.dim[a], src.dim[a], path=f"{path}.diff.{n}.{a}")
            diff[deg] = NatTrans(src, tgt, ms)
        return cls(cat, terms, diff)


class ChainMap:
    def __init__(self, source: Complex, target: Complex, comps: Mapping[int, NatTrans], *, check: bool = True):
        self.source, self.target = source, target
        self.comps: Dict[int, NatTrans] = {int(n): t for n, t in comps.items() if not t.is_zero()}
        if check:
            self.validate()

    def __getitem__(self, n: int) -> NatTrans:
        t = self.comps.get(n)
        return t if t is not None else zero_map(self.source[n], self.target[n])

    def degrees(self):
        lo1, hi1 = self.source.support
        lo2, hi2 = self.target.support
        return range(min(lo1, lo2), max(hi1, hi2) + 1)

    def validate(self) -> "ChainMap":
        for n in self.degrees():
            lhs = self[n].then(self.target.d(n))
            rhs = self.source.d(n).then(self[n - 1])
            if lhs.comps != rhs.comps:
                raise SchemaError(f"chain map does not commute with differentials at degree {n}")
        return self

    def then(self, other: "ChainMap") -> "ChainMap":
        degs = set(self.comps) & set(other.comps)
        return ChainMap(self.source, other.target, {n: self[n].then(other[n]) for n in degs}, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {n: self[n] + other[n] for n in degs}, check=False)

    def __neg__(self):
        return ChainMap(self.source, self.target, {n: -t for n, t in self.comps.items()}, check=False)


def identity_map(x: Complex) -> ChainMap:
    return ChainMap(x, x, {n: identity(t) for n, t in x.terms.items()}, check=False)


def map_of_reps(t: NatTrans, degree: int = 0, source: Optional[Complex] = None,
                target: Optional[Complex] = None) -> ChainMap:
    source = source or Complex.concentrated(t.source, degree)
    target = target or Complex.concentrated(t.target, degree)
    return ChainMap(source, target, {degree: t}, check=False)


# -- homology ---------------------------------------------------------------------------

@dataclass
class HomologyData:
    rep: Rep
    cycles: NatTrans  # Z_n -> X_n
    proj: NatTrans  # Z_n -> H_n


def homology_data(x: Complex, n: int) -> HomologyData:
    k = kernel(x.d(n))
    b = factor_through(x.d(n + 1), k.incl)
    if b is None:
        raise InternalConsistencyError(f"image of d_{n + 1} not inside cycles")
    ck = cokernel(b)
    return HomologyData(ck.quot, k.incl, ck.proj)


def homology(x: Complex, n: int) -> Rep:
    return homology_data(x, n).rep


def homology_dims(x: Complex, degrees=None) -> Dict[int, tuple]:
    lo, hi = x.support
    degrees = degrees if degrees is not None else range(lo, hi + 1)
    return {n: homology(x, n).dims() for n in degrees}


def is_acyclic(x: Complex) -> bool:
    lo, hi = x.support
    return all(homology(x, n).is_zero() for n in range(lo, hi + 1))


def induced_on_homology(f: ChainMap, n: int, hs: Optional[HomologyData] = None,
                        ht: Optional[HomologyData] = None) -> NatTrans:
    hs = hs or homology_data(f.source, n)
    ht = ht or homology_data(f.target, n)
    comps = {}
    for a in f.source.cat.objects:
        s = right_inverse(hs.proj.comps[a])
        v = f[n].comps[a] @ hs.cycles.comps[a] @ s
        z = solve(ht.cycles.comps[a], v)
        if z is None:
            raise InternalConsistencyError("chain map does not preserve cycles")
        comps[a] = ht.proj.comps[a] @ z
    return NatTrans(hs.rep, ht.rep, comps, check=False)


def is_quasi_iso(f: ChainMap) -> bool:
    lo = min(f.source.support[0], f.target.support[0])
    hi = max(f.source.support[1], f.target.support[1])
    for n in range(lo, hi + 1):
        if not induced_on_homology(f, n).is_iso():
            return False
    return True


# -- shift and cone -------------------------------------------------------------------------

def shift(x: Complex, k: int) -> Complex:
    sign = -1 if k % 2 else 1
    terms = {n + k: t for n, t in x.terms.items()}
    diff = {n + k: d.scale(sign) if sign < 0 else d for n, d in x.diff.items()}
    return Complex(x.cat, terms, diff, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k), {n + k: t for n, t in f.comps.items()}, check=False)


@dataclass
class ConeData:
    cone: Complex
    incl: ChainMap  # Y -> cone
    proj: ChainMap  # cone -> X[1]


def cone_data(f: ChainMap) -> ConeData:
    x, y = f.source, f.target
    F = x.field
    lo = min(y.support[0], x.support[0] + 1)
    hi = max(y.support[1], x.support[1] + 1)
    terms, diff, incl, proj = {}, {}, {}, {}
    for n in range(lo, hi + 1):
        terms[n] = direct_sum([y[n], x[n - 1]], x.cat)
    zero = zero_rep(x.cat)
    get = lambda n: terms.get(n, zero)  # noqa: E731
    for n in range(lo, hi + 2):
        comps = {}
        for a in x.cat.objects:
            rs = [y[n - 1].dim[a], x[n - 2].dim[a]]
            cs = [y[n].dim[a], x[n - 1].dim[a]]
            comps[a] = block_matrix(F, rs, cs, {
                (0, 0): y.d(n).comps[a],
                (0, 1): f[n - 1].comps[a],
                (1, 1): -x.d(n - 1).comps[a],
            })
        diff[n] = NatTrans(get(n), get(n - 1), comps, check=False)
    xs = shift(x, 1)
    for n in range(lo, hi + 1):
        ci, cp = {}, {}
        for a in x.cat.objects:
            dy, dx = y[n].dim[a], x[n - 1].dim[a]
            ci[a] = block_matrix(F, [dy, dx], [dy], {(0, 0): Matrix.identity(F, dy)})
            cp[a] = block_matrix(F, [dx], [dy, dx], {(0, 1): Matrix.identity(F, dx)})
        incl[n] = NatTrans(y[n], get(n), ci, check=False)
        proj[n] = NatTrans(get(n), xs[n], cp, check=False)
    c = Complex(x.cat, terms, diff, check=False)
    return ConeData(c, ChainMap(y, c, incl, check=False), ChainMap(c, xs, proj, check=False))


def cone(f: ChainMap) -> Complex:
    return cone_data(f).cone


def cone_les_report(f: ChainMap) -> Report:
    """Exactness of ``H_n X -> H_n Y -> H_n cone -> H_{n-1} X -> ...`` by ranks."""
    cd = cone_data(f)
    x, y, c = f.source, f.target, cd.cone
    lo = min(x.support[0], y.support[0], c.support[0])
    hi = max(x.support[1], y.support[1], c.support[1]) + 1
    rep = Report("cone_les")
    bad = []
    xs = shift(x, 1)
    for n in range(lo - 1, hi + 1):
        hx, hy, hc, hx1 = (homology_data(x, n), homology_data(y, n), homology_data(c, n), homology_data(xs, n))
        fstar = induced_on_homology(f, n, hx, hy)
        istar = induced_on_homology(cd.incl, n, hy, hc)
        pstar = induced_on_homology(cd.proj, n, hc, hx1)
        # H_n(X[1]) = H_{n-1}(X); next f_* out of it is f_{n-1} on the same spaces
        fnext = induced_on_homology(f, n - 1)
        for a in x.cat.objects:
            chain = [(fstar.comps[a], istar.comps[a], hy.rep.dim[a]),
                     (istar.comps[a], pstar.comps[a], hc.rep.dim[a])]
            if pstar.comps[a].rows == fnext.comps[a].cols:
                chain.append((pstar.comps[a], fnext.comps[a], hx1.rep.dim[a]))
            for m_in, m_out, d in chain:
                if not (m_out @ m_in).is_zero() or m_in.rank() + m_out.rank() != d:
                    bad.append({"degree": n, "object": a})
    rep.clause("long_exact_sequence", not bad, bad or None)
    return rep


# -- projective resolutions -----------------------------------------------------------------

@dataclass
class Generator:
    obj: str
    element: Matrix  # column vector in the covered representation at obj


@dataclass
class ResolutionStep:
    degree: int
    kernel_basis: Dict[str, Matrix]  # K_n inside P_{n-1} (+) X_n
    kernel: Rep
    cover: NatTrans  # P_n -> K_n
    generators: List[Generator]


@dataclass
class Resolution:
    res: Complex
    aug: ChainMap
    steps: Dict[int, ResolutionStep] = dc_field(default_factory=dict)

    def generators(self, n: int) -> List[str]:
        st = self.steps.get(n)
        return [g.obj for g in st.generators] if st else []


def as_complex(x: Union[Rep, Complex]) -> Complex:
    return Complex.concentrated(x) if isinstance(x, Rep) else x


def projective_cover(k: Rep) -> Tuple[List[Generator], Rep, NatTrans]:
    """Greedy generating set of ``k`` by representables, pruned to an irredundant one."""
    cat = k.cat
    F = cat.field
    gens: List[Generator] = []

    def image_at(gs, o):
        cols = []
        for g in gs:
            for u in range(cat.homdim(g.obj, o)):
                cols.append((k.action[g.obj, o, u] @ g.element).column(0))
        return Matrix.from_columns(F, cols, k.dim[o]) if cols else Matrix.zeros(F, k.dim[o], 0)

    for o in cat.objects:
        for j in range(k.dim[o]):
            e = Matrix.unit_vector(F, k.dim[o], j)
            if solve(image_at(gens, o), e) is None:
                gens.append(Generator(o, e))
    changed = True
    while changed:
        changed = False
        for i in range(len(gens)):
            rest = gens[:i] + gens[i + 1:]
            if solve(image_at(rest, gens[i].obj), gens[i].element) is not None:
                gens = rest
                changed = True
                break
    reps = [representable(cat, g.obj) for g in gens]
    p = direct_sum(reps, cat)
    comps = {}
    for o in cat.objects:
        blocks = [yoneda_transformation(r, g.element, g.obj, k).comps[o] for r, g in zip(reps, gens)]
        comps[o] = hstack(F, k.dim[o], blocks) if blocks else Matrix.zeros(F, k.dim[o], 0)
    cover = NatTrans(p, k, comps, check=False)
    if any(m.rank() != m.rows for m in comps.values()):
        raise InternalConsistencyError("projective cover is not surjective")
    return gens, p, cover


def projective_resolution(x: Union[Rep, Complex], cap: int = RESOLUTION_CAP) -> Resolution:
    """Bounded complex of sums of representables with a quasi-isomorphism onto ``x``."""
    x = as_complex(x)
    cat = x.cat
    F = cat.field
    if x.is_zero():
        z = Complex(cat, {}, check=False)
        return Resolution(z, ChainMap(z, x, {}, check=False))
    lo, hi = x.support
    P: Dict[int, Rep] = {}
    dP: Dict[int, NatTrans] = {}
    aug: Dict[int, NatTrans] = {}
    steps: Dict[int, ResolutionStep] = {}
    zero = zero_rep(cat)
    n = lo
    while True:
        if n > hi + cap:
            raise ResolutionLengthError(f"projective resolution longer than {cap} steps beyond degree {hi}")
        p_prev = P.get(n - 1, zero)
        p_prev2 = P.get(n - 2, zero)
        bases = {}
        for a in cat.objects:
            rs = [p_prev2.dim[a], x[n - 1].dim[a]]
            cs = [p_prev.dim[a], x[n].dim[a]]
            blocks = {(1, 1): -x.d(n).comps[a]}
            if n - 1 in dP:
                blocks[0, 0] = dP[n - 1].comps[a]
            if n - 1 in aug:
                blocks[1, 0] = aug[n - 1].comps[a]
            m = block_matrix(F, rs, cs, blocks)
            bases[a] = joint_kernel(F, sum(cs), [m])
        ambient = direct_sum([p_prev, x[n]], cat)
        k = subrep(ambient, bases)
        if k.is_zero() and n > hi:
            break
        gens, p, cover = projective_cover(k)
        P[n] = p
        comps_d, comps_f = {}, {}
        for a in cat.objects:
            inc = bases[a] @ cover.comps[a]
            comps_d[a] = inc.select_rows(list(range(p_prev.dim[a])))
            comps_f[a] = inc.select_rows(list(range(p_prev.dim[a], p_prev.dim[a] + x[n].dim[a])))
        dP[n] = NatTrans(p, p_prev, comps_d, check=False)
        aug[n] = NatTrans(p, x[n], comps_f, check=False)
        steps[n] = ResolutionStep(n, bases, k, cover, gens)
        n += 1
    res = Complex(cat, P, {m: d for m, d in dP.items() if m - 1 in P}, check=False)
    return Resolution(res, ChainMap(res, x, aug, check=False), steps)


def _generator_unit(p: Rep, gens: Sequence[Generator], i: int, cat: LinCat) -> Matrix:
    """The identity of the i-th summand, as an element of ``p`` at that summand's object."""
    o = gens[i].obj
    off = sum(cat.homdim(g.obj, o) for g in gens[:i])
    F = cat.field
    col = [F.zero] * p.dim[o]
    ident = cat.identity(o).column(0)
    for t, v in enumerate(ident):
        col[off + t] = v
    return Matrix.column_vector(F, col)


def lift_map_projective(g: ChainMap, src: Resolution, tgt: Resolution) -> ChainMap:
    """``G: P -> P'`` with ``aug' o G = g o aug`` exactly, built generator by generator."""
    cat = g.source.cat
    F = cat.field
    P, P2 = src.res, tgt.res
    out: Dict[int, NatTrans] = {}
    for n in sorted(src.steps):
        st = src.steps[n]
        reps = []
        blocks_by_obj = {o: [] for o in cat.objects}
        for i, gen in enumerate(st.generators):
            o = gen.obj
            u = _generator_unit(P[n], st.generators, i, cat)
            want_d = out[n - 1].comps[o] @ (P.d(n).comps[o] @ u) if n - 1 in out else Matrix.zeros(F, P2[n - 1].dim[o], 1)
            want_x = g[n].comps[o] @ (src.aug[n].comps[o] @ u)
            lhs = vstack(F, P2[n].dim[o], [P2.d(n).comps[o], tgt.aug[n].comps[o]])
            w = solve(lhs, vstack(F, 1, [want_d, want_x]))
            if w is None:
                raise InternalConsistencyError(f"cannot lift map at degree {n}")
            r = representable(cat, o)
            reps.append(r)
            t = yoneda_transformation(r, w, o, P2[n])
            for b in cat.objects:
                blocks_by_obj[b].append(t.comps[b])
        comps = {b: hstack(F, P2[n].dim[b], blocks_by_obj[b]) if blocks_by_obj[b] else Matrix.zeros(F, P2[n].dim[b], 0)
                 for b in cat.objects}
        out[n] = NatTrans(P[n], P2[n], comps, check=False)
    return ChainMap(P, P2, out, check=False)


# -- duality and injective resolutions ---------------------------------------------------------

def dual_complex(x: Complex) -> Complex:
    """``(DX)_n = D(X_{-n})`` over the opposite category."""
    op = x.cat.opposite()
    bare = Complex(op, {-n: dual(t) for n, t in x.terms.items()}, check=False)
    diff = {}
    for n, d in x.diff.items():
        # d_n: X_n -> X_{n-1} dualises to D(X_{n-1}) -> D(X_n), i.e. degree -(n-1) -> -n
        diff[-n + 1] = NatTrans(bare[-n + 1], bare[-n], {a: m.T for a, m in d.comps.items()}, check=False)
    return Complex(op, bare.terms, diff, check=False)


def dual_chain_map(f: ChainMap, source_dual: Optional[Complex] = None, target_dual: Optional[Complex] = None) -> ChainMap:
    """``D(f): D(target) -> D(source)``."""
    s = target_dual or dual_complex(f.target)
    t = source_dual or dual_complex(f.source)
    comps = {-n: NatTrans(s[-n], t[-n], {a: m.T for a, m in c.comps.items()}, check=False)
             for n, c in f.comps.items()}
    return ChainMap(s, t, comps, check=False)


@dataclass
class InjectiveResolution:
    res: Complex
    aug: ChainMap  # x -> res
    dual_resolution: Resolution  # projective resolution of D(x) over the opposite category


def injective_resolution(x: Union[Rep, Complex], cap: int = RESOLUTION_CAP) -> InjectiveResolution:
    x = as_complex(x)
    dx = dual_complex(x)
    pr = projective_resolution(dx, cap)
    res = dual_complex(pr.res)
    # D(aug): D(DX) = X -> D(P)
    comps = {}
    for n, t in pr.aug.comps.items():
        comps[-n] = NatTrans(x[-n], res[-n], {a: m.T for a, m in t.comps.items()}, check=False)
    return InjectiveResolution(res, ChainMap(x, res, comps, check=False), pr)


def lift_map_injective(g: ChainMap, src: InjectiveResolution, tgt: InjectiveResolution) -> ChainMap:
    """``G: I -> I'`` with ``G o aug = aug' o g``, by duality."""
    dg = dual_chain_map(g, src.dual_resolution.aug.target, tgt.dual_resolution.aug.target)
    lifted = lift_map_projective(dg, tgt.dual_resolution, src.dual_resolution)
    comps = {-n: NatTrans(src.res[-n], tgt.res[-n], {a: m.T for a, m in t.comps.items()}, check=False)
             for n, t in lifted.comps.items()}
    return ChainMap(src.res, tgt.res, comps, check=False)


# -- derived hom ---------------------------------------------------------------------------

def hom_complex_differential(res: Resolution, y: Complex, n: int) -> Matrix:
    """``D: Hom^n -> Hom^{n-1}``, ``D phi = d_Y phi - (-1)^n phi d_P``.

    ``Hom^n = (+)_k (+)_{generators i of P_k} Y_{k+n}(a_i)``.
    """
    cat = y.cat
    F = cat.field
    P = res.res
    plo, phi_ = P.support
    ks = list(range(plo, phi_ + 1))

    def layout(deg):
        sizes, index = [], {}
        for k in ks:
            for i, o in enumerate(res.generators(k)):
                index[k, i] = len(sizes)
                sizes.append(y[k + deg].dim[o])
        return sizes, index

    src_sizes, src_idx = layout(n)
    tgt_sizes, tgt_idx = layout(n - 1)
    blocks = {}
    sign = -1 if n % 2 else 1
    for k in ks:
        gens = res.generators(k)
        for i, o in enumerate(gens):
            # d_Y term: phi_k -> d_Y phi_k, component (k, i) -> (k, i)
            dy = y.d(k + n).comps[o]
            if dy.rows and dy.cols:
                blocks[tgt_idx[k, i], src_idx[k, i]] = dy
        if k - 1 not in ks:
            continue
        prev = res.generators(k - 1)
        for j, oj in enumerate(gens):
            u = _generator_unit(P[k], res.steps[k].generators, j, cat)
            w = P.d(k).comps[oj] @ u
            off = 0
            for i, oi in enumerate(prev):
                h = cat.homdim(oi, oj)
                coeffs = w.column(0)[off:off + h]
                off += h
                m = y[k - 1 + n].act(oi, oj, coeffs)
                if not m.is_zero():
                    # -(-1)^n phi_{k-1} d_P: source block (k-1, i), target block (k, j)
                    key = (tgt_idx[k, j], src_idx[k - 1, i])
                    contrib = m.scale(-sign)
                    blocks[key] = blocks[key] + contrib if key in blocks else contrib
    return block_matrix(F, tgt_sizes, src_sizes, blocks)


def derived_hom_window(res: Resolution, y: Complex) -> range:
    plo, phi_ = res.res.support
    ylo, yhi = y.support
    if res.res.is_zero() or y.is_zero():
        return range(0)
    return range(ylo - phi_, yhi - plo + 1)


def derived_hom(x: Union[Rep, Complex], y: Union[Rep, Complex], res: Optional[Resolution] = None) -> Dict[int, int]:
    """``n |-> dim Hom_D(x, y[-n])`` over the support window."""
    x, y = as_complex(x), as_complex(y)
    if not same_category(x.cat, y.cat):
        raise CategoryMismatchError("derived_hom needs complexes over one category")
    res = res or projective_resolution(x)
    out = {}
    for n in derived_hom_window(res, y):
        dn = hom_complex_differential(res, y, n)
        dn1 = hom_complex_differential(res, y, n + 1)
        out[n] = dn.cols - dn.rank() - dn1.rank()
    return out


def nonzero_part(d: Mapping[int, int]) -> Dict[int, int]:
    return {n: v for n, v in d.items() if v}


def tenshom_check(a: str, y: Union[Rep, Complex], strict: bool = True) -> Report:
    """``dim Hom_D(repr(a), y[-n]) = dim H_n(y(a))`` for every degree in the window."""
    y = as_complex(y)
    cat = y.cat
    a = cat.check_object(a)
    dh = derived_hom(Complex.concentrated(representable(cat, a)), y)
    lo, hi = y.support
    bad = []
    rows = {}
    for n in range(lo, hi + 1):
        h = homology(y, n).dim[a]
        rows[n] = [dh.get(n, 0), h]
        if dh.get(n, 0) != h:
            bad.append(n)
    rep = Report("tenshom", {"object": a})
    rep.clause("derived_hom_equals_homology", not bad, bad or None)
    rep.data = {"degrees": rows}
    if strict and bad:
        raise InternalConsistencyError(f"derived hom from repr({a}) disagrees with homology in degrees {bad}")
    return rep


# -- homotopies ----------------------------------------------------------------------------

def _flat(t: NatTrans) -> list:
    out = []
    for a in t.cat.objects:
        for r in t.comps[a].data:
            out.extend(r)
    return out


def _solve_nat_system(field, unknowns, equations):
    """Solve ``sum fn(u_key) = rhs`` over every equation, ``u_key`` ranging over a hom-space span.

    ``unknowns`` maps keys to basis lists; each equation is ``(rhs, [(key, fn), ...])``
    with ``fn`` linear.  Returns ``{key: transformation}`` (absent keys are zero) or None.
    """
    sizes = [len(_flat(rhs)) for rhs, _ in equations]
    nrows = sum(sizes)
    rhs_vec = []
    for rhs, _ in equations:
        rhs_vec.extend(_flat(rhs))
    cols, owners = [], []
    for key, basis in unknowns.items():
        for b_idx, b in enumerate(basis):
            col = []
            for (rhs, terms), size in zip(equations, sizes):
                part = [field.zero] * size
                for k, fn in terms:
                    if k == key:
                        part = [field(p + q) for p, q in zip(part, _flat(fn(b)))]
                col.extend(part)
            cols.append(col)
            owners.append((key, b_idx))
    if not cols:
        return {} if all(v == 0 for v in rhs_vec) else None
    m = Matrix.from_columns(field, cols, nrows)
    sol = solve(m, Matrix.column_vector(field, rhs_vec))
    if sol is None:
        return None
    out = {}
    for (key, b_idx), c in zip(owners, sol.column(0)):
        if c:
            term = unknowns[key][b_idx].scale(c)
            out[key] = out[key] + term if key in out else term
    return out


def null_homotopy(f: ChainMap) -> Optional[Dict[int, NatTrans]]:
    """``h_n: S_n -> T_{n+1}`` with ``f_n = d h_n + h_{n-1} d``, or None if ``f`` is not null-homotopic."""
    S, T = f.source, f.target
    lo, hi = S.support
    degs = [n for n in range(lo, hi + 1) if not S[n].is_zero()]
    unknowns = {n: hom_space(S[n], T[n + 1]) for n in degs}
    equations = []
    for n in degs:
        terms = [(n, lambda b, n=n: b.then(T.d(n + 1)))]
        if n - 1 in unknowns:
            terms.append((n - 1, lambda b, n=n: S.d(n).then(b)))
        equations.append((f[n], terms))
    sol = _solve_nat_system(S.field, unknowns, equations)
    if sol is None:
        return None
    return {n: sol.get(n, zero_map(S[n], T[n + 1])) for n in degs}


def solve_chain_map(alpha: ChainMap, beta: ChainMap) -> Optional[ChainMap]:
    """A chain map ``G: alpha.target -> beta.target`` with ``G o alpha`` homotopic to ``beta``.

    Exists whenever ``alpha`` is a quasi-isomorphism and ``beta.target`` is a bounded
    complex of injectives.
    """
    X, T, I = alpha.source, alpha.target, beta.target
    tlo, thi = T.support
    xlo, xhi = X.support
    tdegs = [n for n in range(tlo, thi + 1) if not T[n].is_zero()]
    xdegs = [n for n in range(xlo, xhi + 1) if not X[n].is_zero()]
    unknowns = {("G", n): hom_space(T[n], I[n]) for n in tdegs}
    unknowns.update({("h", n): hom_space(X[n], I[n + 1]) for n in xdegs})
    equations = []
    for n in tdegs:
        terms = [(("G", n), lambda b, n=n: b.then(I.d(n)))]
        if ("G", n - 1) in unknowns:
            terms.append((("G", n - 1), lambda b, n=n: -T.d(n).then(b)))
        equations.append((zero_map(T[n], I[n - 1]), terms))
    for n in xdegs:
        terms = [(("h", n), lambda b, n=n: -b.then(I.d(n + 1)))]
        if ("G", n) in unknowns:
            terms.append((("G", n), lambda b, n=n: alpha[n].then(b)))
        if ("h", n - 1) in unknowns:
            terms.append((("h", n - 1), lambda b, n=n: -X.d(n).then(b)))
        equations.append((beta[n], terms))
    sol = _solve_nat_system(X.field, unknowns, equations)
    if sol is None:
        return None
    comps = {n: t for (kind, n), t in sol.items() if kind == "G"}
    return ChainMap(T, I, comps, check=False)


def extend_over_cone(c: ChainMap, u: ChainMap) -> Optional[ChainMap]:
    """Extend ``u: X -> Z`` over ``X -> cone(c)`` for ``c: P -> X``, given ``u o c`` is null-homotopic."""
    h = null_homotopy(c.then(u))
    if h is None:
        return None
    cd = cone_data(c)
    Z = u.target
    F = Z.field
    comps = {}
    lo, hi = cd.cone.support
    for n in range(lo, hi + 1):
        src = cd.cone[n]
        if src.is_zero():
            continue
        hn = h.get(n - 1)
        m = {}
        for a in Z.cat.objects:
            blocks = [u[n].comps[a], hn.comps[a] if hn is not None else
                      Matrix.zeros(F, Z[n].dim[a], c.source[n - 1].dim[a])]
            m[a] = hstack(F, Z[n].dim[a], blocks)
        comps[n] = NatTrans(src, Z[n], m, check=False)
    return ChainMap(cd.cone, Z, comps, check=False)
