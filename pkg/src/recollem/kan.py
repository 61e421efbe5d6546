"""Restriction to a full subcategory and its two Kan extensions.

Both extensions are computed objectwise from explicit block matrices:

* ``lan(F)(c)`` is the quotient of ``T_c = (+)_a hom(a, c) (x) F(a)`` by the
  relations ``(u' o g) (x) v ~ u' (x) F(g) v``; vectors in ``T_c`` are indexed
  row-major by ``(u, v)`` inside each ``a``-block.
* ``ran(H)(c)`` is the subspace of ``(+)_b Hom(hom(c, b), H(b))`` of families
  ``phi_b`` with ``H(g) phi_b = phi_b' (g o -)``; each ``phi_b`` is stored
  row-major as an ``H(b) x hom(c, b)`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .errors import CategoryMismatchError, InternalConsistencyError
from .exactla import (
    Matrix,
    block_matrix,
    cokernel_of_span,
    hstack,
    joint_kernel,
    kron,
    right_inverse,
    solve_or_raise,
)
from .lincat import LinCat, SubcatSpec, same_category
from .repcat import NatTrans, Rep, identity


def _check_over(x: Rep, cat: LinCat, what: str):
    if not same_category(x.cat, cat):
        raise CategoryMismatchError(f"{what} must be a representation of {cat.name!r}, got {x.cat.name!r}")


def restrict(x: Rep, sub: SubcatSpec) -> Rep:
    _check_over(x, sub.parent, "restrict input")
    A = sub.cat
    dim = {a: x.dim[a] for a in A.objects}
    action = {(a, b, i): x.action[a, b, i] for a, b, i in A.basis()}
    return Rep(A, dim, action, check=False)


def restrict_map(t: NatTrans, sub: SubcatSpec, source: Optional[Rep] = None, target: Optional[Rep] = None) -> NatTrans:
    source = source or restrict(t.source, sub)
    target = target or restrict(t.target, sub)
    return NatTrans(source, target, {a: t.comps[a] for a in sub.objects}, check=False)


# -- left Kan extension ------------------------------------------------------------

@dataclass
class LanData:
    """``lan(F)`` together with the presentation used at each object."""

    rep: Rep
    sizes: Dict[str, List[int]]  # block sizes hom(a, c) * dim F(a), a in A
    proj: Dict[str, Matrix]  # T_c -> lan(F)(c)
    section: Dict[str, Matrix]


def lan_data(f: Rep, sub: SubcatSpec) -> LanData:
    _check_over(f, sub.cat, "lan input")
    C, A = sub.parent, sub.cat
    F = C.field
    aobjs = A.objects
    sizes, proj, section = {}, {}, {}
    for c in C.objects:
        sz = [C.homdim(a, c) * f.dim[a] for a in aobjs]
        total = sum(sz)

        def relations(c=c, sz=sz):
            for ia, a in enumerate(aobjs):
                for ib, a2 in enumerate(aobjs):
                    h2 = C.homdim(a2, c)
                    if not (h2 and f.dim[a]):
                        continue
                    for g in range(C.homdim(a, a2)):
                        w = C.comp(a, a2, c).select_columns([g * h2 + u for u in range(h2)])
                        left = kron(w, Matrix.identity(F, f.dim[a]))
                        right = kron(Matrix.identity(F, h2), f.action[a, a2, g])
                        blocks = {(ia, 0): left}
                        if ib == ia:
                            blocks[ia, 0] = left - right
                        else:
                            blocks[ib, 0] = -right
                        yield block_matrix(F, sz, [h2 * f.dim[a]], blocks)

        q = cokernel_of_span(F, total, relations())
        sizes[c] = sz
        proj[c] = q
        section[c] = right_inverse(q)
    dim = {c: proj[c].rows for c in C.objects}
    action = {}
    for c, d, h in C.basis():
        if not (dim[c] and dim[d]):
            continue
        blocks = {}
        for ia, a in enumerate(aobjs):
            if f.dim[a] and C.homdim(a, c) and C.homdim(a, d):
                post = C.post_matrix(a, c, d, h)
                blocks[ia, ia] = kron(post, Matrix.identity(F, f.dim[a]))
        m = block_matrix(F, sizes[d], sizes[c], blocks)
        action[c, d, h] = proj[d] @ m @ section[c]
    return LanData(Rep(C, dim, action, check=False), sizes, proj, section)


def lan(f: Rep, sub: SubcatSpec) -> Rep:
    return lan_data(f, sub).rep


def lan_map(t: NatTrans, sub: SubcatSpec, src: Optional[LanData] = None, tgt: Optional[LanData] = None) -> NatTrans:
    src = src or lan_data(t.source, sub)
    tgt = tgt or lan_data(t.target, sub)
    C = sub.parent
    F = C.field
    comps = {}
    for c in C.objects:
        blocks = {}
        for ia, a in enumerate(sub.objects):
            h = C.homdim(a, c)
            if h:
                blocks[ia, ia] = kron(Matrix.identity(F, h), t.comps[a])
        m = block_matrix(F, tgt.sizes[c], src.sizes[c], blocks)
        comps[c] = tgt.proj[c] @ m @ src.section[c]
    return NatTrans(src.rep, tgt.rep, comps, check=False)


# -- right Kan extension -----------------------------------------------------------

@dataclass
class RanData:
    rep: Rep
    sizes: Dict[str, List[int]]  # block sizes dim H(b) * hom(c, b), b in A
    basis: Dict[str, Matrix]  # inclusion of ran(H)(c) into the family space


def ran_data(h: Rep, sub: SubcatSpec) -> RanData:
    _check_over(h, sub.cat, "ran input")
    C, A = sub.parent, sub.cat
    F = C.field
    bobjs = A.objects
    sizes, bases = {}, {}
    for c in C.objects:
        sz = [h.dim[b] * C.homdim(c, b) for b in bobjs]
        total = sum(sz)

        def constraints(c=c, sz=sz):
            for ib, b in enumerate(bobjs):
                hcb = C.homdim(c, b)
                for ib2, b2 in enumerate(bobjs):
                    # the equation lives in Hom(hom(c, b), H(b2))
                    nrows = h.dim[b2] * hcb
                    if not nrows:
                        continue
                    for g in range(C.homdim(b, b2)):
                        blocks = {}
                        if sz[ib]:
                            blocks[0, ib] = kron(h.action[b, b2, g], Matrix.identity(F, hcb))
                        if sz[ib2]:
                            pg = C.post_matrix(c, b, b2, g)
                            right = kron(Matrix.identity(F, h.dim[b2]), pg.T)
                            blocks[0, ib2] = blocks[0, ib2] - right if (0, ib2) in blocks else -right
                        if blocks:
                            yield block_matrix(F, [nrows], sz, blocks)

        sizes[c] = sz
        bases[c] = joint_kernel(F, total, constraints())
    dim = {c: bases[c].cols for c in C.objects}
    action = {}
    for c, d, hh in C.basis():
        if not (dim[c] and dim[d]):
            continue
        blocks = {}
        for ib, b in enumerate(bobjs):
            if h.dim[b] and C.homdim(d, b) and C.homdim(c, b):
                pre = C.pre_matrix(c, d, b, hh)
                blocks[ib, ib] = kron(Matrix.identity(F, h.dim[b]), pre.T)
        m = block_matrix(F, sizes[d], sizes[c], blocks)
        action[c, d, hh] = solve_or_raise(bases[d], m @ bases[c], "ran action")
    return RanData(Rep(C, dim, action, check=False), sizes, bases)


def ran(h: Rep, sub: SubcatSpec) -> Rep:
    return ran_data(h, sub).rep


def ran_map(t: NatTrans, sub: SubcatSpec, src: Optional[RanData] = None, tgt: Optional[RanData] = None) -> NatTrans:
    src = src or ran_data(t.source, sub)
    tgt = tgt or ran_data(t.target, sub)
    C = sub.parent
    F = C.field
    comps = {}
    for c in C.objects:
        blocks = {}
        for ib, b in enumerate(sub.objects):
            n = C.homdim(c, b)
            if n:
                blocks[ib, ib] = kron(t.comps[b], Matrix.identity(F, n))
        m = block_matrix(F, tgt.sizes[c], src.sizes[c], blocks)
        comps[c] = solve_or_raise(tgt.basis[c], m @ src.basis[c], "ran of a map")
    return NatTrans(src.rep, tgt.rep, comps, check=False)


# -- units and counits -------------------------------------------------------------

def lan_counit(x: Rep, sub: SubcatSpec, data: Optional[LanData] = None) -> NatTrans:
    """``lan(restrict x) => x``, adjunct to the identity of ``restrict x``."""
    data = data or lan_data(restrict(x, sub), sub)
    C = sub.parent
    F = C.field
    comps = {}
    for c in C.objects:
        pieces = []
        for a in sub.objects:
            for u in range(C.homdim(a, c)):
                pieces.append(x.action[a, c, u])
        total = hstack(F, x.dim[c], pieces) if pieces else Matrix.zeros(F, x.dim[c], 0)
        comps[c] = total @ data.section[c]
    return NatTrans(data.rep, x, comps, check=False)


def lan_unit(f: Rep, sub: SubcatSpec, data: Optional[LanData] = None) -> NatTrans:
    """``f => restrict(lan f)``, sending ``v`` to the class of ``id_a (x) v``."""
    data = data or lan_data(f, sub)
    C = sub.parent
    F = C.field
    target = restrict(data.rep, sub)
    comps = {}
    for ia, a in enumerate(sub.objects):
        emb = kron(C.identity(a), Matrix.identity(F, f.dim[a]))
        m = block_matrix(F, data.sizes[a], [f.dim[a]], {(ia, 0): emb})
        comps[a] = data.proj[a] @ m
    return NatTrans(f, target, comps, check=False)


def ran_unit(x: Rep, sub: SubcatSpec, data: Optional[RanData] = None) -> NatTrans:
    """``x => ran(restrict x)``, ``v |-> (u |-> x(u) v)``."""
    data = data or ran_data(restrict(x, sub), sub)
    C = sub.parent
    F = C.field
    comps = {}
    for c in C.objects:
        rows = []
        for b in sub.objects:
            n = C.homdim(c, b)
            for r in range(x.dim[b]):
                for u in range(n):
                    rows.append(x.action[c, b, u].row(r))
        m = Matrix(F, len(rows), x.dim[c], rows, check=False) if rows else Matrix.zeros(F, 0, x.dim[c])
        comps[c] = solve_or_raise(data.basis[c], m, "ran unit")
    return NatTrans(x, data.rep, comps, check=False)


def ran_counit(h: Rep, sub: SubcatSpec, data: Optional[RanData] = None) -> NatTrans:
    """``restrict(ran h) => h``, evaluation at identities."""
    data = data or ran_data(h, sub)
    C = sub.parent
    F = C.field
    source = restrict(data.rep, sub)
    comps = {}
    for ib, b in enumerate(sub.objects):
        ev = kron(Matrix.identity(F, h.dim[b]), C.identity(b).T)
        m = block_matrix(F, [h.dim[b]], data.sizes[b], {(0, ib): ev})
        comps[b] = m @ data.basis[b]
    return NatTrans(source, h, comps, check=False)


# -- adjunction bundle ---------------------------------------------------------------

class Adjunction:
    """Units and counits of ``lan -| restrict -| ran`` for one subcategory, computed on demand."""

    def __init__(self, sub: SubcatSpec):
        self.sub = sub

    def counit_lan(self, x: Rep) -> NatTrans:
        return lan_counit(x, self.sub)

    def unit_lan(self, f: Rep) -> NatTrans:
        return lan_unit(f, self.sub)

    def unit_ran(self, x: Rep) -> NatTrans:
        return ran_unit(x, self.sub)

    def counit_ran(self, h: Rep) -> NatTrans:
        return ran_counit(h, self.sub)

    def triangle_report(self, objects: Sequence[Rep], sub_objects: Sequence[Rep] = (), strict: bool = True) -> dict:
        """Check all four triangle identities and that ``mu``, ``nu`` are isomorphisms.

        ``objects`` are representations of the big category; ``sub_objects``
        of the subcategory (restrictions of ``objects`` are always added).
        """
        sub = self.sub
        results = []
        for k, x in enumerate(objects):
            rx = restrict(x, sub)
            # r(eps_X) o mu_{rX} = id
            eps = lan_counit(x, sub)
            mu = lan_unit(rx, sub)
            c1 = mu.then(restrict_map(eps, sub, mu.target, rx)).comps == identity(rx).comps
            # nu_{rX} o r(eta_X) = id
            eta = ran_unit(x, sub)
            nu = ran_counit(rx, sub)
            c2 = restrict_map(eta, sub, rx, nu.source).then(nu).comps == identity(rx).comps
            results.append({"object": f"test[{k}]", "side": "big",
                            "lan_triangle": c1, "ran_triangle": c2})
        pool = list(sub_objects) + [restrict(x, sub) for x in objects]
        for k, f in enumerate(pool):
            ld = lan_data(f, sub)
            mu = lan_unit(f, sub, ld)
            eps = lan_counit(ld.rep, sub)
            lm = lan_map(mu, sub, ld, None)
            c1 = lm.then(eps).comps == identity(ld.rep).comps
            rd = ran_data(f, sub)
            nu = ran_counit(f, sub, rd)
            eta = ran_unit(rd.rep, sub)
            rn = ran_map(nu, sub, None, rd)
            c2 = eta.then(rn).comps == identity(rd.rep).comps
            results.append({"object": f"sub[{k}]", "side": "sub",
                            "lan_triangle": c1, "ran_triangle": c2,
                            "unit_lan_iso": mu.is_iso(), "counit_ran_iso": nu.is_iso()})
        ok = all(all(v for kk, v in r.items() if isinstance(v, bool)) for r in results)
        if strict and not ok:
            bad = [r for r in results if not all(v for v in r.values() if isinstance(v, bool))]
            raise InternalConsistencyError(f"adjunction identities fail: {bad[:3]}")
        return {"holds": ok, "checks": results}


def adjunction_data(sub: SubcatSpec) -> Adjunction:
    return Adjunction(sub)
