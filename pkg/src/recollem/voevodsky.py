"""Two localisations at once: ``S = S_A`` and ``Q = S_B``.

The quotient by ``Q`` is modelled as representations of ``B`` (the B-model);
``(x)_Q`` is ``restrict_B x`` and the section functor back into ``[C, V]`` is
``ran_B``.  When ``S_A`` has the Voevodsky property, the image of ``S_A`` in the
B-model is exactly the representations of ``B`` vanishing on ``A & B``, so the
quotient by it, and the quotient of ``[C, V]`` by the join, are both modelled by
representations of ``A & B``.  :func:`bigthm_build_and_verify` certifies that
identification at runtime before relying on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Union

from .complexes import (
    ChainMap,
    Complex,
    as_complex,
    cone,
    cone_data,
    derived_hom,
    extend_over_cone,
    homology,
    injective_resolution,
    is_acyclic,
    lift_map_injective,
    projective_resolution,
    solve_chain_map,
)
from .errors import (
    CategoryMismatchError,
    NonConvergenceError,
    PreconditionError,
    RecollemError,
    StateError,
)
from .exactla import inverse
from .kan import lan, ran, ran_counit, ran_map, ran_unit, restrict
from .lincat import LinCat, SubcatSpec, same_category
from .recollement_ab import AbRecollement, Localization, i_L, i_R, in_S_A, localize_S_A
from .recollement_der import (
    DerRecollement,
    default_test_complexes,
    derived_counit,
    ran_chain_map,
    ran_complex,
    restrict_chain_map,
    restrict_complex,
    rho_R_data,
    verify_der_recollement,
)
from .report import Report
from .repcat import NatTrans, Rep, identity, representable, simple
from .generators import random_reps


@dataclass
class VSetup:
    cat: LinCat
    subA: SubcatSpec
    subB: SubcatSpec
    max_fixpoint_steps: int = 32
    # set by v_property_check; None until a check has run
    v_property_holds: Optional[bool] = None

    def __post_init__(self):
        for s in (self.subA, self.subB):
            if not same_category(s.parent, self.cat):
                raise CategoryMismatchError("subcategories must live in the setup's category")
        if self.max_fixpoint_steps < 0:
            raise PreconditionError("max_fixpoint_steps must be non-negative")

    @classmethod
    def of(cls, cat: LinCat, a_objects: Sequence, b_objects: Sequence, max_fixpoint_steps: int = 32) -> "VSetup":
        return cls(cat, SubcatSpec(cat, tuple(map(str, a_objects))), SubcatSpec(cat, tuple(map(str, b_objects))),
                   max_fixpoint_steps)

    @property
    def recA(self) -> AbRecollement:
        return AbRecollement(self.cat, self.subA)

    @property
    def recB(self) -> AbRecollement:
        return AbRecollement(self.cat, self.subB)

    @property
    def model(self) -> LinCat:
        """The B-model of the quotient by ``Q``."""
        return self.subB.cat

    @property
    def overlap_objects(self) -> tuple:
        return tuple(o for o in self.subB.objects if o in self.subA.objects)

    @property
    def overlap(self) -> SubcatSpec:
        """``A & B`` inside the B-model."""
        return SubcatSpec(self.model, self.overlap_objects)

    @property
    def overlap_in_cat(self) -> SubcatSpec:
        return SubcatSpec(self.cat, self.overlap_objects)

    def params(self) -> dict:
        return {"category": self.cat.name, "s_objects": list(self.subA.objects),
                "q_objects": list(self.subB.objects)}


def q_localize(x: Rep, v: VSetup) -> Localization:
    """``x -> ran_B restrict_B x``."""
    return localize_S_A(x, v.recB)


def v_property_check(v: VSetup, suite: Sequence[Rep]) -> Report:
    """Does ``Q``-localisation keep every suite member inside ``S_A``?  Suite-relative."""
    for k, s in enumerate(suite):
        if not in_S_A(s, v.recA):
            raise PreconditionError(f"suite member {k} does not vanish on A")
    rep = Report("vcheck", v.params())
    witnesses, dims = [], []
    for k, s in enumerate(suite):
        loc = q_localize(s, v).local
        dims.append(loc.dims())
        for a in v.subA.objects:
            if loc.dim[a]:
                witnesses.append({"object": k, "at": a, "dim": loc.dim[a], "localization": loc.dims()})
    rep.clause("v_property", not witnesses, witnesses or None)
    rep.data = {"suite_size": len(suite), "localizations": dims}
    v.v_property_holds = rep.holds
    return rep


def _check_model(y: Rep, v: VSetup):
    if not same_category(y.cat, v.model):
        raise CategoryMismatchError("expected a representation of the B-model")


def s_q_membership(y: Rep, v: VSetup) -> bool:
    """Is ``y`` (over the B-model) the ``Q``-localisation of something in ``S_A``?

    Valid once the Voevodsky property is established: then ``ran_B y`` is that object.
    """
    if v.v_property_holds is not True:
        raise StateError("s_q_membership needs a passing v_property_check first")
    _check_model(y, v)
    r = ran(y, v.subB)
    return all(r.dim[a] == 0 for a in v.subA.objects)


def in_s_q(y: Rep, v: VSetup) -> bool:
    """Membership in the image of ``S_A`` without assuming the Voevodsky property.

    The largest quotient of ``lan_B y`` vanishing on ``A`` restricts onto ``y``;
    it restricts isomorphically exactly when ``y`` lies in the image.
    """
    _check_model(y, v)
    top = i_L(lan(y, v.subB), v.recA)
    back = restrict(top, v.subB)
    return back.dim == y.dim


@dataclass
class JoinResult:
    local: Rep
    steps: int
    map: NatTrans


def join_localize(x: Rep, v: VSetup) -> JoinResult:
    """Alternate ``S_A``- and ``Q``-localisation until both units are isomorphisms."""
    cur = x
    total = identity(x)
    steps = 0
    turn = 0
    subs = (v.subA, v.subB)
    while True:
        units = [ran_unit(cur, s) for s in subs]
        if all(u.is_iso() for u in units):
            return JoinResult(cur, steps, total)
        if steps >= v.max_fixpoint_steps:
            raise NonConvergenceError(f"no joint fixpoint after {steps} steps", steps=steps)
        if units[turn].is_iso():
            turn = 1 - turn
        total = total.then(units[turn])
        cur = units[turn].target
        steps += 1
        turn = 1 - turn


def model_complex(z: Union[Rep, Complex], v: VSetup) -> Complex:
    """Complexes over ``C`` are sent to the B-model by restriction."""
    z = as_complex(z)
    if same_category(z.cat, v.model):
        return z
    if same_category(z.cat, v.cat):
        return restrict_complex(z, v.subB)
    raise CategoryMismatchError("complex lives over neither the category nor its B-model")


def in_E_Q(z: Complex, v: VSetup, flagged: bool = False) -> bool:
    """All homology in the image of ``S_A``; ``flagged`` uses :func:`s_q_membership`."""
    test = s_q_membership if flagged else in_s_q
    lo, hi = z.support
    return all(test(homology(z, n), v) for n in range(lo, hi + 1))


def transport(z: Complex, v: VSetup):
    """``k z``: an injective resolution over ``B`` pushed into ``[C, V]`` by ``ran_B``."""
    res = injective_resolution(z)
    kz, data = ran_complex(res.res, v.subB)
    return res, kz, data


def strict_v_check(v: VSetup, complexes: Sequence[Union[Rep, Complex]]) -> Report:
    """Transported homology of complexes with homology in the image of ``S_A`` stays in ``S_A``."""
    if v.v_property_holds is None:
        raise StateError("run v_property_check before strict_v_check")
    rep = Report("strict_vcheck", v.params())
    zs = [model_complex(z, v) for z in complexes]
    for k, z in enumerate(zs):
        if not in_E_Q(z, v):
            raise PreconditionError(f"complex {k} has homology outside the image of S_A")
    witnesses, dims = [], []
    for k, z in enumerate(zs):
        _, kz, _ = transport(z, v)
        lo, hi = kz.support
        hd = {}
        for n in range(lo, hi + 1):
            h = homology(kz, n)
            hd[n] = h.dims()
            for a in v.subA.objects:
                if h.dim[a]:
                    witnesses.append({"complex": k, "degree": n, "at": a, "dim": h.dim[a]})
        dims.append(hd)
    rep.clause("v_property_established", bool(v.v_property_holds))
    rep.clause("transported_homology_in_S_A", not witnesses, witnesses or None)
    rep.data = {"complexes": len(zs), "transported_homology": dims}
    return rep


# -- the recollement over the quotient --------------------------------------------------------

def default_v_suite(v: VSetup, seed: int = 0, count: int = 4) -> List[Rep]:
    """Objects of ``S_A``: simples off ``A`` and the torsion parts of a few test objects."""
    cat = v.cat
    out = []
    for o in cat.objects:
        if o in v.subA.objects:
            continue
        try:
            out.append(simple(cat, o))
        except PreconditionError:
            pass
    probes = [representable(cat, o) for o in cat.objects] + random_reps(seed, cat, count)
    for x in probes:
        for t in (i_L(x, v.recA), i_R(x, v.recA)):
            if not t.is_zero():
                out.append(t)
    return out


def default_bigthm_complexes(v: VSetup, seed: int = 0, count: int = 3) -> List[Complex]:
    cat = v.cat
    reps = [representable(cat, o) for o in cat.objects]
    for o in cat.objects:
        try:
            reps.append(simple(cat, o))
        except PreconditionError:
            pass
    reps.extend(random_reps(seed, cat, count))
    model = [restrict(x, v.subB) for x in reps]
    model = [x for x in model if not x.is_zero()]
    return default_test_complexes(DerRecollement(AbRecollement(v.model, v.overlap)), model)


def _acyclic_at(c: Complex, objs) -> bool:
    lo, hi = c.support
    return all(homology(c, n).dim[a] == 0 for n in range(lo, hi + 1) for a in objs)


def _dict_eq(x: Dict[int, int], y: Dict[int, int]) -> bool:
    return all(x.get(n, 0) == y.get(n, 0) for n in set(x) | set(y))


def _counit_inverse(res_complex: Complex, kz: Complex, data, v: VSetup) -> ChainMap:
    """``I -> restrict_B ran_B I``, inverting the ``ran`` counit degreewise."""
    rk = restrict_complex(kz, v.subB)
    comps = {}
    for n, t in res_complex.terms.items():
        eps = ran_counit(t, v.subB, data[n])
        comps[n] = NatTrans(t, rk[n], {a: inverse(m) for a, m in eps.comps.items()}, check=False)
    return ChainMap(res_complex, rk, comps, check=False)


def _hypotheses(v: VSetup, rep: Report, tests: List[Complex], v_suite: Sequence[Rep]) -> bool:
    vrep = v_property_check(v, v_suite)
    e_suite = [Complex.concentrated(restrict(s, v.subB)) for s in v_suite]
    e_suite = [z for z in e_suite if not z.is_zero()] + [z for z in tests if in_E_Q(z, v)]
    srep = strict_v_check(v, e_suite)

    # finite projective dimension of (repr c)_Q makes it compact in the B-model
    lengths, compact_fail = {}, []
    for c in v.cat.objects:
        g = restrict(representable(v.cat, c), v.subB)
        try:
            pr = projective_resolution(g)
            lengths[c] = pr.res.support[1] if not pr.res.is_zero() else -1
        except RecollemError as e:
            compact_fail.append({"object": c, "error": type(e).__name__})

    # the join quotient is modelled by A & B: compare fixpoints on a probe family
    model_fail = []
    probes = [representable(v.cat, o) for o in v.cat.objects] + list(v_suite)
    for k, x in enumerate(probes):
        try:
            j = join_localize(x, v).local
        except NonConvergenceError as e:
            model_fail.append({"probe": k, "steps": e.steps})
            continue
        m = ran(restrict(x, v.overlap_in_cat), v.overlap_in_cat)
        if j.dim != m.dim:
            model_fail.append({"probe": k, "join": j.dims(), "model": m.dims()})

    checks = {
        "v_property": vrep.holds,
        "strict_v_property": srep.holds,
        "compact_generators": not compact_fail,
        "quotient_model": not model_fail,
    }
    witness = {}
    if not vrep.holds:
        witness["v_property"] = vrep.get("v_property").get("witness")
    if not srep.holds:
        witness["strict_v_property"] = srep.get("transported_homology_in_S_A").get("witness")
    if compact_fail:
        witness["compact_generators"] = compact_fail
    if model_fail:
        witness["quotient_model"] = model_fail
    ok = all(checks.values())
    rep.clause("h1", ok, witness or None, checks=checks, v_suite=len(v_suite), e_suite=len(e_suite),
               projective_dimensions=lengths, generators_of_model="representables of B")
    return ok


def bigthm_build_and_verify(v: VSetup, test_complexes: Optional[Sequence[Union[Rep, Complex]]] = None,
                            v_suite: Optional[Sequence[Rep]] = None, seed: int = 0) -> Report:
    """Check the recollement of the quotient by ``Q`` through computable surrogates.

    Sections: ``h1`` hypotheses; ``t1`` generator data; ``t2`` perpendicularity;
    ``t3`` comparison quasi-isomorphisms on ``A``; ``t4`` hom dimensions before and
    after localisation; ``t5`` ``iota_L`` computed two ways; ``t6`` recollement sanity.
    """
    tests = [model_complex(z, v) for z in test_complexes] if test_complexes is not None \
        else default_bigthm_complexes(v, seed)
    v_suite = list(v_suite) if v_suite is not None else default_v_suite(v, seed)
    rep = Report("bigthm", dict(v.params(), overlap=list(v.overlap_objects), test_complexes=len(tests)))
    if not _hypotheses(v, rep, tests, v_suite):
        rep.status = "hypotheses-not-met"
        return rep
    rep.status = "ok"

    B, AB = v.model, v.overlap
    A = v.subA.objects
    derB = DerRecollement(AbRecollement(B, AB))
    derC = DerRecollement(v.recA)
    gens = {a: restrict(representable(v.cat, a), v.subB) for a in A}
    gens_J = {a: restrict(g, AB) for a, g in gens.items()}
    transported = [transport(x, v) for x in tests]

    # t1: generators (repr a)_Q, their hom table, and hom from them computed in [C, V]
    table = {f"{a}->{b}": derived_hom(gens[a], gens[b]) for a in A for b in A}
    bad = []
    ghoms = []
    for k, (x, (_, kx, _)) in enumerate(zip(tests, transported)):
        row = {}
        for a in A:
            dh = derived_hom(gens[a], x)
            lo, hi = kx.support
            hk = {n: homology(kx, n).dim[a] for n in range(lo, hi + 1)}
            if not _dict_eq(dh, hk):
                bad.append({"complex": k, "object": a})
            row[a] = dh
        ghoms.append(row)
    rep.clause("t1", not bad, bad or None, generator_dims={a: g.dims() for a, g in gens.items()},
               generator_table=table)

    # t2: homology in the image of S_A iff perpendicular to the generators
    bad = []
    for k, x in enumerate(tests):
        member = in_E_Q(x, v, flagged=True)
        perp = all(not any(ghoms[k][a].values()) for a in A)
        if member != perp:
            bad.append({"complex": k, "in_E_Q": member, "perpendicular": perp})
    rep.clause("t2", not bad, bad or None)

    # t3: k X -> k Y -> k'Y are quasi-isomorphisms at every a in A
    bad = []
    for k, (x, (ix, kx, kxd)) in enumerate(zip(tests, transported)):
        y = restrict_complex(x, AB)
        lx, lxd = ran_complex(y, AB)
        unit = ChainMap(x, lx, {n: ran_unit(x[n], AB, lxd[n]) for n in x.terms if n in lxd}, check=False)
        right = rho_R_data(y, derB)
        beta = ChainMap(lx, right.complex,
                        {n: ran_map(right.resolution.aug[n], AB, lxd[n], right.data[n])
                         for n in lxd if n in right.data}, check=False)
        ilx = injective_resolution(lx)
        f = lift_map_injective(unit, ix, ilx)
        g = solve_chain_map(ilx.aug, beta)
        if g is None:
            bad.append({"complex": k, "map": "g", "reason": "no lift"})
            continue
        ky = ran_complex(ilx.res, v.subB)
        kf = ran_chain_map(f, v.subB, (kx, kxd), ky)
        kg = ran_chain_map(g, v.subB, ky, ran_complex(right.complex, v.subB))
        for name, m in (("f", kf), ("g", kg), ("gf", kf.then(kg))):
            if not _acyclic_at(cone(m), A):
                bad.append({"complex": k, "map": name})
    rep.clause("t3", not bad, bad or None)

    # t4: hom from localized generators is unchanged by passing to the join quotient
    bad = []
    for k, x in enumerate(tests):
        y = restrict_complex(x, AB)
        for a in A:
            after = derived_hom(gens_J[a], y)
            if not _dict_eq(ghoms[k][a], after):
                bad.append({"complex": k, "object": a, "before": ghoms[k][a], "after": after})
    rep.clause("t4", not bad, bad or None)

    # t5: iota_L^Q by the cone triangle vs (.)_Q o iota_L o k, compared through a chain map
    bad, iotas = [], []
    for k, (x, (ix, kx, kxd)) in enumerate(zip(tests, transported)):
        c = derived_counit(x, derB)
        z1 = cone(c)
        iotas.append(z1)
        cd2 = cone_data(derived_counit(kx, derC))
        rkx = restrict_complex(kx, v.subB)
        z2 = restrict_complex(cd2.cone, v.subB)
        j2 = restrict_chain_map(cd2.incl, v.subB, rkx, z2)
        u = ix.aug.then(_counit_inverse(ix.res, kx, kxd, v)).then(j2)
        w = extend_over_cone(c, u)
        if w is None:
            bad.append({"complex": k, "reason": "composite not null-homotopic"})
        elif not is_acyclic(cone(w)):
            bad.append({"complex": k, "reason": "comparison not a quasi-isomorphism"})
    rep.clause("t5", not bad, bad or None)

    # t6: lambda^Q kills E^Q, and the adjunctions of the quotient recollement
    bad = []
    for k, z in enumerate(list(tests) + iotas):
        if in_E_Q(z, v, flagged=True) and not is_acyclic(restrict_complex(z, AB)):
            bad.append({"complex": k, "check": "lambda_kills_E_Q"})
    for k, z in enumerate(iotas):
        if not in_E_Q(z, v, flagged=True):
            bad.append({"complex": k, "check": "iota_L_in_E_Q"})
    # with B empty there is nothing to test: the B-model is the zero category
    quot = verify_der_recollement(derB, tests) if tests else None
    failing = [c["name"] for c in quot.clauses if not c["holds"]] if quot else []
    if failing:
        bad.append({"check": "quotient_recollement", "clauses": failing})
    rep.clause("t6", not bad, bad or None)
    return rep

