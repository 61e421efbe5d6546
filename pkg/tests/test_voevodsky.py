import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import load_cat
from helpers import F2, all_matrices, seeds
from recollem.complexes import Complex, is_acyclic
from recollem.errors import NonConvergenceError, PreconditionError, SchemaError, StateError
from recollem.generators import random_rep, random_reps
from recollem.kan import ran_unit, restrict
from recollem.recollement_ab import AbRecollement, localize_S_A
from recollem.recollement_der import default_test_complexes, verify_der_recollement
from recollem.repcat import NatTrans, Rep, cokernel, kernel, naturality_violations, rep_violations, representable, simple, zero_rep
from recollem.voevodsky import (
    VSetup,
    bigthm_build_and_verify,
    default_v_suite,
    in_E_Q,
    in_s_q,
    join_localize,
    model_complex,
    q_localize,
    s_q_membership,
    strict_v_check,
    v_property_check,
)

SECTIONS = ["h1", "t1", "t2", "t3", "t4", "t5", "t6"]


def k_model(v):
    (b,) = v.subB.objects
    return representable(v.model, b)


# -- q_localize, vcheck, membership ------------------------------------------------------

def test_q_localize_examples(a2):
    v = VSetup.of(a2, ["1"], ["2"])
    loc = q_localize(simple(a2, "2"), v)
    assert loc.local.dims() == (1, 1)
    v = VSetup.of(a2, ["2"], ["1"])
    loc = q_localize(simple(a2, "1"), v)
    assert loc.local.dims() == (1, 0) and loc.map.is_iso()


def test_q_localize_of_local_object_is_iso(a3):
    v = VSetup.of(a3, ["1"], ["2", "3"])
    once = q_localize(representable(a3, "1"), v).local
    assert q_localize(once, v).map.is_iso()


def test_v_property_fails_on_a2(a2):
    v = VSetup.of(a2, ["1"], ["2"])
    r = v_property_check(v, [simple(a2, "2")])
    assert not r.holds
    (w,) = r.get("v_property")["witness"]
    assert w["at"] == "1" and w["localization"] == (1, 1)
    assert v.v_property_holds is False


def test_v_property_holds_on_a2(a2):
    v = VSetup.of(a2, ["2"], ["1"])
    r = v_property_check(v, [simple(a2, "1")])
    assert r.holds and r.data["localizations"] == [(1, 0)]


def test_v_property_on_zero_suite(a3rel):
    v = VSetup.of(a3rel, ["2"], ["1", "3"])
    assert v_property_check(v, [zero_rep(a3rel)]).holds


def test_v_property_rejects_non_torsion(a2):
    v = VSetup.of(a2, ["2"], ["1"])
    with pytest.raises(PreconditionError):
        v_property_check(v, [representable(a2, "1")])


def test_s_q_membership_needs_check(a2):
    v = VSetup.of(a2, ["2"], ["1"])
    with pytest.raises(StateError):
        s_q_membership(k_model(v), v)
    v_property_check(v, [simple(a2, "1")])
    assert s_q_membership(k_model(v), v)
    assert s_q_membership(zero_rep(v.model), v)


def test_s_q_membership_forced_flag(a2):
    v = VSetup.of(a2, ["1"], ["2"])
    v.v_property_holds = True
    assert not s_q_membership(k_model(v), v)


def test_join_examples(a2):
    v = VSetup.of(a2, ["2"], ["1"])
    assert join_localize(representable(a2, "1"), v).local.is_zero()
    assert join_localize(simple(a2, "1"), v).local.is_zero()


def test_join_on_local_object_takes_no_steps(a3):
    v = VSetup.of(a3, ["1"], ["1"])
    x = representable(a3, "1")
    local = q_localize(x, v).local
    out = join_localize(local, v)
    assert out.steps == 0 and out.map.is_iso()


def test_join_step_cap(a2):
    v = VSetup.of(a2, ["2"], ["1"], max_fixpoint_steps=0)
    with pytest.raises(NonConvergenceError):
        join_localize(representable(a2, "1"), v)


def test_max_steps_must_be_non_negative(a2):
    with pytest.raises(PreconditionError):
        VSetup.of(a2, ["2"], ["1"], max_fixpoint_steps=-1)


def test_strict_v_check_examples(a2):
    v = VSetup.of(a2, ["2"], ["1"])
    with pytest.raises(StateError):
        strict_v_check(v, [])
    v_property_check(v, [simple(a2, "1")])
    r = strict_v_check(v, [Complex.concentrated(k_model(v)), Complex.concentrated(zero_rep(v.model))])
    assert r.holds
    assert r.data["transported_homology"][0] == {0: (1, 0)}


def test_strict_v_check_negative_control(a2):
    v = VSetup.of(a2, ["1"], ["2"])
    v_property_check(v, [simple(a2, "2")])
    r = strict_v_check(v, [Complex.concentrated(k_model(v))])
    assert not r.holds
    assert r.get("transported_homology_in_S_A")["witness"][0]["at"] == "1"


# -- bigthm -----------------------------------------------------------------------------------

def test_bigthm_degenerate_a2(a2):
    v = VSetup.of(a2, ["2"], ["1"])
    r = bigthm_build_and_verify(v)
    assert [c["name"] for c in r.clauses] == SECTIONS
    assert r.status == "ok" and r.holds, r.clauses
    # (repr 2) restricted to B is zero, so there are no generators in the quotient
    assert r.get("t1")["detail"]["generator_dims"] == {"2": (0,)}


def test_bigthm_a3(a3):
    v = VSetup.of(a3, ["1", "3"], ["1", "2"])
    r = bigthm_build_and_verify(v)
    assert [c["name"] for c in r.clauses] == SECTIONS
    assert r.holds, r.clauses


def test_bigthm_empty_A(a3rel):
    r = bigthm_build_and_verify(VSetup.of(a3rel, [], ["2", "3"]))
    assert r.holds, r.clauses


def test_bigthm_reports_failed_hypotheses(a2):
    v = VSetup.of(a2, ["1"], ["2"])
    r = bigthm_build_and_verify(v)
    assert r.status == "hypotheses-not-met" and not r.holds
    assert [c["name"] for c in r.clauses] == ["h1"]
    assert "v_property" in r.get("h1")["witness"]


# -- brute-force membership oracle over GF(2) ------------------------------------------------

def enumerate_reps(cat, allowed, maxdim):
    """Every representation over GF(2) supported on ``allowed`` with dims <= maxdim."""
    objs = cat.objects
    keys = [(a, b, i) for a in objs for b in objs for i in range(cat.homdim(a, b))]
    for dims in itertools.product(*[range(maxdim + 1) if o in allowed else [0] for o in objs]):
        d = dict(zip(objs, dims))
        live = [k for k in keys if d[k[0]] and d[k[1]]]
        pools = [list(all_matrices(F2, d[b], d[a])) for a, b, _ in live]
        for choice in itertools.product(*pools):
            try:
                x = Rep(cat, d, dict(zip(live, choice)))
            except SchemaError:
                continue
            if not rep_violations(x):
                yield x


def isomorphic(x, y):
    if x.dim != y.dim:
        return False
    objs = x.cat.objects
    pools = [[m for m in all_matrices(F2, y.dim[a], x.dim[a]) if m.rank() == x.dim[a]] for a in objs]
    for choice in itertools.product(*pools):
        if not naturality_violations(NatTrans(x, y, dict(zip(objs, choice)), check=False)):
            return True
    return False


def s_q_oracle(y, v, images):
    return any(isomorphic(img, y) for img in images)


SETUPS = [("a2", ["2"], ["1"]), ("a2", ["1"], ["2"]), ("a3", ["2"], ["1", "3"]),
          ("a3rel", ["1", "3"], ["1", "2"]), ("a3", ["1", "3"], ["1", "2"])]


@pytest.mark.parametrize("name,a_objs,b_objs", SETUPS)
def test_s_q_membership_against_enumeration(name, a_objs, b_objs):
    cat = load_cat(name, F2)
    v = VSetup.of(cat, a_objs, b_objs)
    off_a = [o for o in cat.objects if o not in a_objs]
    images = [restrict(s, v.subB) for s in enumerate_reps(cat, off_a, 2)]
    ys = list(enumerate_reps(v.model, v.model.objects, 1))
    suite = [s for s in enumerate_reps(cat, off_a, 1)]
    v_ok = v_property_check(v, suite).holds
    for y in ys:
        expected = s_q_oracle(y, v, images)
        assert in_s_q(y, v) == expected, y
        if v_ok:
            assert s_q_membership(y, v) == expected, y


# -- properties ---------------------------------------------------------------------------------

NAMES = ["a2", "a3", "a3rel"]


def _setup(seed, name):
    cat = load_cat(name)
    rng = random.Random(seed)
    a = [o for o in cat.objects if rng.random() < 0.5]
    b = [o for o in cat.objects if rng.random() < 0.5]
    return cat, VSetup.of(cat, a, b), rng


@given(seeds, st.sampled_from(NAMES))
def test_localizations_are_idempotent(seed, name):
    cat, v, rng = _setup(seed, name)
    x = random_rep(rng, cat)
    assert q_localize(q_localize(x, v).local, v).map.is_iso()
    assert localize_S_A(localize_S_A(x, v.recA).local, v.recA).map.is_iso()


@given(seeds, st.sampled_from(NAMES))
def test_join_output_is_a_joint_fixpoint(seed, name):
    cat, v, rng = _setup(seed, name)
    x = random_rep(rng, cat)
    out = join_localize(x, v)
    assert out.steps <= 32
    assert ran_unit(out.local, v.subA).is_iso() and ran_unit(out.local, v.subB).is_iso()
    assert join_localize(kernel(out.map).sub, v).local.is_zero()
    assert join_localize(cokernel(out.map).quot, v).local.is_zero()
    assert join_localize(out.local, v).steps == 0


@given(seeds, st.sampled_from(NAMES))
def test_v_property_lands_in_s_q(seed, name):
    cat, v, rng = _setup(seed, name)
    suite = default_v_suite(v, seed % 1000, count=2)
    if not v_property_check(v, suite).holds:
        return
    for s in suite:
        y = restrict(q_localize(s, v).local, v.subB)
        assert s_q_membership(y, v)
        assert in_s_q(y, v)


@given(seeds, st.sampled_from(NAMES))
def test_membership_predicates_agree_under_v_property(seed, name):
    cat, v, rng = _setup(seed, name)
    if not v_property_check(v, default_v_suite(v, seed % 1000, count=2)).holds:
        return
    for y in random_reps(seed % 1000, v.model, 3) if v.model.objects else []:
        assert s_q_membership(y, v) == in_s_q(y, v)


@pytest.mark.parametrize("name", NAMES)
def test_full_overlap_reduces_to_derived_layer(name):
    cat = load_cat(name)
    v = VSetup.of(cat, cat.objects, cat.objects)
    reps = [representable(cat, o) for o in cat.objects] + random_reps(3, cat, 3)
    tests = default_test_complexes(AbRecollement.of(cat, cat.objects), reps)
    direct = verify_der_recollement(AbRecollement.of(cat, cat.objects), tests).to_json()
    model = verify_der_recollement(AbRecollement(v.model, v.overlap), [model_complex(t, v) for t in tests]).to_json()
    assert direct["clauses"] == model["clauses"]
    for t in tests:
        assert in_E_Q(model_complex(t, v), v) == is_acyclic(t)
