import random

import pytest
from hypothesis import given

from helpers import cat_and_reps, seeds, subsets
from recollem.errors import CategoryMismatchError
from recollem.generators import random_nat, random_rep
from recollem.kan import (
    adjunction_data,
    lan,
    lan_counit,
    lan_unit,
    ran,
    ran_counit,
    ran_unit,
    restrict,
    restrict_map,
)
from recollem.lincat import SubcatSpec
from recollem.repcat import dual, hom_space, kernel, representable, simple


def k_over(sub):
    """The one-dimensional representation of a one-object subcategory with End = k."""
    (o,) = sub.objects
    return representable(sub.cat, o)


def test_restrict_to_everything_is_identity(a3):
    x = representable(a3, "1")
    r = restrict(x, SubcatSpec(a3, a3.objects))
    assert r.dim == x.dim and r.action == x.action


def test_restrict_a2(a2):
    sub = SubcatSpec(a2, ("2",))
    assert restrict(representable(a2, "1"), sub).dims() == (1,)
    assert restrict(representable(a2, "2"), sub).dims() == (1,)


def test_restrict_wrong_category(a2, a3):
    with pytest.raises(CategoryMismatchError):
        restrict(representable(a3, "1"), SubcatSpec(a2, ("2",)))


def test_lan_a2(a2):
    sub = SubcatSpec(a2, ("2",))
    assert lan(k_over(sub), sub).dims() == (0, 1)


def test_lan_a3_at_sink(a3):
    sub = SubcatSpec(a3, ("3",))
    out = lan(k_over(sub), sub)
    assert out.dims() == (a3.homdim("3", "1"), a3.homdim("3", "2"), a3.homdim("3", "3")) == (0, 0, 1)


def test_ran_a2(a2):
    sub = SubcatSpec(a2, ("2",))
    out = ran(k_over(sub), sub)
    assert out.dims() == (1, 1)
    assert out.action["1", "2", 0].rank() == 1
    assert ran(k_over(SubcatSpec(a2, ("1",))), SubcatSpec(a2, ("1",))).dims() == (1, 0)


def test_extensions_along_everything(a3):
    whole = SubcatSpec(a3, a3.objects)
    for x in (representable(a3, "1"), simple(a3, "2"), dual(representable(a3.opposite(), "3"))):
        f = restrict(x, whole)
        assert lan_counit(x, whole).is_iso()
        assert ran_unit(x, whole).is_iso()
        assert lan(f, whole).dims() == x.dims()
        assert ran(f, whole).dims() == x.dims()


def test_counit_on_repr1_is_canonical_map(a2):
    sub = SubcatSpec(a2, ("2",))
    eps = lan_counit(representable(a2, "1"), sub)
    assert eps.source.dims() == (0, 1)
    assert not eps.is_zero()
    (canonical,) = hom_space(representable(a2, "2"), representable(a2, "1"))
    assert eps.comps["2"].rank() == canonical.comps["2"].rank() == 1


def test_unit_on_repr1_is_iso(a2):
    sub = SubcatSpec(a2, ("2",))
    assert ran_unit(representable(a2, "1"), sub).is_iso()


def test_lan_of_representable_is_representable(a3rel):
    for objs in (("1",), ("1", "3"), ("2", "3")):
        sub = SubcatSpec(a3rel, objs)
        for a in objs:
            assert lan(representable(sub.cat, a), sub).dims() == representable(a3rel, a).dims()


def test_ran_of_injective_is_injective(a3rel):
    op = a3rel.opposite()
    for objs in (("1",), ("1", "3"), ("2", "3")):
        sub = SubcatSpec(a3rel, objs)
        for a in objs:
            inj_sub = dual(representable(sub.cat.opposite(), a))
            inj = dual(representable(op, a))
            assert ran(inj_sub, sub).dims() == inj.dims()


# -- properties -----------------------------------------------------------------

def _setup(seed, count=2):
    cat, reps = cat_and_reps(seed, count=count)
    rng = random.Random(seed)
    sub = SubcatSpec(cat, subsets(cat.objects, rng))
    return cat, sub, reps, rng


@given(seeds)
def test_adjunction_dimension_laws(seed):
    cat, sub, (g, h), rng = _setup(seed)
    f = random_rep(rng, sub.cat) if sub.objects else restrict(g, sub)
    hsub = random_rep(rng, sub.cat) if sub.objects else restrict(h, sub)
    assert len(hom_space(lan(f, sub), g)) == len(hom_space(f, restrict(g, sub)))
    assert len(hom_space(restrict(g, sub), hsub)) == len(hom_space(g, ran(hsub, sub)))


@given(seeds)
def test_units_and_counits_on_subcategory_are_iso(seed):
    cat, sub, (x, _), rng = _setup(seed)
    f = restrict(x, sub)
    assert lan_unit(f, sub).is_iso()
    assert ran_counit(f, sub).is_iso()
    assert lan(f, sub).validate() and ran(f, sub).validate()


@given(seeds)
def test_triangle_identities(seed):
    cat, sub, reps, rng = _setup(seed, count=3)
    report = adjunction_data(sub).triangle_report(reps)
    assert report["holds"]


@given(seeds)
def test_restrict_is_exact(seed):
    cat, sub, (x, y), rng = _setup(seed)
    f = random_nat(rng, x, y)
    k1 = restrict(kernel(f).sub, sub)
    k2 = kernel(restrict_map(f, sub)).sub
    assert k1.dim == k2.dim and k1.action == k2.action


@given(seeds)
def test_unit_and_counit_are_natural(seed):
    cat, sub, (x, y), rng = _setup(seed)
    for t in (lan_counit(x, sub), ran_unit(x, sub), lan_unit(restrict(y, sub), sub), ran_counit(restrict(y, sub), sub)):
        t.validate()
