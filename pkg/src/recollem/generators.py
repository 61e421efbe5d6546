"""Seeded random instances for property tests and default test suites.

Sizes follow fixed caps: at most 4 objects, hom dimensions at most 2 and
representation dimensions at most 3 per object.
"""

from __future__ import annotations

import random
from typing import List, Optional

from .exactla import QQ, Field, Matrix
from .lincat import LinCat, from_quiver
from .repcat import NatTrans, Rep, cokernel, direct_sum, dual, hom_space, kernel, representable, yoneda_transformation

MAX_OBJECTS = 4
MAX_HOM = 2
MAX_DIM = 3


def _entry(rng: random.Random, field: Field):
    return field(rng.randint(-2, 2))


def random_category(rng: random.Random, field: Field = QQ, max_objects: int = MAX_OBJECTS) -> LinCat:
    """A random quiver with relations whose hom spaces have dimension at most 2."""
    while True:
        n = rng.randint(1, max_objects)
        verts = [str(i + 1) for i in range(n)]
        arrows = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.45:
                    arrows.append((f"a{i + 1}{j + 1}", verts[i], verts[j]))
        relations = []
        if n >= 2 and rng.random() < 0.3:
            v = rng.choice(verts)
            arrows.append((f"x{v}", v, v))
            relations.append({f"x{v}.x{v}": 1})
        # kill some composable pairs of distinct arrows
        for p in arrows:
            for q in arrows:
                if p[2] == q[1] and p[0] != q[0] and rng.random() < 0.5:
                    relations.append({f"{p[0]}.{q[0]}": 1})
        cat = from_quiver(verts, arrows, relations, field=field, name=f"rand{rng.randrange(10**6)}")
        if max(cat.homdim(a, b) for a in verts for b in verts) <= MAX_HOM:
            return cat


def random_vector(rng: random.Random, field: Field, n: int) -> Matrix:
    return Matrix.column_vector(field, [_entry(rng, field) for _ in range(n)])


def _random_presented(rng: random.Random, cat: LinCat) -> Rep:
    objs = cat.objects
    tops = [rng.choice(objs) for _ in range(rng.randint(1, 2))]
    top = direct_sum([representable(cat, o) for o in tops])
    rels = []
    for _ in range(rng.randint(0, 2)):
        b = rng.choice(objs)
        if top.dim[b]:
            rels.append((b, random_vector(rng, cat.field, top.dim[b])))
    if not rels:
        return top
    src = direct_sum([representable(cat, b) for b, _ in rels])
    comps = {o: Matrix.zeros(cat.field, top.dim[o], 0) for o in objs}
    maps = [yoneda_transformation(representable(cat, b), v, b, top) for b, v in rels]
    for o in objs:
        cols = []
        for m in maps:
            cols.extend(m.comps[o].columns())
        comps[o] = Matrix.from_columns(cat.field, cols, top.dim[o]) if cols else comps[o]
    return cokernel(NatTrans(src, top, comps, check=False)).quot


def random_rep(rng: random.Random, cat: LinCat, max_dim: int = MAX_DIM) -> Rep:
    """A random finitely presented representation, or the dual of one over the opposite."""
    for _ in range(200):
        if rng.random() < 0.5:
            x = _random_presented(rng, cat)
        else:
            x = dual(_random_presented(rng, cat.opposite()))
        if max(x.dim.values()) <= max_dim:
            return x
    return representable(cat, cat.objects[0])


def random_nat(rng: random.Random, x: Rep, y: Rep) -> NatTrans:
    basis = hom_space(x, y)
    out = NatTrans(x, y, {}, check=False)
    for t in basis:
        c = _entry(rng, x.field)
        if c:
            out = out + t.scale(c)
    return out


def random_complex(rng: random.Random, cat: LinCat, max_terms: int = 3):
    """A bounded complex with up to ``max_terms`` terms starting in degree -1, 0 or 1.

    Each differential is a random map into the kernel of the next one, so
    d o d = 0 holds by construction.
    """
    from .complexes import Complex

    n = rng.randint(1, max_terms)
    low = rng.randint(-1, 1)
    terms = {low: random_rep(rng, cat)}
    diff = {}
    for deg in range(low + 1, low + n):
        x = random_rep(rng, cat)
        below = terms[deg - 1]
        if deg - 1 in diff:
            k = kernel(diff[deg - 1])
            d = random_nat(rng, x, k.sub).then(k.incl)
        else:
            d = random_nat(rng, x, below)
        terms[deg] = x
        diff[deg] = d
    return Complex(cat, terms, diff)


def random_reps(seed: int, cat: LinCat, count: int = 20) -> List[Rep]:
    rng = random.Random(seed)
    return [random_rep(rng, cat) for _ in range(count)]


def seeded(seed: Optional[int]) -> random.Random:
    return random.Random(0 if seed is None else seed)
