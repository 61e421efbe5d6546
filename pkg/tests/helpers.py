"""Strategies and brute-force oracles shared by the test modules."""

import itertools
import random

from hypothesis import strategies as st

from recollem.exactla import GF, QQ, Matrix
from recollem.generators import random_category, random_rep
from recollem.repcat import NatTrans, naturality_violations

seeds = st.integers(0, 2**32 - 1)


def cat_and_reps(seed, field=QQ, count=1):
    rng = random.Random(seed)
    cat = random_category(rng, field)
    return cat, [random_rep(rng, cat) for _ in range(count)]


def subsets(objects, rng):
    return [o for o in objects if rng.random() < 0.5]


def all_matrices(field, rows, cols):
    """Every rows x cols matrix over a small prime field."""
    p = field.characteristic
    for entries in itertools.product(range(p), repeat=rows * cols):
        yield Matrix(field, rows, cols, [list(entries[r * cols:(r + 1) * cols]) for r in range(rows)])


def brute_force_hom_count(x, y):
    """Number of natural transformations x => y over GF(p), by exhaustion."""
    field = x.field
    objs = x.cat.objects
    pools = [list(all_matrices(field, y.dim[a], x.dim[a])) for a in objs]
    n = 0
    for choice in itertools.product(*pools):
        t = NatTrans(x, y, dict(zip(objs, choice)), check=False)
        if not naturality_violations(t):
            n += 1
    return n


def search_space(x, y):
    return sum(x.dim[a] * y.dim[a] for a in x.cat.objects)


def log_p(n, p):
    k = 0
    while n > 1:
        assert n % p == 0
        n //= p
        k += 1
    return k


F2 = GF(2)

# PASS/FAIL lines from the acceptance suite, echoed in the terminal summary
ACCEPTANCE = []
