"""Random verified closed-fiber data and hypothesis strategies."""
from __future__ import annotations

import random

import numpy as np
from hypothesis import strategies as st

from kozhom import field as ff
from kozhom.dgmodule import (
    ClosedFiberModuleData,
    change_basis,
    direct_sum,
    residue_field_datum,
    shift,
    verify_dg_axioms,
)
from kozhom.families import codepth2_family, exterior_datum, jorgensen_family
from kozhom.dgmodule import reduce_at_origin

P = 5


def random_invertible(rng: random.Random, k: int, p: int = P) -> np.ndarray:
    while True:
        a = np.array([[rng.randrange(p) for _ in range(k)] for _ in range(k)], dtype=np.int64)
        if ff.is_invertible(a, p):
            return a


def contractible(n: int, p: int = P) -> ClosedFiberModuleData:
    """k --1--> k in degrees 1, 0: acyclic, so its support is empty."""
    return ClosedFiberModuleData(n=n, p=p, lo=0, ranks=(1, 1), diffs={1: np.array([[1]])})


def _building_block(rng: random.Random, n: int, p: int = P):
    kind = rng.choice(["k", "exterior", "exterior", "codepth2", "contractible"])
    if kind == "k":
        return residue_field_datum(n, p)
    if kind == "contractible":
        return contractible(n, p)
    if kind == "codepth2":
        return codepth2_family(n, rng.randrange(0, 2) if n < 3 else 0, p)
    r = rng.randrange(1, 3)
    coeffs = [[rng.randrange(p) for _ in range(r)] for _ in range(n)]
    return exterior_datum(coeffs, p)


def random_closed_fiber(rng: random.Random, n: int, max_rank: int = 4, p: int = P) -> ClosedFiberModuleData:
    """Sums, shifts and conjugations of small verified blocks, total rank <= max_rank."""
    m = _building_block(rng, n, p)
    while True:
        extra = _building_block(rng, n, p)
        if m.total_rank + extra.total_rank > max_rank or rng.random() < 0.4:
            break
        m = direct_sum(m, shift(extra, rng.randrange(-1, 2)))
    if rng.random() < 0.3:
        m = shift(m, rng.randrange(-2, 3))
    bases = {d: random_invertible(rng, m.rank(d), p) for d in m.degrees() if m.rank(d)}
    m = change_basis(m, bases)
    assert verify_dg_axioms(m).ok
    return m


def jorgensen_closed(a, b, p: int = P):
    return reduce_at_origin(jorgensen_family(a, b, p))


@st.composite
def closed_fiber_data(draw, n=None, max_rank: int = 4):
    seed = draw(st.integers(0, 2**32 - 1))
    nn = n if n is not None else draw(st.integers(1, 3))
    return random_closed_fiber(random.Random(seed), nn, max_rank)


def random_matrix(rng: random.Random, r: int, c: int, p: int = P) -> np.ndarray:
    return np.array([[rng.randrange(p) for _ in range(c)] for _ in range(r)], dtype=np.int64).reshape(r, c)
