"""Checks shared by the operator-complex tests and the acceptance suite."""
from __future__ import annotations

import numpy as np

from kozhom import field as ff
from kozhom.opcomplex import build_ce_closed_fiber, chi_ring, koszul_object, monomial_action, strand
from kozhom.poly import monomials
from strategies import random_closed_fiber


def random_acomplex(rng, n=None):
    n = n or rng.randrange(1, 4)
    return build_ce_closed_fiber(random_closed_fiber(rng, n), random_closed_fiber(rng, n))


def random_form(rng, n, p=5):
    ring = chi_ring(n, p)
    e = rng.choice([1, 1, 2])
    while True:
        f = sum((ring.monomial(h, rng.randrange(p)) for h in monomials(n, e)), ring.zero())
        if f:
            return f


def _mult(c, form, d):
    e = form.degree()
    src, tgt = strand(c, d - 2 * e), strand(c, d)
    if src.homology_dim == 0 or tgt.homology_dim == 0:
        return np.zeros((tgt.homology_dim, src.homology_dim), dtype=np.int64)
    return sum(coef * monomial_action(c, h, d - 2 * e) for h, coef in form.terms.items()) % 5


def les_violations(c, a, top=8):
    """Degrees where dim H(c//a) differs from coker(a) + ker(a) on H(c)."""
    e = a.degree()
    cone = koszul_object(c, a)
    bad = []
    for d in range(min(0, cone.bottom), top):
        coker = strand(c, d).homology_dim - ff.rank(_mult(c, a, d), 5)
        ker = strand(c, d - 2 * e + 1).homology_dim - ff.rank(_mult(c, a, d + 1), 5)
        if strand(cone, d).homology_dim != coker + ker:
            bad.append(d)
    return bad


def reduced_hom_dims(c):
    """dim H of the blocks under the constant part of the differential."""
    dc = c.diff_const
    out = {}
    for b in c.blocks:
        out_rank = ff.rank(dc[b], 5) if b in dc else 0
        in_rank = ff.rank(dc[b - 1], 5) if (b - 1) in dc else 0
        out[b] = c.dim(b) - out_rank - in_rank
    return out


def kill_all_operators(c):
    for i in range(c.n):
        c = koszul_object(c, f"chi{i + 1}")
    return c


def quotient_mismatches(c):
    """Compare H(c // chi_1 ... // chi_n) with the reduced Hom, degree by degree
    and by Euler characteristic; returns a list of complaints."""
    k = kill_all_operators(c)
    expected = reduced_hom_dims(c)
    got = {d: strand(k, d).homology_dim for d in range(min(k.bottom, 0), k.top + 4)}
    bad = [f"extra homology in degree {d}" for d, v in got.items() if v and d not in expected]
    bad += [f"degree {d}: {got.get(d, 0)} != {v}" for d, v in expected.items() if got.get(d, 0) != v]
    euler = sum((-1) ** d * v for d, v in got.items())
    if euler != sum((-1) ** b * c.dim(b) for b in c.blocks):
        bad.append("Euler characteristic")
    return bad


# one "PASS/FAIL criterion ..." line per acceptance criterion, printed by conftest
ACCEPTANCE_LINES: list = []
