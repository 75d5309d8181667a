"""Acceptance criteria, one test each.

Every test collects its failed checks, records a single PASS/FAIL line
(printed in the terminal summary) and then asserts.  Expected values come
from ``oracles``, which does not import the package.
"""
import itertools
import random
import time
from contextlib import contextmanager

import numpy as np

from checks import ACCEPTANCE_LINES, les_violations, quotient_mismatches, random_acomplex, random_form
from kozhom import field as ff
from kozhom.dgmodule import RingSpec, hom_complex, reduce_at_origin, residue_field_datum, verify_dg_axioms
from kozhom.families import (
    CODEPTH3_CLASSES,
    build_koszul,
    codepth2_family,
    codepth3_family,
    jorgensen_family,
    residue_field_resolution,
    xy_yz_resolution,
)
from kozhom.opcomplex import build_ce_closed_fiber, build_ce_full, hilbert_function
from kozhom.support import (
    ProjPoint,
    change_of_presentation,
    hyperplane_check,
    is_complete_intersection,
    point_in_support,
    pointwise_support,
    projective_points,
    verify_intersection_formula,
    verify_symmetry,
)
from oracles import CODEPTH3_CASES, codepth3_direct_sum, jorgensen_internal, residue_field_ext
from strategies import jorgensen_closed, random_closed_fiber, random_invertible

P = 5
JOR_POINTS = [(1, a) for a in range(P)] + [(0, 1)]


@contextmanager
def criterion(number, title, budget):
    failures = []
    t0 = time.perf_counter()
    yield failures
    elapsed = time.perf_counter() - t0
    if elapsed >= budget:
        failures.append(f"took {elapsed:.1f}s, budget {budget}s")
    word = "PASS" if not failures else "FAIL"
    line = f"{word} criterion {number}: {title} ({elapsed:.1f}s)"
    if failures:
        line += "\n    " + "\n    ".join(failures)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


def values(h):
    return [h[d] for d in range(h.dmax + 1)]


def proportional(u, v, p=P):
    return all((u[i] * v[j] - u[j] * v[i]) % p == 0 for i, j in itertools.combinations(range(len(u)), 2))


def test_criterion_1_jorgensen_family():
    k = residue_field_datum(2)
    expected = jorgensen_internal(20)
    with criterion(1, "jorgensen family: supports, Hilbert, annihilators, pairs", 10) as bad:
        mods = {pq: jorgensen_closed(*pq) for pq in JOR_POINTS}
        for (a, b), m in mods.items():
            rep = pointwise_support(build_ce_closed_fiber(m, k), dmax=20, deg_bound=3, grading="internal")
            if set(rep.points) != {ProjPoint((a, b), P)}:
                bad.append(f"({a}:{b}): support {rep.summary()}")
            if values(rep.hilbert) != expected:
                bad.append(f"({a}:{b}): Hilbert {values(rep.hilbert)}")
            gens = rep.annihilator.generators
            ok = len(gens) == 1 and gens[0].degree() == 1
            if ok:
                coeffs = [gens[0].terms.get(e, 0) for e in ((1, 0), (0, 1))]
                ok = proportional(coeffs, (b, -a))
            if not ok:
                bad.append(f"({a}:{b}): annihilator {rep.annihilator}")
        for x, y in itertools.permutations(JOR_POINTS, 2):
            c = build_ce_closed_fiber(mods[x], mods[y])
            if not pointwise_support(c, with_annihilator=False).is_empty:
                bad.append(f"pair {x},{y}: support not empty")
            h = hilbert_function(c, 20)
            nonzero = [d for d in range(6, 21) if h[d]]
            if nonzero:
                bad.append(f"pair {x},{y}: nonzero in degrees {nonzero}")


def test_criterion_2_residue_field_ext():
    var = ["x", "y", "z"]
    with criterion(2, "residue-field Ext for (m, n) in (2,1), (2,2), (3,2)", 10) as bad:
        for m, n in [(2, 1), (2, 2), (3, 2)]:
            spec = RingSpec.make(var[:m], [f"{v}^2" for v in var[:n]])
            coeffs = [[var[j] if j == i else "0" for j in range(m)] for i in range(n)]
            res = residue_field_resolution(spec, coeffs)
            got = values(hilbert_function(build_ce_closed_fiber(res, residue_field_datum(n)), 30))
            want = residue_field_ext(m, n, 30)
            if got != want:
                bad.append(f"(m, n) = ({m}, {n}): got {got}, expected {want}")


def test_criterion_3_codepth3_classes():
    k3 = residue_field_datum(3)
    with criterion(3, "codepth-3 classes: direct-sum Hilbert formulas and supports", 30) as bad:
        for name, case in CODEPTH3_CASES.items():
            kw = {key: case[key] for key in ("r", "hp", "hq") if key in case}
            m = codepth3_family(case["cls"], case["n"], case["m"], case["l"], **kw)
            c = build_ce_closed_fiber(m, k3)
            got = values(hilbert_function(c, 20, "internal"))
            want = codepth3_direct_sum(case["cls"], case["n"], case["m"], case["l"], dmax=20, **kw)
            if got != want:
                first = next(d for d in range(21) if got[d] != want[d])
                bad.append(f"{name}: Hilbert differs from degree {first}: got {got[first:first + 6]}..., "
                           f"formula {want[first:first + 6]}...")
            rep = pointwise_support(c, with_annihilator=False)
            hc = hyperplane_check(rep)
            if case["cls"] == "H" and case["hp"] == case["n"] - 1:
                chi_n = ProjPoint(tuple(int(i == case["n"] - 1) for i in range(case["n"])), P)
                if not (hc.kind == "contained-in-hyperplane" and hc.exact and hc.forms == (chi_n,)):
                    bad.append(f"{name}: support {rep.summary()}, expected the hyperplane chi{case['n']}")
            elif not rep.is_full:
                bad.append(f"{name}: support {rep.summary()}, expected all of P^2")


def test_criterion_4_complete_intersection_detection():
    with criterion(4, "complete-intersection detection", 10) as bad:
        for vars_, f in [(["x"], ["x"]), (["x", "y"], ["x^2", "y^2"]), (["x", "y", "z"], ["x^2", "y^3", "z^2"])]:
            v = is_complete_intersection(build_koszul(RingSpec.make(vars_, f)))
            if not (v.is_ci and v.support_empty and v.tail_vanishes):
                bad.append(f"{f}: {v}")
        v = is_complete_intersection(xy_yz_resolution())
        if v.is_ci or not v.report.is_full or v.report.total_points != 6:
            bad.append(f"(xy, yz): {v}")


def test_criterion_5_symmetry_and_intersection():
    with criterion(5, "symmetry and intersection formula", 60) as bad:
        mods = {pq: jorgensen_closed(*pq) for pq in JOR_POINTS}
        pairs = list(itertools.product(JOR_POINTS, repeat=2))
        rep = verify_symmetry([(mods[a], mods[b]) for a, b in pairs])
        for (a, b), chk in zip(pairs, rep.checks):
            want = {ProjPoint(a, P)} if a == b else set()
            if not chk.ok or set(chk.left) != want:
                bad.append(f"symmetry for {a}, {b}")
        k = residue_field_datum(2)
        for a, b in pairs:
            for quad in ((mods[a], mods[b], k, k), (mods[a], mods[b], mods[b], mods[a])):
                if not verify_intersection_formula(*quad).ok:
                    bad.append(f"intersection formula for {a}, {b}")
        rng = random.Random(5)
        for t in range(20):
            n = rng.randrange(1, 4)
            m1, m2, n1, n2 = (random_closed_fiber(rng, n, 4) for _ in range(4))
            if not verify_symmetry([(m1, n1), (m2, n2), (m1, n2)]).ok:
                bad.append(f"random quadruple {t}: symmetry")
            if not verify_intersection_formula(m1, m2, n1, n2).ok:
                bad.append(f"random quadruple {t}: intersection formula")


def _constructed_data():
    yield from (jorgensen_family(a, b) for a in range(P) for b in range(P) if (a, b) != (0, 0))
    for vars_, f in [(["x"], ["x"]), (["x", "y"], ["x^2", "y^2"]), (["x", "y", "z"], ["x^2", "y^3", "z^2"]),
                     (["x", "y"], ["x*y", "x^2 + y^3"])]:
        yield build_koszul(RingSpec.make(vars_, f))
    yield xy_yz_resolution()
    yield residue_field_resolution(RingSpec.make(["x", "y"], ["x^2", "y^2"]), [["x", "0"], ["0", "y"]])
    yield codepth2_family(2, 1)
    for cls in CODEPTH3_CLASSES:
        kw = {"G": dict(r=2), "H": dict(hp=2, hq=1)}.get(cls, {})
        yield codepth3_family(cls, 3, 3, 2 if cls == "G" else 1, **kw)


def test_criterion_6_structural_invariants():
    with criterion(6, "axioms, Koszul-object identity, quotient by the operators", 60) as bad:
        data = list(_constructed_data())
        for i, m in enumerate(data):
            if not verify_dg_axioms(m).ok:
                bad.append(f"datum {i}: DG axioms")
        full = [jorgensen_family(*pq) for pq in JOR_POINTS]
        for a, b in itertools.product(full[:3], repeat=2):
            if not verify_dg_axioms(hom_complex(a, b)).ok or not build_ce_full(a, b).reduce().squares_to_zero:
                bad.append("Hom of jorgensen data")
        k3 = residue_field_datum(3)
        for m in data[-len(CODEPTH3_CLASSES):]:
            if not build_ce_closed_fiber(m, k3).squares_to_zero:
                bad.append("codepth-3 operator complex: d^2 != 0")
        rng = random.Random(20261015)
        for t in range(50):
            c = random_acomplex(rng)
            if not c.squares_to_zero:
                bad.append(f"sample {t}: d^2 != 0")
            a = random_form(rng, c.n)
            if les_violations(c, a):
                bad.append(f"sample {t}: Koszul-object identity fails for {a}")
        curated = [build_ce_closed_fiber(jorgensen_closed(1, 1), residue_field_datum(2)),
                   build_ce_closed_fiber(jorgensen_closed(1, 0), jorgensen_closed(0, 1)),
                   build_ce_closed_fiber(codepth3_family("TE", 3, 3, 1), k3),
                   build_ce_closed_fiber(codepth2_family(2, 1), codepth2_family(2, 1))]
        for i, c in enumerate(curated):
            for msg in quotient_mismatches(c):
                bad.append(f"curated {i}: {msg}")


def _image_point(a, b):
    """The point a' with b^T a' proportional to a, found by search."""
    bt = np.array(b, dtype=np.int64).T
    hits = [pt for pt in projective_points(2, P) if proportional((bt @ np.array(pt.coords)) % P, a.coords)]
    assert len(hits) == 1
    return hits[0]


def test_criterion_7_change_of_presentation():
    k = residue_field_datum(2)
    with criterion(7, "change of presentation on the jorgensen family", 10) as bad:
        rng = random.Random(7)
        for t in range(20):
            pq = JOR_POINTS[t % len(JOR_POINTS)]
            b = random_invertible(rng, 2)
            c = build_ce_closed_fiber(jorgensen_closed(*pq), k)
            c2 = change_of_presentation(c, b)
            for pt in projective_points(2, P):
                if point_in_support(c, pt) != point_in_support(c2, _image_point(pt, b)):
                    bad.append(f"b = {b.tolist()}, point {pt}")
            if t < 6:
                m2 = change_of_presentation(jorgensen_family(*pq), b)
                c3 = build_ce_closed_fiber(reduce_at_origin(m2), k)
                got = {pt for pt in projective_points(2, P) if point_in_support(c3, pt)}
                if got != {_image_point(ProjPoint(pq, P), b)}:
                    bad.append(f"full data, b = {b.tolist()}: support {sorted(map(str, got))}")
                if not ff.is_invertible(b, P):
                    bad.append("random matrix not invertible")
