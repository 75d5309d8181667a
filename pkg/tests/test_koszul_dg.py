import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kozhom.dgmodule import (
    ClosedFiberModuleData,
    DGEModuleData,
    FreeComplex,
    HomComplex,
    RingSpec,
    ShapeError,
    change_basis,
    direct_sum,
    hom_complex,
    reduce_at_origin,
    residue_field_datum,
    shift,
    verify_dg_axioms,
)
from kozhom.families import (
    CODEPTH3_CLASSES,
    build_koszul,
    codepth2_family,
    codepth3_family,
    common_factor_family,
    exterior_datum,
    jorgensen_family,
    jorgensen_spec,
    residue_field_resolution,
    xy_yz_resolution,
)
from kozhom.poly import PolyMatrix
from strategies import closed_fiber_data, random_invertible

ALL_JORGENSEN = [(a, b) for a in range(5) for b in range(5) if (a, b) != (0, 0)]


# --------------------------------------------------------------------------
# ring specs


def test_ring_spec_validation():
    with pytest.raises(ValueError, match="constant"):
        RingSpec.make(["x"], ["x + 1"])
    with pytest.raises(ValueError):
        RingSpec.make(["x", "y"], ["x + y^2"], minimal=True)
    s = RingSpec.make(["x", "y"], ["x^2", "x*y"], minimal=True)
    assert s.n == 2 and s.p == 5


# --------------------------------------------------------------------------
# Koszul complexes


def test_koszul_rank_one():
    s = RingSpec.make(["x"], ["x"])
    k = build_koszul(s)
    x = s.ring.gens()[0]
    assert k.ranks == (1, 1)
    assert k.diff(1).to_rows() == [[x]]
    assert k.lam(0, 0).to_rows() == [[s.ring.one()]]


def test_koszul_two_squares_sign():
    s = RingSpec.make(["x", "y"], ["x^2", "y^2"])
    k = build_koszul(s)
    x, y = s.ring.gens()
    assert k.ranks == (1, 2, 1)
    # d(e1 e2) = x^2 e2 - y^2 e1
    assert k.diff(2).to_rows() == [[-(y * y)], [x * x]]
    # H_0 is Q/(f): the degree-1 differential is the row of f
    assert k.diff(1).to_rows() == [list(s.f)]


@settings(max_examples=15, deadline=None)
@given(st.lists(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
                                st.integers(1, 4), min_size=1, max_size=3), min_size=3, max_size=3))
def test_koszul_axioms_random_three(terms):
    from kozhom.poly import PolyRing

    ring = PolyRing(["x", "y", "z"], 5)
    f = []
    for t in terms:
        g = sum((ring.monomial(e, c) for e, c in t.items() if sum(e) > 0), ring.zero())
        f.append(str(g if g else ring.gens()[0]))
    assert verify_dg_axioms(build_koszul(RingSpec.make(["x", "y", "z"], f))).ok


def test_koszul_reduction_is_exterior_multiplication():
    k = reduce_at_origin(build_koszul(RingSpec.make(["x", "y"], ["x^2", "y^2"])))
    assert not k.diffs
    assert np.array_equal(k.lam(0, 0), [[1], [0]])
    assert np.array_equal(k.lam(1, 0), [[0], [1]])
    # e1 ^ e2 = -(e2 ^ e1)
    assert np.array_equal(k.lam(0, 1), [[0, 1]])
    assert np.array_equal(k.lam(1, 1), [[4, 0]])


# --------------------------------------------------------------------------
# verification


def test_verifier_detects_tampering():
    m = jorgensen_family(1, 2)
    assert verify_dg_axioms(m).ok
    lam = list(m.lambdas)
    l0 = dict(lam[0])
    # negate the y/p entry of lam_1 on degree 0
    l0[0] = PolyMatrix.from_rows(m.ring, [[-l0[0][0, 0]], [l0[0][1, 0]]])
    lam[0] = l0
    bad = DGEModuleData(m.spec, m.complex, tuple(lam))
    rep = verify_dg_axioms(bad)
    assert not rep.ok
    chk = rep["homotopy identity"]
    assert not chk.passed and chk.degree == 0
    assert "homotopy identity failed at degree 0" in str(chk)


def test_verifier_rejects_up_to_homotopy_data():
    # two operators on k --x--> k over Q/(x^2): lam = 0 is not a homotopy for f
    s = RingSpec.make(["x"], ["x^2"])
    x = s.ring.gens()[0]
    cx = FreeComplex(s.ring, 0, (1, 1), {1: PolyMatrix.from_rows(s.ring, [[x]])})
    assert not verify_dg_axioms(DGEModuleData(s, cx, ({},))).ok


def test_shape_errors():
    s = RingSpec.make(["x"], ["x"])
    with pytest.raises(ShapeError):
        FreeComplex(s.ring, 0, (1, 2), {1: PolyMatrix.from_rows(s.ring, [[s.ring.one()]])})
    with pytest.raises(ShapeError):
        ClosedFiberModuleData(n=1, p=5, lo=0, ranks=(1, 1), lambdas=({0: np.ones((2, 1), dtype=np.int64)},))


# --------------------------------------------------------------------------
# jorgensen family


@pytest.mark.parametrize("pq", ALL_JORGENSEN)
def test_jorgensen_all_parameters_verify(pq):
    m = jorgensen_family(*pq)
    assert verify_dg_axioms(m).ok
    assert verify_dg_axioms(reduce_at_origin(m)).ok


def test_jorgensen_matrices():
    r10 = reduce_at_origin(jorgensen_family(1, 0))
    assert np.array_equal(r10.lam(0, 0), [[0], [0]]) and np.array_equal(r10.lam(0, 1), [[0, 0]])
    assert np.array_equal(r10.lam(1, 0), [[0], [1]]) and np.array_equal(r10.lam(1, 1), [[4, 0]])
    m11 = jorgensen_family(1, 1)
    y = m11.ring.gens()[1]
    assert m11.lam(0, 0).to_rows() == [[y], [m11.ring.constant(4)]]
    with pytest.raises(ValueError):
        jorgensen_family(0, 0)
    with pytest.raises(ValueError):
        jorgensen_family(5, 10)


# --------------------------------------------------------------------------
# other families


def test_residue_field_resolution():
    s = RingSpec.make(["x", "y"], ["x^2"])
    x, y = s.ring.gens()
    m = residue_field_resolution(s, [["x", "0"]])
    assert verify_dg_axioms(m).ok
    assert m.lam(0, 0).to_rows() == [[x], [s.ring.zero()]]
    # lam(e1) = 0, lam(e2) = x e1 e2
    assert m.lam(0, 1).to_rows() == [[s.ring.zero(), x]]
    r = reduce_at_origin(m)
    assert not any(r.lambdas)
    with pytest.raises(ValueError):
        residue_field_resolution(s, [["x", "1"]])


def test_codepth3_te_and_b_products():
    te = codepth3_family("TE", 3, 3, 1)
    lam2 = te.lam(1, 1)
    assert lam2[0, 2] == 1 and lam2[2, 0] == 4
    assert all(not te.lam(i, 2).any() for i in range(3))
    b = codepth3_family("B", 3, 3, 1)
    assert b.lam(0, 1)[2, 1] == 1 and b.lam(0, 2)[0, 0] == 1
    assert b.lam(1, 2)[0, 1] == 1 and b.lam(1, 1)[2, 0] == 4


@pytest.mark.parametrize("cls", CODEPTH3_CLASSES)
def test_codepth3_classes_verify(cls):
    kw = {"G": dict(r=2), "H": dict(hp=1, hq=1)}.get(cls, {})
    ml = {"G": (3, 2), "H": (3, 2)}.get(cls, (3, 1))
    assert verify_dg_axioms(codepth3_family(cls, 3, *ml, **kw)).ok


def test_ci_is_the_exterior_algebra():
    ci = codepth3_family("CI", 3, 3, 1)
    ext = exterior_datum(np.eye(3, dtype=np.int64))
    # b1, b2, b3 correspond to e2e3, -e1e3, e1e2
    g2 = np.array([[0, 0, 1], [0, 4, 0], [1, 0, 0]])
    assert change_basis(ci, {2: g2}) == ext
    assert verify_dg_axioms(ci).ok


def test_codepth2_and_xy_yz():
    c = codepth2_family(2, 1)
    assert np.array_equal(c.lam(0, 0), [[1], [0]]) and not c.lam(0, 1).any()
    r = reduce_at_origin(xy_yz_resolution())
    assert r == c
    cf = common_factor_family(jorgensen_spec(), "y", "x", "z")
    assert cf == xy_yz_resolution()


def test_products_of_codepth2_vanish():
    c = codepth2_family(3, 1)
    for i in range(3):
        for j in range(3):
            assert not (c.lam(i, 1) @ c.lam(j, 0)).any()


# --------------------------------------------------------------------------
# Hom complexes


def test_hom_of_rank_one_koszul():
    f = build_koszul(RingSpec.make(["x"], ["x"]))
    h = hom_complex(f, f)
    assert isinstance(h, HomComplex)
    assert (h.lo, h.ranks) == (-1, (1, 2, 1))
    assert verify_dg_axioms(h).ok


def test_hom_operators_on_jorgensen_pair():
    h = hom_complex(jorgensen_family(1, 0), jorgensen_family(0, 1))
    rep = verify_dg_axioms(h)
    assert rep.ok, str(rep)


@pytest.mark.parametrize("pq", [(1, 0), (0, 1), (2, 3)])
def test_reduce_commutes_with_hom(pq):
    a, b = jorgensen_family(*pq), jorgensen_family(1, 1)
    left = reduce_at_origin(hom_complex(a, b))
    right = hom_complex(reduce_at_origin(a), reduce_at_origin(b))
    assert left == right


def test_hom_into_k_is_the_dual():
    f = reduce_at_origin(build_koszul(RingSpec.make(["x", "y"], ["x^2", "y^2"])))
    h = hom_complex(f, residue_field_datum(2))
    assert (h.lo, h.ranks) == (-2, (1, 2, 1))
    assert not h.diffs
    # operator on Hom is +/- the transpose of the module operator
    for i in range(2):
        for d in (-2, -1):
            assert np.array_equal(h.lam(i, d) % 5, f.lam(i, -d - 1).T % 5) or np.array_equal(
                h.lam(i, d) % 5, (-f.lam(i, -d - 1).T) % 5)


@settings(max_examples=25, deadline=None)
@given(closed_fiber_data(), st.integers(0, 2**16))
def test_hom_of_random_closed_fiber_data(m, seed):
    rng = random.Random(seed)
    from strategies import random_closed_fiber

    other = random_closed_fiber(rng, m.n)
    assert verify_dg_axioms(hom_complex(m, other)).ok


@settings(max_examples=25, deadline=None)
@given(closed_fiber_data(), st.integers(-3, 3))
def test_shift_sum_conjugate_preserve_axioms(m, k):
    rng = random.Random(k)
    assert verify_dg_axioms(shift(m, k)).ok
    assert verify_dg_axioms(direct_sum(m, shift(m, k))).ok
    bases = {d: random_invertible(rng, m.rank(d)) for d in m.degrees() if m.rank(d)}
    assert verify_dg_axioms(change_basis(m, bases)).ok


def test_mixed_hom_rejected():
    with pytest.raises(TypeError):
        hom_complex(jorgensen_family(1, 0), residue_field_datum(2))
