"""Constructors for concrete DG module data.

Every constructor verifies its output before returning it, so a datum that
leaves this module satisfies the strict identities exactly.
"""
from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from . import field as ff
from .dgmodule import (
    ClosedFiberModuleData,
    DGEModuleData,
    FreeComplex,
    RingSpec,
    verify_dg_axioms,
)
from .poly import PolyMatrix, PolyRing


def _verified(m):
    report = verify_dg_axioms(m)
    if not report.ok:
        raise AssertionError(f"constructed datum fails the DG identities:\n{report}")
    return m


def _subsets(n):
    """Subsets of range(n) by size, each size in lexicographic order."""
    by_size = [list(combinations(range(n), k)) for k in range(n + 1)]
    index = [{t: j for j, t in enumerate(level)} for level in by_size]
    return by_size, index


def _wedge_sign(i, t):
    return -1 if sum(1 for s in t if s < i) % 2 else 1


def _exterior_left(ring, n, coeffs):
    """Matrices of ``e_T -> w ^ e_T`` for ``w = sum_j coeffs[j] e_j``."""
    by_size, index = _subsets(n)
    out = {}
    for k in range(n):
        ent = {}
        for col, t in enumerate(by_size[k]):
            for j, c in enumerate(coeffs):
                if not c or j in t:
                    continue
                u = tuple(sorted(t + (j,)))
                key = (index[k + 1][u], col)
                val = c * _wedge_sign(j, t)
                ent[key] = ent[key] + val if key in ent else val
        out[k] = PolyMatrix(ring, len(by_size[k + 1]), len(by_size[k]), ent)
    return out


def _koszul_complex(ring, elements):
    n = len(elements)
    by_size, index = _subsets(n)
    diffs = {}
    for k in range(1, n + 1):
        ent = {}
        for col, t in enumerate(by_size[k]):
            for pos, i in enumerate(t):
                rest = t[:pos] + t[pos + 1:]
                ent[(index[k - 1][rest], col)] = elements[i] * (-1 if pos % 2 else 1)
        diffs[k] = PolyMatrix(ring, len(by_size[k - 1]), len(by_size[k]), ent)
    return FreeComplex(ring, 0, tuple(comb(n, k) for k in range(n + 1)), diffs)


def build_koszul(spec: RingSpec) -> DGEModuleData:
    """The Koszul complex on ``spec.f`` as a DG module over itself.

    >>> s = RingSpec.make(["x", "y"], ["x^2", "y^2"])
    >>> build_koszul(s).diff(2)
    PolyMatrix(2x1: [[4*y^2], [x^2]])
    """
    ring = spec.ring
    n = spec.n
    cx = _koszul_complex(ring, spec.f)
    lams = []
    for i in range(n):
        unit = [ring.one() if j == i else ring.zero() for j in range(n)]
        lams.append(_exterior_left(ring, n, unit))
    return _verified(DGEModuleData(spec, cx, tuple(lams)))


def residue_field_resolution(spec: RingSpec, coeffs) -> DGEModuleData:
    """Koszul resolution of ``k`` on the variables, with ``lam_i`` the
    exterior multiplication by ``sum_j coeffs[i][j] e_j``.

    Requires ``f_i = sum_j coeffs[i][j] * x_j`` exactly.
    """
    ring = spec.ring
    m = ring.nvars
    if not isinstance(coeffs, PolyMatrix):
        coeffs = PolyMatrix.from_rows(ring, [[ring.coerce(c) for c in row] for row in coeffs], cols=m)
    if coeffs.shape != (spec.n, m):
        raise ValueError(f"coefficient matrix must be {spec.n}x{m}, got {coeffs.shape}")
    xs = ring.gens()
    for i, fi in enumerate(spec.f):
        combo = ring.zero()
        for j in range(m):
            combo = combo + coeffs[i, j] * xs[j]
        if combo != fi:
            raise ValueError(f"f[{i}] = {fi} differs from sum of coeffs * variables = {combo}")
    cx = _koszul_complex(ring, xs)
    lams = tuple(_exterior_left(ring, m, [coeffs[i, j] for j in range(m)]) for i in range(spec.n))
    return _verified(DGEModuleData(spec, cx, lams))


def jorgensen_spec(prime: int = ff.DEFAULT_P) -> RingSpec:
    return RingSpec.make(["x", "y", "z"], ["x*y", "y*z"], prime)


def jorgensen_family(p, q, prime: int = ff.DEFAULT_P) -> DGEModuleData:
    """Resolution of ``R/(p x + q z)`` over ``R = k[x,y,z]/(xy, yz)`` lifted
    to ``Q = k[x,y,z]`` with its two homotopies for ``xy`` and ``yz``.

    For ``p = 0`` the mirrored presentation is used: ``x`` and ``z`` are
    exchanged, which also exchanges the roles of the two operators.
    """
    p, q = int(p) % prime, int(q) % prime
    if p == 0 and q == 0:
        raise ValueError("jorgensen_family needs (p, q) != (0, 0)")
    spec = jorgensen_spec(prime)
    ring = spec.ring
    x, y, z = ring.gens()
    if p != 0:
        s = ff.inv(p, prime)
        lin = x * p + z * q
        d1 = [[lin, y * z]]
        d2 = [[-(y * z)], [lin]]
        l1 = ([[y * s], [-q * s]], [[q * s, y * s]])
        l2 = ([[0], [1]], [[-1, 0]])
    else:
        # (q, 0) presentation with x <-> z, operators swapped
        s = ff.inv(q, prime)
        lin = z * q
        d1 = [[lin, y * x]]
        d2 = [[-(y * x)], [lin]]
        l2 = ([[y * s], [0]], [[0, y * s]])
        l1 = ([[0], [1]], [[-1, 0]])

    def pm(rows):
        return PolyMatrix.from_rows(ring, [[ring.coerce(v) for v in r] for r in rows])

    cx = FreeComplex(ring, 0, (1, 2, 1), {1: pm(d1), 2: pm(d2)})
    lams = tuple({0: pm(a), 1: pm(b)} for a, b in (l1, l2))
    return _verified(DGEModuleData(spec, cx, lams))


def common_factor_family(spec: RingSpec, g, u, v) -> DGEModuleData:
    """Resolution ``0 -> Q -> Q^2 -> Q`` of ``Q/(g u, g v)`` for coprime ``u, v``
    with the homotopies ``lam_1(a_2) = -g c`` and ``lam_2(a_1) = g c``.

    ``spec.f`` must be ``(g u, g v)``.
    """
    ring = spec.ring
    g, u, v = (ring.coerce(t) for t in (g, u, v))
    if spec.f != (g * u, g * v):
        raise ValueError("spec.f must equal (g*u, g*v)")
    pm = lambda rows: PolyMatrix.from_rows(ring, rows)  # noqa: E731
    zero, one = ring.zero(), ring.one()
    cx = FreeComplex(ring, 0, (1, 2, 1), {1: pm([[g * u, g * v]]), 2: pm([[v], [-u]])})
    l1 = {0: pm([[one], [zero]]), 1: pm([[zero, -g]])}
    l2 = {0: pm([[zero], [one]]), 1: pm([[g, zero]])}
    return _verified(DGEModuleData(spec, cx, (l1, l2)))


def xy_yz_resolution(prime: int = ff.DEFAULT_P) -> DGEModuleData:
    """Resolution of ``k[x,y,z]/(xy, yz)`` with its homotopies."""
    spec = jorgensen_spec(prime)
    x, y, z = spec.ring.gens()
    return common_factor_family(spec, y, x, z)


def change_presentation(m: DGEModuleData, b) -> DGEModuleData:
    """Replace ``f`` by ``b f`` and ``lam`` by ``b lam`` for a constant invertible ``b``."""
    p = m.p
    b = ff.as_matrix(b, p)
    n = m.n
    if b.shape != (n, n) or not ff.is_invertible(b, p):
        raise ValueError("change of presentation needs an invertible n x n matrix")
    ring = m.ring
    f = tuple(
        sum((m.spec.f[i] * int(b[j, i]) for i in range(n)), ring.zero()) for j in range(n)
    )
    spec = RingSpec(ring, f, m.spec.minimal and all(not g.linear_part() for g in f))
    lams = []
    for j in range(n):
        lj = {}
        for d in m.degrees():
            acc = PolyMatrix.zero(ring, m.rank(d + 1), m.rank(d))
            for i in range(n):
                if b[j, i]:
                    acc = acc + m.lam(i, d).scale(int(b[j, i]))
            lj[d] = acc
        lams.append(lj)
    return _verified(DGEModuleData(spec, m.complex, tuple(lams)))


# --------------------------------------------------------------------------
# closed-fiber data described by multiplication tables


def _from_products(n, m, l, aa, ab, p):
    """Closed-fiber datum on ``k + k^n + k^m + k^l`` (basis 1, a, b, c) with
    ``lam_i`` the left multiplication by ``a_i``.

    ``aa[(i, j)] = (k, s)`` means ``a_i a_j = s b_k``; the opposite order is
    filled in with the opposite sign.  ``ab[(i, j)] = (k, s)`` means
    ``a_i b_j = s c_k``.  Indices are 0-based.
    """
    full_aa = {}
    for (i, j), (k, s) in aa.items():
        if i == j:
            raise ValueError("a_i a_i must vanish")
        full_aa[(i, j)] = (k, s)
        full_aa[(j, i)] = (k, -s)
    lams = []
    for i in range(n):
        l0 = ff.zeros(n, 1)
        l0[i, 0] = 1
        l1 = ff.zeros(m, n)
        for (a, j), (k, s) in full_aa.items():
            if a == i:
                l1[k, j] = s % p
        l2 = ff.zeros(l, m)
        for (a, j), (k, s) in ab.items():
            if a == i:
                l2[k, j] = s % p
        lams.append({0: l0, 1: l1, 2: l2})
    datum = ClosedFiberModuleData(n=n, p=p, lo=0, ranks=(1, n, m, l), lambdas=tuple(lams))
    return _verified(datum)


CODEPTH3_CLASSES = ("CI", "TE", "B", "G", "H")


def codepth3_family(cls: str, n: int, m: int, l: int, r=None, hp=None, hq=None, prime: int = ff.DEFAULT_P):
    """Closed-fiber datum of a codepth-3 algebra structure class.

    ``cls`` is one of ``CI``, ``TE``, ``B``, ``G`` (with ``r``) or ``H``
    (with ``hp``, ``hq``).  Only the listed nonzero products are used.
    """
    ff.check_characteristic(prime)
    aa, ab = {}, {}
    if cls == "CI":
        if not 0 <= n <= 3 or (m, l) != (comb(n, 2), comb(n, 3)):
            raise ValueError("CI needs n <= 3 and (m, l) = (C(n,2), C(n,3))")
        if n == 2:
            aa = {(0, 1): (0, 1)}
        elif n == 3:
            aa = {(1, 2): (0, 1), (2, 0): (1, 1), (0, 1): (2, 1)}
            ab = {(i, i): (0, 1) for i in range(3)}
    elif cls == "TE":
        if n < 3 or m < 3:
            raise ValueError("TE needs n >= 3 and m >= 3")
        aa = {(1, 2): (0, 1), (2, 0): (1, 1), (0, 1): (2, 1)}
    elif cls == "B":
        if n < 2 or m < 3 or l < 1:
            raise ValueError("B needs n >= 2, m >= 3, l >= 1")
        aa = {(0, 1): (2, 1)}
        ab = {(0, 0): (0, 1), (1, 1): (0, 1)}
    elif cls == "G":
        if r is None or r < 2 or r > min(n, m) or l < 1:
            raise ValueError("G(r) needs 2 <= r <= min(n, m) and l >= 1")
        ab = {(i, i): (0, 1) for i in range(r)}
    elif cls == "H":
        if hp is None or hq is None or hp < 0 or hq < 0 or hp >= n or hq > l or hp + hq > m:
            raise ValueError("H(p,q) needs 0 <= p < n, 0 <= q <= l, p + q <= m")
        aa = {(hp, i): (i, 1) for i in range(hp)}
        ab = {(hp, hp + i): (i, 1) for i in range(hq)}
    else:
        raise ValueError(f"unknown class {cls!r}; expected one of {CODEPTH3_CLASSES}")
    return _from_products(n, m, l, aa, ab, prime)


def codepth2_family(n: int, m: int, prime: int = ff.DEFAULT_P) -> ClosedFiberModuleData:
    """Ranks ``(1, n, m)`` with ``lam_i(1) = a_i`` and all other products zero."""
    ff.check_characteristic(prime)
    lams = []
    for i in range(n):
        l0 = ff.zeros(n, 1)
        l0[i, 0] = 1
        lams.append({0: l0})
    return _verified(ClosedFiberModuleData(n=n, p=prime, lo=0, ranks=(1, n, m), lambdas=tuple(lams)))


def exterior_datum(coeffs, p: int = ff.DEFAULT_P) -> ClosedFiberModuleData:
    """``Lambda(k^r)`` with zero differential and ``lam_i = sum_j coeffs[i][j] e_j ^ -``."""
    coeffs = ff.as_matrix(coeffs, p) if np.size(coeffs) else np.zeros((len(coeffs), 0), dtype=np.int64)
    n, r = coeffs.shape
    ring = PolyRing((), p)
    mats = [_exterior_left(ring, r, [ring.constant(int(c)) for c in coeffs[i]]) for i in range(n)]
    lams = tuple({d: a.eval_at_origin() for d, a in mi.items()} for mi in mats)
    return _verified(
        ClosedFiberModuleData(n=n, p=p, lo=0, ranks=tuple(comb(r, k) for k in range(r + 1)), lambdas=lams)
    )
