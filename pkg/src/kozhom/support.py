"""Cohomological supports over projective space on the rational points.

A point ``a`` of ``P^{n-1}(F_q)`` is in the support of an operator complex
when specializing ``chi -> a`` leaves a finite complex with nonzero
homology.  Since that specialized differential squares to zero, this is the
test ``dim V != 2 rank(d_a)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import field as ff
from .dgmodule import DGEModuleData, reduce_at_origin, residue_field_datum
from .opcomplex import (
    AComplex,
    BoundedIdeal,
    HilbertFunction,
    bounded_annihilator,
    build_ce_closed_fiber,
    change_operators,
    chi_ring,
    default_dmax,
    hilbert_function,
)
from .poly import Poly


@dataclass(frozen=True, order=True)
class ProjPoint:
    """Point of projective space, normalized so the first nonzero coordinate is 1."""

    coords: tuple
    p: int = ff.DEFAULT_P

    def __post_init__(self):
        c = [int(a) % self.p for a in self.coords]
        lead = next((a for a in c if a), 0)
        if lead == 0:
            raise ValueError("the zero vector is not a projective point")
        s = ff.inv(lead, self.p)
        object.__setattr__(self, "coords", tuple(a * s % self.p for a in c))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __str__(self):
        return "(" + ":".join(str(a) for a in self.coords) + ")"


def projective_points(n: int, q: int = ff.DEFAULT_P) -> list[ProjPoint]:
    """All points of ``P^{n-1}(F_q)`` in lexicographic order of normalized coordinates."""
    pts = []
    for lead in range(n):
        for tail in product(range(q), repeat=n - lead - 1):
            pts.append(ProjPoint((0,) * lead + (1,) + tail, q))
    return sorted(pts)


def _check_q(c: AComplex, q):
    if q is None:
        return c.p
    if q != c.p:
        raise ValueError(f"only q = p is supported (got q={q}, p={c.p})")
    return q


def point_in_support(c: AComplex, pt) -> bool:
    coords = pt.coords if isinstance(pt, ProjPoint) else tuple(pt)
    if len(coords) != c.n:
        raise ValueError(f"point has {len(coords)} coordinates, expected {c.n}")
    if c.total_dim == 0:
        return False
    d = c.specialize(coords)
    return c.total_dim - 2 * ff.rank(d, c.p) != 0


def support_points(c: AComplex, q=None) -> list[ProjPoint]:
    q = _check_q(c, q)
    return [pt for pt in projective_points(c.n, q) if point_in_support(c, pt)]


# --------------------------------------------------------------------------
# complexity


@dataclass(frozen=True)
class Complexity:
    value: int
    confidence: str
    tail_start: int

    def __int__(self):
        return self.value

    def __str__(self):
        return f"{self.value} ({self.confidence})"


def _poly_degree(seq):
    """Degree of the polynomial through ``seq`` read off successive differences;
    -1 for all zeros, ``None`` when no difference is constant."""
    cur = list(seq)
    if not any(cur):
        return -1
    for k in range(len(cur)):
        if len(set(cur)) <= 1:
            return k
        cur = [b - a for a, b in zip(cur, cur[1:])]
    return None


def _estimate(dims, start):
    degs = []
    for parity in (0, 1):
        seq = [v for d, v in sorted(dims.items()) if d >= start and d % 2 == parity]
        deg = _poly_degree(seq)
        degs.append(len(seq) if deg is None else deg)
    top = max(degs)
    return 0 if top < 0 else top + 1


def complexity(h) -> Complexity:
    """Growth order of a Hilbert function on the top half of its window.

    Even and odd degrees are read separately because the operators have
    degree 2.  ``confidence`` is ``"low"`` with fewer than 8 tail values,
    ``"stable"`` if the last quarter of the window gives the same answer,
    ``"unstable"`` otherwise.
    """
    dims = h.dims if isinstance(h, HilbertFunction) else dict(enumerate(h))
    dims = {d: v for d, v in dims.items() if d >= 0}
    if not dims:
        return Complexity(0, "low", 0)
    dmax = max(dims)
    start = dmax - dmax // 2
    value = _estimate(dims, start)
    tail = sum(1 for d in dims if d >= start)
    if tail < 8:
        return Complexity(value, "low", start)
    quarter = dmax - dmax // 4
    confidence = "stable" if _estimate(dims, quarter) == value else "unstable"
    return Complexity(value, confidence, start)


# --------------------------------------------------------------------------
# reports


def _linear_forms(n, q):
    return projective_points(n, q)


def _on_hyperplane(pt, form, q):
    return sum(a * b for a, b in zip(pt.coords, form.coords)) % q == 0


def _span_points(points, n, q):
    """Rational points of the projective linear span of ``points``."""
    if not points:
        return set()
    basis = ff.column_space(np.array([p.coords for p in points]).T, q)
    out = set()
    for coeffs in product(range(q), repeat=basis.shape[1]):
        v = ff.matmul(basis, np.array(coeffs, dtype=np.int64).reshape(-1, 1), q)[:, 0]
        if v.any():
            out.add(ProjPoint(tuple(int(a) for a in v), q))
    return out


def point_pattern(points, n, q) -> str:
    """Describe the shape of a point set; purely descriptive."""
    pts = set(points)
    if not pts:
        return "empty"
    span = _span_points(pts, n, q)
    if span == pts:
        dim = ff.rank(np.array([p.coords for p in pts]), q) - 1
        return f"linear subspace of dimension {dim}"
    return "not a single linear subspace"


def _form_poly(form: ProjPoint) -> Poly:
    ring = chi_ring(form.n, form.p)
    xs = ring.gens()
    return sum((xs[i] * a for i, a in enumerate(form.coords) if a), ring.zero())


@dataclass(frozen=True)
class HyperplaneCheck:
    kind: str  # empty | contained-in-hyperplane | full | other
    forms: tuple = ()
    exact: bool = False
    points: tuple = ()

    def __str__(self):
        if self.kind == "contained-in-hyperplane":
            forms = ", ".join(str(_form_poly(f)) for f in self.forms)
            what = "equal to hyperplane" if self.exact else "contained in hyperplane"
            return f"{what} {forms}"
        if self.kind == "other":
            return "other: " + ", ".join(str(p) for p in self.points)
        return self.kind


@dataclass(frozen=True)
class SupportReport:
    n: int
    q: int
    points: tuple
    total_points: int
    hilbert: HilbertFunction | None = None
    annihilator: BoundedIdeal | None = None
    complexity: Complexity | None = None
    pattern: str = ""

    @property
    def is_empty(self) -> bool:
        return not self.points

    @property
    def is_full(self) -> bool:
        return len(self.points) == self.total_points

    def summary(self) -> str:
        if self.is_full and self.points:
            head = f"all {self.total_points} points of P^{self.n - 1}(F_{self.q})"
        else:
            pts = ", ".join(str(p) for p in self.points)
            head = f"{len(self.points)} of {self.total_points} points" + (f": {pts}" if pts else "")
        return head


def hyperplane_check(r: SupportReport) -> HyperplaneCheck:
    """Classify a support as empty, full, inside one or more rational
    hyperplanes, or none of these."""
    pts = set(r.points)
    if not pts:
        return HyperplaneCheck("empty")
    if len(pts) == r.total_points:
        return HyperplaneCheck("full")
    forms = [f for f in _linear_forms(r.n, r.q) if all(_on_hyperplane(p, f, r.q) for p in pts)]
    if forms:
        exact = len(forms) == 1 and all(
            (p in pts) == _on_hyperplane(p, forms[0], r.q) for p in projective_points(r.n, r.q)
        )
        return HyperplaneCheck("contained-in-hyperplane", tuple(forms), exact)
    return HyperplaneCheck("other", points=tuple(sorted(pts)))


def pointwise_support(c: AComplex, q=None, dmax=None, deg_bound: int = 2, grading: str = "ext",
                      with_annihilator: bool = True) -> SupportReport:
    q = _check_q(c, q)
    if grading == "internal" and not c.is_linear:
        grading = "ext"
    if dmax is None:
        dmax = default_dmax(c, grading)
    pts = tuple(support_points(c, q))
    h = hilbert_function(c, dmax, grading)
    ann = None
    if with_annihilator and c.n:
        top = c.top if grading == "ext" else 2 * c.top
        bound = min(deg_bound, max((dmax - top) // 2, 0))
        if bound >= 1:
            ann = bounded_annihilator(c, dmax, bound, grading)
    return SupportReport(
        n=c.n, q=q, points=pts, total_points=len(projective_points(c.n, q)),
        hilbert=h, annihilator=ann, complexity=complexity(h), pattern=point_pattern(pts, c.n, q),
    )


# --------------------------------------------------------------------------
# complete intersections


@dataclass(frozen=True)
class CIVerdict:
    is_ci: bool
    support_empty: bool
    tail_vanishes: bool
    report: SupportReport

    def __str__(self):
        word = "CI" if self.is_ci else "not CI"
        return (f"{word} (support {'empty' if self.support_empty else 'nonempty'}, "
                f"tail {'vanishes' if self.tail_vanishes else 'nonzero'})")


def is_complete_intersection(m: DGEModuleData, q=None, dmax=None) -> CIVerdict:
    """Decide whether ``f`` is a regular sequence from the resolution of ``Q/(f)``.

    Both tests must agree: the support of ``(R, k)`` is empty and the Ext
    dimensions vanish on the top half of the window.
    """
    f = m.spec.f
    if m.lo != 0 or m.rank(0) != 1:
        raise ValueError("degree 0 of the resolution must be free of rank 1")
    row = m.diff(1)
    if row.shape != (1, m.rank(1)) or tuple(row[0, j] for j in range(row.cols)) != f:
        raise ValueError("the first differential must be the row (f_1 ... f_n)")
    c = build_ce_closed_fiber(reduce_at_origin(m), residue_field_datum(m.n, m.p))
    rep = pointwise_support(c, q, dmax, with_annihilator=False)
    h = rep.hilbert
    start = h.dmax - h.dmax // 2
    tail_zero = all(v == 0 for d, v in h.dims.items() if d >= start)
    empty = rep.is_empty
    return CIVerdict(empty and tail_zero, empty, tail_zero, rep)


# --------------------------------------------------------------------------
# support identities


def _support_set(x, y, q):
    return set(support_points(build_ce_closed_fiber(x, y), q))


@dataclass(frozen=True)
class PointCheck:
    label: str
    left: frozenset
    right: frozenset
    extra: frozenset | None = None

    @property
    def ok(self) -> bool:
        return self.left == self.right and (self.extra is None or self.extra == self.left)


@dataclass(frozen=True)
class CheckReport:
    checks: tuple = field(default_factory=tuple)

    @property
    def violations(self) -> int:
        return sum(1 for c in self.checks if not c.ok)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _closed(x):
    return reduce_at_origin(x) if isinstance(x, DGEModuleData) else x


def verify_symmetry(pairs, q=None) -> CheckReport:
    """For each ``(M, N)`` compare the supports of ``(M, N)``, ``(N, M)`` and
    the intersection of the supports of ``(M, M)`` and ``(N, N)``."""
    checks = []
    for k, (x, y) in enumerate(pairs):
        x, y = _closed(x), _closed(y)
        qq = q or x.p
        a = frozenset(_support_set(x, y, qq))
        b = frozenset(_support_set(y, x, qq))
        inter = frozenset(_support_set(x, x, qq) & _support_set(y, y, qq))
        checks.append(PointCheck(f"pair {k}", a, b, inter))
    return CheckReport(tuple(checks))


def verify_intersection_formula(m1, m2, n1, n2, q=None) -> CheckReport:
    """``V(M,N) & V(M',N') == V(M,N') & V(M',N)`` on rational points."""
    m1, m2, n1, n2 = (_closed(x) for x in (m1, m2, n1, n2))
    qq = q or m1.p
    left = frozenset(_support_set(m1, n1, qq) & _support_set(m2, n2, qq))
    right = frozenset(_support_set(m1, n2, qq) & _support_set(m2, n1, qq))
    return CheckReport((PointCheck("intersection", left, right),))


def transform_point(pt: ProjPoint, b) -> ProjPoint:
    """Image of a support point under ``D'_j = sum_i b[j][i] D_i``: ``a -> (b^T)^{-1} a``."""
    b = ff.as_matrix(b, pt.p)
    inv_t = ff.inverse(b.T, pt.p)
    v = ff.matmul(inv_t, np.array(pt.coords, dtype=np.int64).reshape(-1, 1), pt.p)[:, 0]
    return ProjPoint(tuple(int(a) for a in v), pt.p)


def change_of_presentation(obj, b):
    """Transform an operator complex, a support report or full module data
    under a constant invertible change of the Koszul generators."""
    if isinstance(obj, AComplex):
        return change_operators(obj, b)
    if isinstance(obj, SupportReport):
        b = ff.as_matrix(b, obj.q)
        if not ff.is_invertible(b, obj.q):
            raise ValueError("change of presentation needs an invertible matrix")
        pts = tuple(sorted(transform_point(p, b) for p in obj.points))
        return SupportReport(obj.n, obj.q, pts, obj.total_points, obj.hilbert, None, obj.complexity,
                             point_pattern(pts, obj.n, obj.q))
    if isinstance(obj, DGEModuleData):
        from .families import change_presentation

        return change_presentation(obj, b)
    raise TypeError(f"cannot change presentation of {type(obj).__name__}")
