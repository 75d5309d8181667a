"""Complexes of graded free modules over the operator ring ``A = k[chi_1..chi_n]``.

An :class:`AComplex` has finitely many blocks ``V_c`` of finite dimension,
indexed by a cohomological degree ``c``, and a differential

    d = sum_H chi^H (x) D_H,      D_H : V_c -> V_{c + 1 - 2|H|}.

Each ``chi_i`` has degree 2, so a cell ``chi^H (x) V_c`` sits in total
degree ``2|H| + c`` and ``d`` raises total degree by one.  The constant
term ``D_0`` and the linear terms ``D_i = D_{e_i}`` are what the Hom
construction produces; higher terms appear in Koszul objects on forms of
degree two or more.

Two gradings of the cohomology are offered.  ``"ext"`` is the total degree
above and works for every complex.  ``"internal"`` places a cell in degree
``2(|H| + c)``; it is only homogeneous when every term is linear, and it is
the grading in which each block ``V_c`` carries the shift ``Sigma^{-2c}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import field as ff
from .dgmodule import ClosedFiberModuleData, DGEModuleData, HomComplex, hom_complex, reduce_at_origin
from .poly import Poly, PolyRing, monomials

GRADINGS = ("ext", "internal")


def chi_ring(n: int, p: int) -> PolyRing:
    return PolyRing([f"chi{i + 1}" for i in range(n)], p)


def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _add(h, g):
    return tuple(a + b for a, b in zip(h, g))


class ComplexError(ValueError):
    """An operator complex whose differential does not square to zero."""


@dataclass(frozen=True, eq=False)
class AComplex:
    """Finite free complex over ``k[chi_1..chi_n]``.

    ``blocks`` maps a cohomological degree to a dimension; ``terms`` maps an
    exponent vector ``H`` to ``{c: matrix V_c -> V_{c+1-2|H|}}``.
    """

    n: int
    p: int
    blocks: dict
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        blocks = {int(c): int(v) for c, v in dict(self.blocks).items() if int(v) > 0}
        object.__setattr__(self, "blocks", dict(sorted(blocks.items())))
        clean = {}
        for h, by_block in dict(self.terms).items():
            h = tuple(int(x) for x in h)
            if len(h) != self.n or any(x < 0 for x in h):
                raise ValueError(f"bad exponent vector {h}")
            shift = 1 - 2 * sum(h)
            mats = {}
            for c, m in dict(by_block).items():
                c = int(c)
                src, tgt = self.dim(c), self.dim(c + shift)
                if src == 0 or tgt == 0:
                    continue
                a = np.mod(np.array(m, dtype=np.int64).reshape(tgt, src), self.p)
                if a.any():
                    mats[c] = a
            if mats:
                clean[h] = mats
        object.__setattr__(self, "terms", clean)

    # -- accessors ---------------------------------------------------------
    def dim(self, c: int) -> int:
        return self.blocks.get(c, 0)

    @property
    def degrees(self):
        return list(self.blocks)

    @property
    def bottom(self) -> int:
        return min(self.blocks) if self.blocks else 0

    @property
    def top(self) -> int:
        return max(self.blocks) if self.blocks else 0

    @property
    def total_dim(self) -> int:
        return sum(self.blocks.values())

    def term(self, h, c: int) -> np.ndarray:
        h = tuple(h)
        m = self.terms.get(h, {}).get(c)
        if m is None:
            return ff.zeros(self.dim(c + 1 - 2 * sum(h)), self.dim(c))
        return m

    @property
    def diff_const(self) -> dict:
        return dict(self.terms.get((0,) * self.n, {}))

    @property
    def diff_linear(self) -> list:
        return [dict(self.terms.get(_unit(self.n, i), {})) for i in range(self.n)]

    @property
    def is_linear(self) -> bool:
        return all(sum(h) == 1 for h in self.terms)

    @property
    def max_term_degree(self) -> int:
        return max((sum(h) for h in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, AComplex):
            return NotImplemented
        if (self.n, self.p, self.blocks) != (other.n, other.p, other.blocks):
            return False
        keys = set(self.terms) | set(other.terms)
        return all(
            np.array_equal(self.term(h, c), other.term(h, c)) for h in keys for c in self.blocks
        )

    __hash__ = None

    # -- structure checks --------------------------------------------------
    def square_residuals(self):
        """Yield ``(H, c, matrix)`` for every nonzero coefficient of ``d^2``."""
        by_total: dict = {}
        for h1, m1 in self.terms.items():
            for h2, m2 in self.terms.items():
                for c in m1:
                    mid = c + 1 - 2 * sum(h1)
                    if mid not in m2:
                        continue
                    key = (_add(h1, h2), c)
                    prod = ff.matmul(m2[mid], m1[c], self.p)
                    by_total[key] = np.mod(by_total[key] + prod, self.p) if key in by_total else prod
        for (h, c), m in sorted(by_total.items()):
            if m.any():
                yield h, c, m

    def check(self) -> AComplex:
        for h, c, _ in self.square_residuals():
            raise ComplexError(f"d^2 != 0: coefficient of chi^{h} on block {c}")
        return self

    @property
    def squares_to_zero(self) -> bool:
        return next(iter(self.square_residuals()), None) is None

    # -- cells and strands ---------------------------------------------------
    def _check_grading(self, grading):
        if grading not in GRADINGS:
            raise ValueError(f"grading must be one of {GRADINGS}")
        if grading == "internal" and not self.is_linear:
            raise ValueError("the internal grading needs a differential with only linear terms")

    def cells(self, d: int, grading: str = "ext"):
        """Cells ``(c, H)`` of degree ``d`` ordered by block, then grlex-descending ``H``."""
        out = []
        for c in self.blocks:
            if grading == "ext":
                rest = d - c
                if rest < 0 or rest % 2:
                    continue
                k = rest // 2
            else:
                if d % 2:
                    continue
                k = d // 2 - c
                if k < 0:
                    continue
            out.extend((c, h) for h in monomials(self.n, k))
        return out

    def cell_map(self, src, tgt) -> np.ndarray:
        """Matrix of ``d`` from the span of cells ``src`` to the span of ``tgt``."""
        t_off, off = {}, 0
        for cell in tgt:
            t_off[cell] = off
            off += self.dim(cell[0])
        out = ff.zeros(off, sum(self.dim(c) for c, _ in src))
        col = 0
        for c, h in src:
            w = self.dim(c)
            for hh, mats in self.terms.items():
                m = mats.get(c)
                if m is None:
                    continue
                key = (c + 1 - 2 * sum(hh), _add(h, hh))
                r = t_off.get(key)
                if r is not None:
                    out[r:r + m.shape[0], col:col + w] = (out[r:r + m.shape[0], col:col + w] + m) % self.p
            col += w
        return out

    def multiply_cells(self, h, src, tgt) -> np.ndarray:
        """Matrix of multiplication by ``chi^h`` from ``src`` cells to ``tgt`` cells."""
        t_off, off = {}, 0
        for cell in tgt:
            t_off[cell] = off
            off += self.dim(cell[0])
        out = ff.zeros(off, sum(self.dim(c) for c, _ in src))
        col = 0
        for c, hh in src:
            w = self.dim(c)
            r = t_off.get((c, _add(hh, h)))
            if r is not None:
                out[r:r + w, col:col + w] = ff.identity(w)
            col += w
        return out

    def move_rows(self, h, src, tgt, vectors) -> np.ndarray:
        """``multiply_cells(h, src, tgt) @ vectors`` without forming the matrix."""
        t_off, off = {}, 0
        for cell in tgt:
            t_off[cell] = off
            off += self.dim(cell[0])
        out = ff.zeros(off, vectors.shape[1])
        row = 0
        for c, hh in src:
            w = self.dim(c)
            r = t_off.get((c, _add(hh, h)))
            if r is not None:
                out[r:r + w] = vectors[row:row + w]
            row += w
        return out

    def specialize(self, point) -> np.ndarray:
        """The square matrix ``sum_H a^H D_H`` on the direct sum of all blocks."""
        pt = [int(a) % self.p for a in point]
        if len(pt) != self.n:
            raise ValueError(f"point needs {self.n} coordinates")
        off, acc = {}, 0
        for c, v in self.blocks.items():
            off[c] = acc
            acc += v
        out = ff.zeros(acc, acc)
        for h, mats in self.terms.items():
            coef = 1
            for a, e in zip(pt, h):
                coef = coef * pow(a, e, self.p) % self.p
            if coef == 0:
                continue
            s = 1 - 2 * sum(h)
            for c, m in mats.items():
                r, col = off[c + s], off[c]
                out[r:r + m.shape[0], col:col + m.shape[1]] = (
                    out[r:r + m.shape[0], col:col + m.shape[1]] + coef * m
                ) % self.p
        return out


# --------------------------------------------------------------------------
# construction


def _from_hom(h, n, p) -> AComplex:
    blocks = {-d: h.rank(d) for d in h.degrees()}
    terms = {(0,) * n: {-d: h.diff(d) for d in h.degrees()}}
    for i in range(n):
        terms[_unit(n, i)] = {-d: h.lam(i, d) for d in h.degrees()}
    return AComplex(n, p, blocks, terms).check()


def build_ce_closed_fiber(m: ClosedFiberModuleData, nn: ClosedFiberModuleData) -> AComplex:
    """Closed fiber of the operator complex of ``(M, N)``.

    The block in cohomological degree ``c`` is ``Hom(M, N)`` in homological
    degree ``-c``; ``D_0`` is the Hom differential and ``D_i`` the Hom
    operator of ``lam_i``.  Either argument may be full data, which is
    reduced at the origin first.
    """
    if isinstance(m, DGEModuleData):
        m = reduce_at_origin(m)
    if isinstance(nn, DGEModuleData):
        nn = reduce_at_origin(nn)
    if m.n != nn.n:
        raise ValueError(f"operator counts differ: {m.n} vs {nn.n}")
    if m.p != nn.p:
        raise ValueError("data over different fields")
    return _from_hom(hom_complex(m, nn), m.n, m.p)


@dataclass(frozen=True)
class OperatorComplex:
    """Operator complex over ``S = Q[chi]``: ``S (x) Hom_Q(F, G)`` with
    differential ``1 (x) d + sum_i chi_i (x) Lambda_i``."""

    hom: HomComplex

    @property
    def n(self) -> int:
        return self.hom.n

    @property
    def p(self) -> int:
        return self.hom.p

    def reduce(self) -> AComplex:
        return _from_hom(reduce_at_origin(self.hom), self.n, self.p)

    def quotient_by_chi(self) -> HomComplex:
        """``C / (chi) C``, which is the Hom complex itself."""
        return self.hom

    def square_is_zero(self) -> bool:
        from .dgmodule import verify_dg_axioms

        return verify_dg_axioms(self.hom).ok


def build_ce_full(f: DGEModuleData, g: DGEModuleData) -> OperatorComplex:
    if f.spec != g.spec:
        raise ValueError("data over different rings")
    h = hom_complex(f, g)
    from .dgmodule import verify_dg_axioms

    report = verify_dg_axioms(h)
    if not report.ok:
        raise ComplexError(f"operator complex fails d^2 = 0:\n{report}")
    return OperatorComplex(h)


def free_complex(n: int, p: int, blocks: dict) -> AComplex:
    """Free module with zero differential and the given block dimensions."""
    return AComplex(n, p, blocks, {})


def shift(c: AComplex, k: int) -> AComplex:
    """Move block ``b`` to ``b + k``; odd shifts negate the differential."""
    s = -1 if k % 2 else 1
    return AComplex(
        c.n, c.p, {b + k: v for b, v in c.blocks.items()},
        {h: {b + k: s * m for b, m in mats.items()} for h, mats in c.terms.items()},
    )


def direct_sum(a: AComplex, b: AComplex) -> AComplex:
    if (a.n, a.p) != (b.n, b.p):
        raise ValueError("direct sum of incompatible complexes")
    degs = sorted(set(a.blocks) | set(b.blocks))
    blocks = {c: a.dim(c) + b.dim(c) for c in degs}
    terms = {}
    for h in set(a.terms) | set(b.terms):
        s = 1 - 2 * sum(h)
        terms[h] = {c: _block2(a.term(h, c), b.term(h, c)) for c in degs if blocks.get(c + s)}
    return AComplex(a.n, a.p, blocks, terms)


def _block2(x, y):
    return ff.block_diag([x, y])


def tensor(a: AComplex, b: AComplex) -> AComplex:
    """``a (x)_A b`` with the Koszul sign ``(-1)^c`` on ``1 (x) d_b`` over block ``c`` of ``a``."""
    if (a.n, a.p) != (b.n, b.p):
        raise ValueError("tensor of incompatible complexes")
    layout = {}
    for ca, va in a.blocks.items():
        for cb, vb in b.blocks.items():
            layout.setdefault(ca + cb, []).append((ca, cb))
    offsets = {}
    blocks = {}
    for c, pairs in layout.items():
        off = 0
        for ca, cb in pairs:
            offsets[(ca, cb)] = off
            off += a.dim(ca) * b.dim(cb)
        blocks[c] = off
    terms: dict = {}

    def put(h, src_pair, tgt_pair, mat):
        c_src = sum(src_pair)
        c_tgt = sum(tgt_pair)
        if tgt_pair not in offsets:
            return
        by = terms.setdefault(h, {})
        if c_src not in by:
            by[c_src] = ff.zeros(blocks[c_tgt], blocks[c_src])
        r, col = offsets[tgt_pair], offsets[src_pair]
        by[c_src][r:r + mat.shape[0], col:col + mat.shape[1]] += mat

    for (ca, cb) in offsets:
        va, vb = a.dim(ca), b.dim(cb)
        for h, mats in a.terms.items():
            if ca in mats:
                put(h, (ca, cb), (ca + 1 - 2 * sum(h), cb), np.kron(mats[ca], ff.identity(vb)))
        sign = -1 if ca % 2 else 1
        for h, mats in b.terms.items():
            if cb in mats:
                put(h, (ca, cb), (ca, cb + 1 - 2 * sum(h)), sign * np.kron(ff.identity(va), mats[cb]))
    return AComplex(a.n, a.p, blocks, terms).check()


def koszul_object(c: AComplex, form) -> AComplex:
    """Mapping cone of multiplication by a homogeneous form ``a`` of degree ``e``.

    The source copy of block ``b`` sits in block ``b + 2e - 1`` and the
    differential is ``(x, y) -> (d x + a y, -d y)``.
    """
    if isinstance(form, Poly):
        poly = form
        if poly.ring.nvars != c.n:
            raise ValueError("form lives in a ring with the wrong number of variables")
    else:
        poly = chi_ring(c.n, c.p).coerce(form)
    if poly.is_zero():
        raise ValueError("the zero form has no degree")
    if not poly.is_homogeneous():
        raise ValueError(f"form {poly} is not homogeneous")
    e = poly.degree()
    shift_by = 2 * e - 1
    degs = sorted(set(c.blocks) | {b + shift_by for b in c.blocks})
    orig = {b: c.dim(b) for b in degs}
    copy = {b: c.dim(b - shift_by) for b in degs}
    blocks = {b: orig[b] + copy[b] for b in degs}

    def embed(b_src, b_tgt, oo=None, cc=None, co=None):
        m = ff.zeros(blocks.get(b_tgt, 0), blocks[b_src])
        if oo is not None:
            m[:orig[b_tgt], :orig[b_src]] = oo
        if cc is not None:
            m[orig[b_tgt]:, orig[b_src]:] = cc
        if co is not None:
            m[:orig[b_tgt], orig[b_src]:] = co
        return m

    terms: dict = {}
    for h in set(c.terms) | {tuple(mono) for mono in poly.terms}:
        s = 1 - 2 * sum(h)
        coef = poly.terms.get(h, 0)
        by = {}
        for b in degs:
            t = b + s
            if not blocks.get(t):
                continue
            oo = c.term(h, b) if c.dim(b) and c.dim(t) else None
            cc = -c.term(h, b - shift_by) if c.dim(b - shift_by) and c.dim(t - shift_by) else None
            co = None
            if coef and copy[b] and orig.get(t, 0):
                # t == b - shift_by: the copy of block t maps onto block t
                co = coef * ff.identity(copy[b])
            by[b] = embed(b, t, oo, cc, co)
        terms[h] = by
    return AComplex(c.n, c.p, blocks, terms).check()


def change_operators(c: AComplex, b) -> AComplex:
    """Substitute ``chi_i -> sum_j b[j][i] chi'_j``; on linear terms this is
    ``D'_j = sum_i b[j][i] D_i``."""
    b = ff.as_matrix(b, c.p)
    if b.shape != (c.n, c.n):
        raise ValueError(f"expected an {c.n}x{c.n} matrix")
    if not ff.is_invertible(b, c.p):
        raise ValueError("change of presentation needs an invertible matrix")
    ring = chi_ring(c.n, c.p)
    xs = ring.gens()
    subs = [sum((xs[j] * int(b[j, i]) for j in range(c.n)), ring.zero()) for i in range(c.n)]
    terms: dict = {}
    for h, mats in c.terms.items():
        image = ring.one()
        for i, e in enumerate(h):
            image = image * subs[i] ** e
        for hh, coef in image.terms.items():
            by = terms.setdefault(hh, {})
            for blk, m in mats.items():
                by[blk] = (by[blk] + coef * m) % c.p if blk in by else (coef * m) % c.p
    return AComplex(c.n, c.p, dict(c.blocks), terms).check()


# --------------------------------------------------------------------------
# cohomology


class _Part:
    """One summand of a strand: cells, the map into them and the map out."""

    def __init__(self, cells, dim, in_map, out_map, p):
        self.cells = cells
        self.dim = dim
        self.in_map = in_map
        self.out_map = out_map
        self.p = p

    @cached_property
    def kernel_dim(self) -> int:
        return self.dim - ff.rank(self.out_map, self.p)

    @cached_property
    def image_rank(self) -> int:
        return ff.rank(self.in_map, self.p)

    @property
    def homology_dim(self) -> int:
        return self.kernel_dim - self.image_rank

    @cached_property
    def image(self):
        return ff.column_space(self.in_map, self.p)

    @cached_property
    def representatives(self):
        if self.homology_dim == 0:
            return ff.zeros(self.dim, 0)
        img = self.image
        ker = ff.kernel(self.out_map, self.p)
        _, piv = ff.rref(np.hstack([img, ker]), self.p)
        keep = [j - img.shape[1] for j in piv if j >= img.shape[1]]
        return ker[:, keep]

    def coordinates(self, vectors):
        reps = self.representatives
        if reps.shape[1] == 0:
            return ff.zeros(0, vectors.shape[1])
        img = self.image
        x = ff.solve(np.hstack([img, reps]), vectors, self.p)
        if x is None:
            raise ComplexError("vector is not a cycle of this strand")
        return x[img.shape[1]:, :]


class Strand:
    """The piece of degree ``d`` with its incoming and outgoing maps.

    With a linear differential the piece splits into one summand per block
    (the cells ``(c, H)`` with ``|H|`` fixed), and homology is computed on
    each summand separately.  Otherwise there is a single summand, the full
    three-term complex ``V_{d-1} -> V_d -> V_{d+1}``.  In the internal
    grading a degree is itself a complex, so ``in_map`` and ``out_map``
    are the same square matrix on ``V_d``.
    """

    def __init__(self, c: AComplex, d: int, grading: str):
        self.complex = c
        self.d = d
        self.grading = grading
        self.p = c.p
        self.cells = c.cells(d, grading)
        self.dim = sum(c.dim(b) for b, _ in self.cells)
        if c.is_linear:
            groups: dict = {}
            for cell in self.cells:
                groups.setdefault(cell[0], []).append(cell)
            self.parts = []
            for b, cells in groups.items():
                k = sum(cells[0][1])
                before = [(b + 1, h) for h in monomials(c.n, k - 1)] if c.dim(b + 1) else []
                after = [(b - 1, h) for h in monomials(c.n, k + 1)] if c.dim(b - 1) else []
                self.parts.append(_Part(cells, c.dim(b) * len(cells), c.cell_map(before, cells),
                                        c.cell_map(cells, after), c.p))
        else:
            before, after = c.cells(d - 1, grading), c.cells(d + 1, grading)
            self.parts = [_Part(self.cells, self.dim, c.cell_map(before, self.cells),
                                c.cell_map(self.cells, after), c.p)]

    @cached_property
    def in_map(self) -> np.ndarray:
        if self.grading == "internal":
            return self.complex.cell_map(self.cells, self.cells)
        return self.complex.cell_map(self.complex.cells(self.d - 1, "ext"), self.cells)

    @cached_property
    def out_map(self) -> np.ndarray:
        if self.grading == "internal":
            return self.in_map
        return self.complex.cell_map(self.cells, self.complex.cells(self.d + 1, "ext"))

    @property
    def kernel_dim(self) -> int:
        return sum(pt.kernel_dim for pt in self.parts)

    @property
    def image_rank(self) -> int:
        return sum(pt.image_rank for pt in self.parts)

    @property
    def homology_dim(self) -> int:
        return sum(pt.homology_dim for pt in self.parts)

    @cached_property
    def representatives(self) -> np.ndarray:
        """Cycles whose classes form a basis of homology, block-diagonal over
        the summands.  Within a summand the boundary columns come first and
        the kernel columns that are pivots of the combined echelon form are
        kept, so the choice is deterministic."""
        return ff.block_diag([pt.representatives for pt in self.parts]) if self.parts else ff.zeros(0, 0)

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of cycles in the representative basis, modulo boundaries."""
        out, row = [], 0
        for pt in self.parts:
            out.append(pt.coordinates(vectors[row:row + pt.dim]))
            row += pt.dim
        if not out:
            return ff.zeros(0, vectors.shape[1])
        return np.vstack(out)


def strand(c: AComplex, d: int, grading: str = "ext") -> Strand:
    c._check_grading(grading)
    return Strand(c, d, grading)


@dataclass(frozen=True)
class HilbertFunction:
    dims: dict
    grading: str = "ext"

    @property
    def dmax(self) -> int:
        return max(self.dims) if self.dims else -1

    def values(self, start: int = 0) -> tuple:
        return tuple(self.dims[d] for d in sorted(self.dims) if d >= start)

    def __getitem__(self, d):
        return self.dims.get(d, 0)

    def total(self) -> int:
        return sum(self.dims.values())


def default_dmax(c: AComplex, grading: str = "ext") -> int:
    """``2 * top + 2 n + 4`` with ``top`` the highest block degree in the grading used."""
    top = max(c.top, 0) * (2 if grading == "internal" else 1)
    return 2 * top + 2 * c.n + 4


def hilbert_function(c: AComplex, dmax: int | None = None, grading: str = "ext", start: int | None = None) -> HilbertFunction:
    """``dim H^d`` for ``start <= d <= dmax``; ``start`` defaults to
    ``min(0, lowest occupied degree)``."""
    c._check_grading(grading)
    if dmax is None:
        dmax = default_dmax(c, grading)
    if dmax < 0:
        raise ValueError("dmax must be nonnegative")
    if start is None:
        low = c.bottom if grading == "ext" else 2 * c.bottom
        start = min(0, low)
    return HilbertFunction({d: strand(c, d, grading).homology_dim for d in range(start, dmax + 1)}, grading)


def bigraded_dims(c: AComplex, cmax: int, kmax: int) -> dict:
    """``h(b, k)``: homology at the cells of block ``b`` with ``|H| = k``
    (only defined when every term is linear)."""
    if not c.is_linear:
        raise ValueError("bigraded dimensions need a linear differential")
    out = {}
    for k in range(kmax + 1):
        for b in c.blocks:
            if b <= cmax:
                part = next(pt for pt in strand(c, 2 * k + b, "ext").parts if pt.cells[0][0] == b)
                out[(b, k)] = part.homology_dim
    return out


def chi_action(c: AComplex, i: int, d: int, grading: str = "ext") -> np.ndarray:
    """Matrix of multiplication by ``chi_i`` from ``H^d`` to ``H^{d+2}`` in the
    representative bases of :class:`Strand`."""
    return monomial_action(c, _unit(c.n, i), d, grading)


def monomial_action(c: AComplex, h, d: int, grading: str = "ext", _cache=None) -> np.ndarray:
    h = tuple(h)
    src = strand(c, d, grading) if _cache is None else _cache(d)
    tgt = strand(c, d + 2 * sum(h), grading) if _cache is None else _cache(d + 2 * sum(h))
    reps = src.representatives
    if reps.shape[1] == 0 or tgt.dim == 0:
        return ff.zeros(tgt.homology_dim, reps.shape[1])
    moved = c.move_rows(h, src.cells, tgt.cells, reps)
    return tgt.coordinates(moved)


@dataclass(frozen=True)
class BoundedIdeal:
    """Homogeneous forms annihilating the computed cohomology, by degree."""

    degree_bound: int
    generators: tuple
    dmax: int
    unit: bool = False

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def __str__(self):
        if self.unit:
            return "(1)"
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def bounded_annihilator(c: AComplex, dmax: int | None = None, deg_bound: int = 2, grading: str = "ext") -> BoundedIdeal:
    """Forms of degree ``<= deg_bound`` that kill ``H^d`` for every computed
    ``d <= dmax - 2 e`` (``e`` the form's degree).

    Generators in each degree span a complement of the multiples of lower
    generators; each is scaled so its grlex-leading coefficient is 1.
    """
    c._check_grading(grading)
    if dmax is None:
        dmax = default_dmax(c, grading)
    top = c.top if grading == "ext" else 2 * c.top
    if dmax < 2 * deg_bound + top:
        raise ValueError(
            f"dmax={dmax} is too small for deg_bound={deg_bound}: need at least {2 * deg_bound + top}"
        )
    low = c.bottom if grading == "ext" else 2 * c.bottom
    start = min(0, low)
    cache: dict = {}

    def get(d):
        if d not in cache:
            cache[d] = strand(c, d, grading)
        return cache[d]

    ring = chi_ring(c.n, c.p)
    if all(get(d).homology_dim == 0 for d in range(start, dmax + 1)):
        return BoundedIdeal(deg_bound, (ring.one(),), dmax, unit=True)

    gens: list[Poly] = []
    ideal_by_degree: dict = {}
    for e in range(1, deg_bound + 1):
        monos = monomials(c.n, e)
        rows = []
        for d in range(start, dmax - 2 * e + 1):
            if get(d).homology_dim == 0:
                continue
            blocks = [monomial_action(c, h, d, grading, get) for h in monos]
            if blocks[0].shape[0] == 0:
                continue
            # column k of the stacked system is the form chi^monos[k]
            stacked = np.stack([b.reshape(-1) for b in blocks], axis=1)
            rows.append(stacked)
        system = np.vstack(rows) if rows else ff.zeros(0, len(monos))
        sol = ff.kernel(system, c.p)
        space = _canonical_rows(sol.T, c.p)
        lower = _multiples(ideal_by_degree, e, c.n, c.p)
        ideal_by_degree[e] = space
        chosen = _complement(lower, space, c.p)
        for vec in chosen:
            poly = Poly(ring, {monos[k]: int(v) for k, v in enumerate(vec) if v})
            gens.append(poly.monic())
    return BoundedIdeal(deg_bound, tuple(gens), dmax)


def _canonical_rows(m, p):
    if m.shape[0] == 0:
        return m
    r, piv = ff.rref(m, p)
    return r[: len(piv)]


def _multiples(ideal_by_degree, e, n, p):
    """Rows spanning ``sum_{e' < e} I_{e'} * (monomials of degree e - e')`` in degree ``e``."""
    target = {h: k for k, h in enumerate(monomials(n, e))}
    rows = []
    for e1, space in ideal_by_degree.items():
        src = monomials(n, e1)
        for vec in space:
            for mono in monomials(n, e - e1):
                row = np.zeros(len(target), dtype=np.int64)
                for k, v in enumerate(vec):
                    if v:
                        row[target[_add(src[k], mono)]] += v
                rows.append(row % p)
    if not rows:
        return np.zeros((0, len(target)), dtype=np.int64)
    return np.array(rows)


def _complement(lower, space, p):
    """Rows of ``space`` extending a basis of ``span(lower)`` to ``span(lower + space)``."""
    base = ff.rank(lower, p) if lower.shape[0] else 0
    chosen = []
    current = lower
    for row in space:
        trial = np.vstack([current, row[None, :]]) if current.shape[0] else row[None, :]
        rk = ff.rank(trial, p)
        if rk > base:
            chosen.append(row)
            current = trial
            base = rk
    return chosen
