"""Sparse multivariate polynomials over F_p and sparse polynomial matrices."""
from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np

from .field import DEFAULT_P, FieldElement, check_characteristic


class PolyRing:
    """The polynomial ring F_p[names]; a shared context for polynomials."""

    def __init__(self, names=(), p: int = DEFAULT_P):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self.p = check_characteristic(p)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.names, self.p) == (other.names, other.p)

    def __hash__(self):
        return hash((self.names, self.p))

    def __repr__(self):
        return f"PolyRing({list(self.names)}, p={self.p})"

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return self.constant(1)

    def constant(self, c: int) -> Poly:
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> Poly:
        i = self.names.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> list[Poly]:
        return [self.var(x) for x in self.names]

    def monomial(self, exps, coeff: int = 1) -> Poly:
        return Poly(self, {tuple(exps): coeff})

    def coerce(self, x) -> Poly:
        if isinstance(x, Poly):
            if x.ring != self:
                raise ValueError(f"polynomial from {x.ring} used in {self}")
            return x
        if isinstance(x, (int, np.integer)):
            return self.constant(int(x))
        if isinstance(x, str):
            from .parser import parse_polynomial
            return parse_polynomial(x, self)
        raise TypeError(f"cannot coerce {type(x).__name__} to a polynomial")

    def monomials_of_degree(self, d: int) -> list[tuple[int, ...]]:
        return monomials(self.nvars, d)


def monomials(n: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree ``d`` in ``n`` variables, grlex-descending."""
    if d < 0:
        return []
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def _grlex_key(e):
    return (sum(e), e)


class Poly:
    """Immutable sparse polynomial: a map exponent-tuple -> nonzero residue."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        p = ring.p
        n = ring.nvars
        clean = {}
        for e, c in terms.items():
            c = int(c) % p
            if c:
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match {n} variables")
                clean[tuple(e)] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    # -- structure -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def linear_part(self) -> dict[int, int]:
        """Coefficients of the degree-one monomials, keyed by variable index."""
        out = {}
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[e.index(1)] = c
        return out

    def evaluate(self, point) -> int:
        p = self.ring.p
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = t * pow(int(v), k, p) % p
            total += t
        return total % p

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_coefficient(self) -> int:
        if not self.terms:
            return 0
        return self.sorted_terms()[0][1]

    def monic(self) -> Poly:
        lc = self.leading_coefficient()
        if lc in (0, 1):
            return self
        return self * pow(lc, -1, self.ring.p)

    # -- arithmetic ------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.constant(int(other))
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return Poly(self.ring, {e: c * int(other) for e, c in self.terms.items()})
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.ring.p
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = (t.get(e, 0) + c1 * c2) % p
        return Poly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, np.integer)):
            return self == self.ring.constant(int(other))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- printing --------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.ring.names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r})"


class PolyMatrix:
    """Sparse ``rows x cols`` matrix of polynomials over one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: PolyRing, rows: int, cols: int, entries: dict | None = None):
        self.ring = ring
        self.rows = int(rows)
        self.cols = int(cols)
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
            v = ring.coerce(v)
            if v:
                clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def zero(cls, ring, rows, cols):
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring, n, scale=1):
        return cls(ring, n, n, {(i, i): scale for i in range(n)})

    @classmethod
    def from_rows(cls, ring, rows, cols: int | None = None):
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged matrix rows")
        ent = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)}
        return cls(ring, nr, nc, ent)

    @classmethod
    def from_scalar(cls, ring, a: np.ndarray):
        a = np.asarray(a)
        ent = {(int(i), int(j)): int(a[i, j]) for i, j in zip(*np.nonzero(a))}
        return cls(ring, a.shape[0], a.shape[1], ent)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Poly:
        return self.entries.get(ij, self.ring.zero())

    def to_rows(self) -> list[list[Poly]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not self.entries

    def _check(self, other):
        if not isinstance(other, PolyMatrix):
            raise TypeError("expected a PolyMatrix")
        if other.ring != self.ring:
            raise ValueError("matrices over different rings")

    def __add__(self, other):
        self._check(other)
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e[k] + v if k in e else v
        return PolyMatrix(self.ring, self.rows, self.cols, e)

    def __neg__(self):
        return PolyMatrix(self.ring, self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> PolyMatrix:
        s = self.ring.coerce(s)
        return PolyMatrix(self.ring, self.rows, self.cols, {k: v * s for k, v in self.entries.items()})

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[(i, j)] = out[(i, j)] + a * b if (i, j) in out else a * b
        return PolyMatrix(self.ring, self.rows, other.cols, out)

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(self.ring, self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    @property
    def T(self):
        return self.transpose()

    def kron(self, other: PolyMatrix) -> PolyMatrix:
        self._check(other)
        out = {}
        for (i, j), a in self.entries.items():
            for (k, l), b in other.entries.items():
                out[(i * other.rows + k, j * other.cols + l)] = a * b
        return PolyMatrix(self.ring, self.rows * other.rows, self.cols * other.cols, out)

    def map(self, fn) -> PolyMatrix:
        return PolyMatrix(self.ring, self.rows, self.cols, {k: fn(v) for k, v in self.entries.items()})

    def eval_at_origin(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (i, j), v in self.entries.items():
            a[i, j] = v.constant_term()
        return a

    def first_nonzero(self):
        """The first nonzero entry in row-major order as ``((i, j), value)``, or None."""
        if not self.entries:
            return None
        k = min(self.entries)
        return k, self.entries[k]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.ring, self.shape, frozenset(self.entries.items())))

    def __repr__(self):
        rows = ["[" + ", ".join(str(v) for v in r) + "]" for r in self.to_rows()]
        return f"PolyMatrix({self.rows}x{self.cols}: [" + ", ".join(rows) + "])"

    @staticmethod
    def block(ring, grid: list[list[PolyMatrix | None]], row_sizes, col_sizes) -> PolyMatrix:
        """Assemble a block matrix; ``None`` blocks are zero."""
        out = {}
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                b = grid[bi][bj]
                if b is not None:
                    if b.shape != (rs, cs):
                        raise ValueError(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                    for (i, j), v in b.entries.items():
                        out[(r0 + i, c0 + j)] = v
                c0 += cs
            r0 += rs
        return PolyMatrix(ring, sum(row_sizes), sum(col_sizes), out)


def poly_eval_at_origin(f: Poly) -> FieldElement:
    """Constant term of ``f``: its image modulo the ideal of the variables."""
    return FieldElement(f.constant_term(), f.ring.p)
