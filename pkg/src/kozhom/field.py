"""Prime-field scalars and exact dense linear algebra mod p.

Matrices are plain ``numpy`` integer arrays whose entries are reduced
residues ``0 <= a < p``.  Every routine takes the characteristic explicitly
and returns fresh arrays; inputs are never modified.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_P = 5

# keeps a*b < 2**63 for reduced residues
_MAX_P = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_characteristic(p: int, allow_two: bool = False) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if p >= _MAX_P:
        raise ValueError(f"characteristic {p} too large (limit {_MAX_P})")
    if p == 2 and not allow_two:
        raise ValueError("characteristic 2 is not supported")
    return p


def inv(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


@dataclass(frozen=True)
class FieldElement:
    """A residue class modulo an odd prime ``p``."""

    value: int
    p: int = DEFAULT_P

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inverse(self) -> FieldElement:
        return FieldElement(inv(self.value, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * inv(o, self.p), self.p)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value}, p={self.p})"

    def __str__(self):
        return str(self.value)


def as_matrix(m, p: int) -> np.ndarray:
    """Coerce ``m`` to a reduced 2-D int64 array."""
    a = np.array(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else np.zeros((0, 0), dtype=np.int64)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return np.mod(a, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    # object fallback only if a dot product could overflow int64
    if a.shape[1] * (p - 1) ** 2 >= 2**63:
        return np.mod(a.astype(object) @ b.astype(object), p).astype(np.int64)
    return np.mod(a @ b, p)


def rref(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod ``p`` and its pivot columns.

    Pivots are taken left to right, choosing the first row with a nonzero
    entry, so the result is deterministic.
    """
    a = as_matrix(m, p).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * inv(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, p: int) -> int:
    """Rank by forward elimination only, touching just the rows that need it."""
    a = as_matrix(m, p)
    if a.size == 0:
        return 0
    if a.shape[1] > a.shape[0]:
        a = a.T
    a = a.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r, c:] = (a[r, c:] * inv(a[r, c], p)) % p
        below = r + 1 + np.flatnonzero(a[r + 1:, c])
        if below.size:
            a[below, c:] = (a[below, c:] - np.outer(a[below, c], a[r, c:])) % p
        r += 1
    return r


def kernel(m, p: int) -> np.ndarray:
    """Basis of the right null space, one basis vector per column.

    The basis is the standard one read off the reduced echelon form: each
    free column contributes the vector with a 1 in that slot.
    """
    a = as_matrix(m, p)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return identity(cols)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, fc]) % p
    return basis


def matrix_kernel(m, p: int = DEFAULT_P) -> list[tuple[int, ...]]:
    """Kernel basis as a list of column tuples."""
    k = kernel(m, p)
    return [tuple(int(v) for v in k[:, j]) for j in range(k.shape[1])]


def matrix_rank(m, p: int = DEFAULT_P) -> int:
    return rank(m, p)


def column_space(m, p: int) -> np.ndarray:
    """Columns of ``m`` at the pivot positions (a basis of the image)."""
    a = as_matrix(m, p)
    if a.size == 0:
        return zeros(a.shape[0], 0)
    _, pivots = rref(a, p)
    return a[:, pivots]


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x = b`` (``b`` may be a matrix), else None."""
    a = as_matrix(a, p)
    b = np.array(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    b = np.mod(b, p)
    rows, cols = a.shape
    if rows == 0:
        return zeros(cols, b.shape[1]) if not vec else np.zeros(cols, dtype=np.int64)
    r, pivots = rref(np.hstack([a, b]), p)
    if any(pc >= cols for pc in pivots):
        return None
    x = zeros(cols, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x[:, 0] if vec else x


def inverse(m, p: int) -> np.ndarray:
    a = as_matrix(m, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, pivots = rref(np.hstack([a, identity(n)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return r[:, n:].copy()


def is_invertible(m, p: int) -> bool:
    a = as_matrix(m, p)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
