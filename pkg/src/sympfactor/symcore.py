"""Symmetric matrices as packed vectors, the F-calculus and symmetric solves.

Packed coordinates follow the basis ``Et_ij = (E_ij + E_ji) / (1 + delta_ij)``,
which is ``E_ii`` on the diagonal and ``E_ij + E_ji`` off it.  The packed
coordinate ``z_ij`` is therefore exactly the matrix entry ``Z[i, j]``.

Indices in the public helpers that mirror matrix notation (``elementary_symmetric``,
``PackedIndex.index``) are 1-based; array positions are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import exact as ex
from .config import TOL_ZERO


class ZeroVector(ValueError):
    """Raised when a solve needs ``a != 0`` but got the zero vector."""


@dataclass(frozen=True)
class PackedIndex:
    """Row-major upper-triangle order (1,1),(1,2),...,(1,n),(2,2),...,(n,n)."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def size(self) -> int:
        return self.n * (self.n + 1) // 2

    @property
    def pairs(self) -> tuple:
        return _pairs(self.n)

    def pair(self, idx: int) -> tuple:
        """1-based packed index -> 1-based (i, j) with i <= j."""
        if not 1 <= idx <= self.size:
            raise IndexError(f"packed index {idx} out of range 1..{self.size}")
        return self.pairs[idx - 1]

    def index(self, i: int, j: int) -> int:
        """1-based (i, j) in either order -> 1-based packed index."""
        if i > j:
            i, j = j, i
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"pair ({i}, {j}) out of range for n={self.n}")
        # rows 1..i-1 contribute n, n-1, ..., n-i+2 entries
        return (i - 1) * self.n - (i - 1) * (i - 2) // 2 + (j - i) + 1


@lru_cache(maxsize=None)
def _pairs(n: int) -> tuple:
    return tuple((i, j) for i in range(1, n + 1) for j in range(i, n + 1))


def n_from_packed(m: int) -> int:
    n = int(round((np.sqrt(8 * m + 1) - 1) / 2))
    if n * (n + 1) // 2 != m:
        raise ValueError(f"{m} is not a triangular number")
    return n


class SymmetricParam:
    """An n x n complex symmetric matrix; symmetric by construction.

    Build from a full matrix with :meth:`from_matrix` (symmetry checked exactly)
    or from packed coordinates with :meth:`from_packed`.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix: np.ndarray):
        self._m = matrix
        self._m.setflags(write=False)

    @classmethod
    def from_matrix(cls, matrix, exact: bool | None = None) -> "SymmetricParam":
        m = _coerce(matrix, exact)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if ex.is_exact(m):
            bad = any(m[i, j] != m[j, i] for i in range(m.shape[0]) for j in range(i))
        else:
            bad = not np.array_equal(m, m.T)
        if bad:
            raise ValueError("matrix is not symmetric")
        return cls(m.copy())

    @classmethod
    def from_packed(cls, values, exact: bool | None = None) -> "SymmetricParam":
        return cls(unpack(_coerce(values, exact)))

    @classmethod
    def zeros(cls, n: int, exact: bool = False) -> "SymmetricParam":
        return cls(ex.zeros((n, n), exact))

    @property
    def n(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def exact(self) -> bool:
        return ex.is_exact(self._m)

    def packed(self) -> np.ndarray:
        return pack(self._m)

    def __add__(self, other: "SymmetricParam") -> "SymmetricParam":
        return SymmetricParam(self._m + other._m)

    def __neg__(self) -> "SymmetricParam":
        return SymmetricParam(-self._m)

    def scaled(self, a) -> "SymmetricParam":
        return SymmetricParam(self._m * a)

    def embed(self, n_big: int) -> "SymmetricParam":
        """Z (+) 0: pad with zero rows/columns at the end."""
        out = ex.zeros((n_big, n_big), self.exact)
        out[: self.n, : self.n] = self._m
        return SymmetricParam(out)

    def is_zero(self, tol: float = 0.0) -> bool:
        return ex.all_zero(self._m, tol)

    def to_float(self) -> "SymmetricParam":
        return SymmetricParam(ex.float_array(self._m))

    def to_exact(self) -> "SymmetricParam":
        return SymmetricParam(ex.exact_array(self._m))

    def __eq__(self, other):
        if not isinstance(other, SymmetricParam) or other.n != self.n:
            return NotImplemented
        return bool(np.all(self._m == other._m))

    def __hash__(self):
        return hash(tuple(complex(v) for v in self._m.flat))

    def __repr__(self):
        return f"SymmetricParam({self._m.tolist()!r})"


def _coerce(values, exact):
    arr = np.asarray(values)
    if exact is None:
        exact = arr.dtype == object or arr.dtype.kind in "iub"
    return ex.exact_array(arr) if exact else ex.float_array(arr)


def pack(Z) -> np.ndarray:
    """Symmetric matrix -> packed vector (entries above and on the diagonal)."""
    m = Z.matrix if isinstance(Z, SymmetricParam) else np.asarray(Z)
    n = m.shape[0]
    return np.array([m[i - 1, j - 1] for i, j in _pairs(n)], dtype=m.dtype)


def unpack(z) -> np.ndarray:
    z = np.asarray(z)
    n = n_from_packed(z.shape[0])
    out = ex.zeros((n, n), ex.is_exact(z))
    for k, (i, j) in enumerate(_pairs(n)):
        out[i - 1, j - 1] = z[k]
        out[j - 1, i - 1] = z[k]
    return out


def elementary_symmetric(i: int, j: int, n: int, exact: bool = True) -> SymmetricParam:
    """The basis matrix Et_ij (1-based, i <= j)."""
    if not 1 <= i <= j <= n:
        raise IndexError(f"need 1 <= i <= j <= n, got ({i}, {j}, {n})")
    m = ex.zeros((n, n), exact)
    m[i - 1, j - 1] = 1
    m[j - 1, i - 1] = 1
    return SymmetricParam(m)


def f_matrix(v) -> np.ndarray:
    """F(v) = [Et_a(1) v | ... | Et_a(m) v], an n x n(n+1)/2 matrix.

    Satisfies ``f_matrix(v) @ pack(Z) == Z @ v`` for every symmetric Z.
    """
    v = np.asarray(v)
    n = v.shape[0]
    pairs = _pairs(n)
    out = ex.zeros((n, len(pairs)), ex.is_exact(v))
    for col, (i, j) in enumerate(pairs):
        out[i - 1, col] = v[j - 1]
        if i != j:
            out[j - 1, col] = v[i - 1]
    return out


def symmetric_solve(a, v, tol_zero: float = TOL_ZERO) -> SymmetricParam:
    """A symmetric Z with ``Z @ a == v``, for ``a != 0``.

    Solves the underdetermined system ``F(a) z = v`` by Gaussian elimination with
    complete pivoting on |entry|; free packed coordinates are set to zero.  Works
    for isotropic complex ``a`` (``a^T a = 0``) where projector formulas break.
    """
    a = np.asarray(a)
    v = np.asarray(v)
    exact = ex.is_exact(a) or ex.is_exact(v)
    if exact:
        a, v = ex.exact_array(a), ex.exact_array(v)
    else:
        a, v = ex.float_array(a), ex.float_array(v)
    if a.shape != v.shape or a.ndim != 1:
        raise ValueError("a and v must be vectors of equal length")
    if ex.all_zero(a, tol_zero):
        raise ZeroVector("symmetric_solve needs a != 0")
    n = a.shape[0]
    F = f_matrix(a)
    z = _solve_underdetermined(F, v, exact)
    return SymmetricParam(unpack(z))


def _solve_underdetermined(F, rhs, exact):
    # F is n x m with full row rank; complete pivoting keeps float growth small
    rows, cols = F.shape
    A = F.copy()
    b = rhs.copy()
    col_perm = list(range(cols))
    for r in range(rows):
        best, bi, bj = None, r, r
        for i in range(r, rows):
            for j in range(r, cols):
                m = ex.mag2(A[i, j])
                if best is None or m > best:
                    best, bi, bj = m, i, j
        if best == 0:
            raise ZeroVector("coefficient matrix is rank deficient")
        if bi != r:
            A[[r, bi]] = A[[bi, r]]
            b[[r, bi]] = b[[bi, r]]
        if bj != r:
            A[:, [r, bj]] = A[:, [bj, r]]
            col_perm[r], col_perm[bj] = col_perm[bj], col_perm[r]
        piv = A[r, r]
        for i in range(r + 1, rows):
            f = A[i, r] / piv
            if f != 0:
                A[i, r:] = A[i, r:] - f * A[r, r:]
                b[i] = b[i] - f * b[r]
    y = ex.zeros(cols, exact)
    for r in range(rows - 1, -1, -1):
        s = b[r]
        for j in range(r + 1, rows):
            s = s - A[r, j] * y[j]
        y[r] = s / A[r, r]
    z = ex.zeros(cols, exact)
    for k, p in enumerate(col_perm):
        z[p] = y[k]
    return z
