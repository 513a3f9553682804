"""Elementary symplectic matrices, the classical generators and Whitehead words.

A :class:`FactorWord` is read left to right as a matrix product
``M_1 @ M_2 @ ... @ M_K``.  Generators ``E_ij(a)`` / ``F_ij(a)`` put ``a`` at
positions (i, j) and (j, i) of the upper / lower block, which off the diagonal
coincides with ``a * Et_ij`` in the packed basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact as ex
from .config import TOL_SYMP
from .symcore import SymmetricParam

UPPER = "upper"
LOWER = "lower"
SIDES = (UPPER, LOWER)


class NotSymplectic(ValueError):
    """Matrix fails ``M^T J M = J`` at the requested tolerance."""

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report or {}


class NonUnit(ValueError):
    """Diagonal K-generator requested with a = 0."""


def flip(side: str) -> str:
    return LOWER if side == UPPER else UPPER


@dataclass(frozen=True)
class ElementaryFactor:
    side: str
    Z: SymmetricParam

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be 'upper' or 'lower', got {self.side!r}")

    @property
    def n(self) -> int:
        return self.Z.n

    def inverse(self) -> "ElementaryFactor":
        return ElementaryFactor(self.side, -self.Z)

    def transpose(self) -> "ElementaryFactor":
        return ElementaryFactor(flip(self.side), self.Z)

    def matrix(self) -> np.ndarray:
        n, Z = self.n, self.Z.matrix
        M = ex.eye(2 * n, ex.is_exact(Z))
        if self.side == UPPER:
            M[:n, n:] = Z
        else:
            M[n:, :n] = Z
        return M


@dataclass(frozen=True)
class FactorWord:
    n: int
    factors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if f.n != self.n:
                raise ValueError(f"factor of size {f.n} in a word for n={self.n}")

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __add__(self, other: "FactorWord") -> "FactorWord":
        if other.n != self.n:
            raise ValueError("cannot concatenate words of different n")
        return FactorWord(self.n, self.factors + other.factors)

    def inverse(self) -> "FactorWord":
        return FactorWord(self.n, tuple(f.inverse() for f in reversed(self.factors)))

    @property
    def exact(self) -> bool:
        return all(f.Z.exact for f in self.factors)

    def to_float(self) -> "FactorWord":
        return FactorWord(self.n, [ElementaryFactor(f.side, f.Z.to_float()) for f in self])


@dataclass(frozen=True)
class SymplecticMatrix:
    n: int
    M: np.ndarray
    residual: float = 0.0

    @property
    def blocks(self):
        return blocks(self.M)

    @property
    def exact(self) -> bool:
        return ex.is_exact(self.M)


def J(n: int, exact: bool = False) -> np.ndarray:
    out = ex.zeros((2 * n, 2 * n), exact)
    for i in range(n):
        out[i, n + i] = 1
        out[n + i, i] = -1
    return out


def blocks(M):
    n = M.shape[0] // 2
    return M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:]


def materialize(f: ElementaryFactor) -> SymplecticMatrix:
    return SymplecticMatrix(f.n, f.matrix())


def _entry_param(i, j, a, n):
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices ({i}, {j}) out of range for n={n}")
    exact = ex.is_exact_scalar(a)
    a = ex.to_exact(a) if exact else complex(a)
    m = ex.zeros((n, n), exact)
    m[i - 1, j - 1] = a
    m[j - 1, i - 1] = a
    return SymmetricParam(m)


def generator_E(i: int, j: int, a, n: int) -> ElementaryFactor:
    """E_ij(a): upper factor with ``a`` at (i, j) and (j, i)."""
    return ElementaryFactor(UPPER, _entry_param(i, j, a, n))


def generator_F(i: int, j: int, a, n: int) -> ElementaryFactor:
    """F_ij(a): lower factor with ``a`` at (i, j) and (j, i)."""
    return ElementaryFactor(LOWER, _entry_param(i, j, a, n))


def k_matrix(i: int, j: int, a, n: int) -> SymplecticMatrix:
    """K_ij(a) = diag(A, A^{-T}) with A = I except A[i, j] = a."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices ({i}, {j}) out of range for n={n}")
    exact = ex.is_exact_scalar(a)
    a = ex.to_exact(a) if exact else complex(a)
    M = ex.eye(2 * n, exact)
    i0, j0 = i - 1, j - 1
    if i == j:
        if ex.is_zero(a):
            raise NonUnit("K_ii(a) needs a != 0")
        M[i0, i0] = a
        M[n + i0, n + i0] = 1 / a if exact else 1.0 / complex(a)
    else:
        M[i0, j0] = a
        M[n + j0, n + i0] = -a
    return SymplecticMatrix(n, M)


def whitehead_diagonal(i: int, a, n: int) -> FactorWord:
    """K_ii(a) = E_ii(a-1) F_ii(1) E_ii(1/a - 1) F_ii(-a)."""
    if ex.is_zero(a):
        raise NonUnit("whitehead_diagonal needs a != 0")
    a = ex.to_exact(a) if ex.is_exact_scalar(a) else complex(a)
    inv = 1 / a
    return FactorWord(n, [
        generator_E(i, i, a - 1, n),
        generator_F(i, i, _one_like(a), n),
        generator_E(i, i, inv - 1, n),
        generator_F(i, i, -a, n),
    ])


def whitehead_offdiag(i: int, j: int, a, n: int) -> FactorWord:
    """K_ij(a) = F_jj(-a) E_ij(1) F_jj(a) E_ii(a) E_ij(-1), for i != j."""
    if i == j:
        raise IndexError("whitehead_offdiag needs i != j")
    one = _one_like(a)
    return FactorWord(n, [
        generator_F(j, j, -a, n),
        generator_E(i, j, one, n),
        generator_F(j, j, a, n),
        generator_E(i, i, a, n),
        generator_E(i, j, -one, n),
    ])


def _one_like(a):
    return Fraction(1) if ex.is_exact_scalar(a) else 1.0 + 0j


def compact(w: FactorWord) -> FactorWord:
    """Merge adjacent same-side factors and drop zero ones; the product is unchanged."""
    out = []
    for f in w:
        if out and out[-1].side == f.side:
            out[-1] = ElementaryFactor(f.side, out[-1].Z + f.Z)
        else:
            out.append(f)
        if out[-1].Z.is_zero():
            out.pop()
    return FactorWord(w.n, out)


def reconstruct(w: FactorWord, exact: bool | None = None) -> SymplecticMatrix:
    """Left-to-right product of the materialized factors."""
    if exact is None:
        exact = w.exact if len(w) else True
    M = ex.eye(2 * w.n, exact)
    for f in w:
        M = _apply_right(M, f)
    return SymplecticMatrix(w.n, M)


def _apply_right(M, f: ElementaryFactor):
    # M @ [[I,Z],[0,I]] adds M_left @ Z to the right half, and analogously for lower
    n = f.n
    out = M.copy()
    Z = f.Z.matrix
    if f.side == UPPER:
        out[:, n:] = M[:, n:] + M[:, :n] @ Z
    else:
        out[:, :n] = M[:, :n] + M[:, n:] @ Z
    return out


def symplectic_residuals(M) -> dict:
    """Max-entry residuals of M^T J M = J and the three block conditions."""
    M = np.asarray(M)
    n = M.shape[0] // 2
    exact = ex.is_exact(M)
    A, B, C, D = blocks(M)
    I = ex.eye(n, exact)
    return {
        "residual": ex.max_abs(M.T @ J(n, exact) @ M - J(n, exact)),
        "AtC": ex.max_abs(A.T @ C - C.T @ A),
        "BtD": ex.max_abs(B.T @ D - D.T @ B),
        "AtD_CtB": ex.max_abs(A.T @ D - C.T @ B - I),
    }


def validate(M, tol_symp: float = TOL_SYMP) -> SymplecticMatrix:
    """Check M^T J M = J.

    Float input passes when the max-entry residual is at most
    ``tol_symp * max(1, ||M||_max)^2``; exact input must satisfy it exactly.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise NotSymplectic(f"expected a square matrix of even size, got shape {M.shape}")
    if not ex.is_exact(M):
        M = ex.float_array(M)
    rep = symplectic_residuals(M)
    scale = max(1.0, ex.max_abs(M)) ** 2
    rep["scale"] = scale
    ok = rep["residual"] == 0 if ex.is_exact(M) else rep["residual"] <= tol_symp * scale
    if not ok:
        raise NotSymplectic(f"M^T J M - J has max entry {rep['residual']:.3e}", rep)
    return SymplecticMatrix(M.shape[0] // 2, M, rep["residual"])


def random_word(rng: np.random.Generator, n: int, length: int, scale: float = 1.0,
                start: str | None = None) -> FactorWord:
    """Alternating word with complex symmetric entries drawn in the disk of radius ``scale``."""
    side = start or rng.choice(SIDES)
    factors = []
    for _ in range(length):
        factors.append(ElementaryFactor(side, random_symmetric(rng, n, scale)))
        side = flip(side)
    return FactorWord(n, factors)


def random_symmetric(rng: np.random.Generator, n: int, scale: float = 1.0) -> SymmetricParam:
    r = scale * np.sqrt(rng.uniform(size=(n, n)))
    theta = rng.uniform(0, 2 * np.pi, size=(n, n))
    m = np.triu(r * np.exp(1j * theta))
    m = m + np.triu(m, 1).T
    return SymmetricParam(m.astype(complex))
