"""Factorization of Sp_2n(C) matrices into elementary symplectic factors.

The recursion peels one dimension at a time.  For ``n >= 2`` the last row of
``M`` is lifted through Phi_3 to three symmetric matrices ``G``; the word
``Psi(G) = lower(G1) upper(G2) lower(G3)`` then has the same last row as ``M``, so
``N = Psi(G) M^{-1}`` has last row ``e_2n``.  Its inner blocks form a matrix
``ft`` in Sp_{2n-2}, and

    M = psi(ft^{-1}) E(B) K_{n,n-1}(-y_{n-1}) ... K_{n,1}(-y_1) Psi(G),

with ``B = [[0, -b2], [-b2^T, -b4 - d2^T b2]]``, ``y = -d2`` and each K expanded
by Whitehead's lemma into five factors.  ``N psi(ft^{-1}) E(B)`` is the product
of the K's; the upper factor carries ``+B`` because it must cancel the
``[[0, b2], [b2^T, b4]]`` block.
The factor count obeys T(1) = 4, T(n) = T(n-1) + 5n - 1.

The construction is badly conditioned: the correction factor carries
``b4 + d2^T b2`` of size ~||N||^2 and every level feeds ||N|| into the next, so
factors reach ||M||^(2^(n-1)) and more.  Float input is therefore lifted to
multiprecision (gmpy2), rounded to a matrix that is symplectic to working
precision, and factored there; the returned word keeps those multiprecision
entries.  ``precision=53`` runs the plain complex128 recursion instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import math

import numpy as np

from . import exact as ex
from .config import TOL_FACTOR, TOL_PIVOT, TOL_SYMP
from .elemsym import (
    LOWER, UPPER, ElementaryFactor, FactorWord, SymplecticMatrix, NotSymplectic,
    compact, generator_E, generator_F, reconstruct, validate, whitehead_offdiag, J,
)
from .phimap import TargetVector, ZeroTarget, lift_k3
from .symcore import SymmetricParam


class NotUnimodular(ValueError):
    """2 x 2 input with det != 1."""


class LiftFailed(RuntimeError):
    """The last-row lift did not reproduce the last row."""


class BlockAssertFailed(RuntimeError):
    """An entry forced by symplecticity is not where it should be."""


class ResidualTooLarge(RuntimeError):
    """Reconstruction residual exceeds tol_factor."""

    def __init__(self, msg, result=None):
        super().__init__(msg)
        self.result = result


@dataclass(frozen=True)
class FactorizationResult:
    word: FactorWord
    reconstruction_residual: float
    factor_count: int
    bound: int
    precision: int | None = None   # working bits of a multiprecision word; None when exact


@dataclass(frozen=True)
class PeelReport:
    G: tuple
    residual_N: np.ndarray
    ftilde: np.ndarray
    b2: np.ndarray
    b4: object
    d2: np.ndarray
    B: SymmetricParam
    last_row_error: float
    forced_error: float


@lru_cache(maxsize=None)
def factor_bound(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return 4 if n == 1 else factor_bound(n - 1) + 5 * n - 1


def sp_inverse(M: np.ndarray) -> np.ndarray:
    """M^{-1} = -J M^T J for symplectic M."""
    n = M.shape[0] // 2
    Jn = J(n, ex.is_exact(M))
    return -(Jn @ M.T @ Jn)


def psi_word(G) -> FactorWord:
    """lower(G1) upper(G2) lower(G3); its last row is Phi_3(G)^T."""
    sides = (LOWER, UPPER, LOWER)
    return FactorWord(G[0].n, [ElementaryFactor(s, Z) for s, Z in zip(sides, G)])


def embed_matrix(M: np.ndarray) -> np.ndarray:
    """psi: Sp_{2n-2} -> Sp_2n, inserting identity rows/columns at positions n and 2n."""
    m = M.shape[0] // 2
    n = m + 1
    out = ex.eye(2 * n, ex.is_exact(M))
    idx = list(range(m)) + list(range(n, n + m))
    out[np.ix_(idx, idx)] = M
    return out


def embed_psi(w: FactorWord) -> FactorWord:
    """Each factor's Z becomes Z (+) 0."""
    return FactorWord(w.n + 1, [ElementaryFactor(f.side, f.Z.embed(w.n + 1)) for f in w])


def _sl2_scalar(x, exact):
    return ex.to_exact(x) if exact else complex(x)


def factor_sl2(M, tol_pivot: float = TOL_PIVOT, tol: float = TOL_SYMP,
               strict: bool | None = None) -> FactorWord:
    """Word of at most four factors for a 2 x 2 matrix with det 1.

    ``M = E(u) F(c) E(v)`` with ``u = (a-1)/c``, ``v = (d-1)/c`` when c is not
    negligible; otherwise ``M = F(-1) (F(1) M)`` and the bracket has lower-left
    entry ``a + c != 0``.
    """
    M = np.asarray(M)
    exact = ex.is_exact(M)
    strict = exact if strict is None else strict
    a, b, c, d = (_sl2_scalar(x, exact) for x in M.flat)
    det = a * d - b * c
    if strict and det != 1 or not strict and abs(complex(det) - 1) > tol * max(1.0, ex.max_abs(M)) ** 2:
        raise NotUnimodular(f"det = {det}, expected 1")
    one = ex.to_exact(1) if exact else 1.0 + 0j
    if all(ex.is_zero(x - y) for x, y in ((a, one), (b, 0), (c, 0), (d, one))):
        return FactorWord(1, [])
    scale = max(1.0, ex.max_abs(M))
    if (c != 0) if strict else abs(complex(c)) > tol_pivot * scale:
        u, v = (a - one) / c, (d - one) / c
        return FactorWord(1, [generator_E(1, 1, u, 1), generator_F(1, 1, c, 1),
                              generator_E(1, 1, v, 1)])
    shifted = np.array([[a, b], [a + c, b + d]], dtype=object if exact else complex)
    return FactorWord(1, [generator_F(1, 1, -one, 1)]) + factor_sl2(shifted, tol_pivot, tol, strict)


def peel(M: np.ndarray, tol_factor: float = TOL_FACTOR, strict: bool | None = None) -> PeelReport:
    """One induction step: lift the last row and split off ft in Sp_{2n-2}.

    ``strict`` (default: exact input) demands the forced entries of N exactly;
    otherwise they are checked against ``tol_factor`` relative to ||N||.
    """
    M = np.asarray(M)
    n = M.shape[0] // 2
    if n < 2:
        raise ValueError("peel needs n >= 2")
    exact = ex.is_exact(M)
    strict = exact if strict is None else strict
    row = M[-1, :]
    try:
        G = lift_k3(TargetVector(row[:n].copy(), row[n:].copy())).Zs
    except ZeroTarget as e:
        raise LiftFailed(str(e)) from e
    Psi = reconstruct(psi_word(G), exact=exact).M
    scale = max(1.0, ex.max_abs(M))
    lift_err = ex.max_abs(Psi[-1, :] - row)
    if lift_err > tol_factor * scale if not strict else lift_err != 0:
        raise LiftFailed(f"lifted last row is off by {lift_err:.3e}")

    N = Psi @ sp_inverse(M)
    m = n - 1
    lo, hi = list(range(m)), list(range(n, n + m))
    inner = lo + hi
    e_last = ex.zeros(2 * n, exact)
    e_last[-1] = 1
    last_err = ex.max_abs(N[-1, :] - e_last)
    # a2 = N[lo, m] and c2 = N[hi, m] vanish, a4 = N[m, m] is one
    forced = max(ex.max_abs(N[lo, m]), ex.max_abs(N[hi, m]), abs(complex(N[m, m]) - 1))
    nscale = max(1.0, ex.max_abs(N))
    if strict:
        if last_err != 0 or forced != 0:
            raise BlockAssertFailed("forced blocks of N are not exact")
    elif max(last_err, forced) > tol_factor * nscale:
        raise BlockAssertFailed(
            f"forced blocks of N off by {max(last_err, forced):.3e} (scale {nscale:.3e})")

    ft = N[np.ix_(inner, inner)]
    b2 = N[lo, 2 * n - 1]
    b4 = N[m, 2 * n - 1]
    d2 = N[hi, 2 * n - 1]
    Bm = ex.zeros((n, n), exact)
    Bm[:m, m] = -b2
    Bm[m, :m] = -b2
    Bm[m, m] = -b4 - d2 @ b2
    return PeelReport(tuple(G), N, ft, b2, b4, d2, SymmetricParam(Bm), last_err, forced)


def _factor_word(M: np.ndarray, tol_pivot: float, tol_factor: float, strict: bool) -> FactorWord:
    n = M.shape[0] // 2
    if n == 1:
        return factor_sl2(M, tol_pivot, strict=strict)
    rep = peel(M, tol_factor, strict)
    inner = embed_psi(_factor_word(sp_inverse(rep.ftilde), tol_pivot, tol_factor, strict))
    exact = ex.is_exact(M)
    corr = FactorWord(n, [ElementaryFactor(UPPER, rep.B)])
    ks = FactorWord(n, [])
    for j in range(n - 1, 0, -1):
        # K_{nj}(-y_j) with y = -d2, so the argument is d2[j]
        a = rep.d2[j - 1]
        ks = ks + whitehead_offdiag(n, j, a if exact else complex(a), n)
    return inner + corr + ks + psi_word(rep.G)


def _is_identity(M: np.ndarray) -> bool:
    return bool(np.all(M == ex.eye(M.shape[0], ex.is_exact(M))))


def _inverse(A: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse with partial pivoting, for object arrays."""
    n = A.shape[0]
    m = np.hstack([A, ex.eye(n, True)])
    for c in range(n):
        p = max(range(c, n), key=lambda i: ex.mag2(m[i, c]))
        if ex.is_zero(m[p, c]):
            raise np.linalg.LinAlgError("singular block")
        if p != c:
            m[[c, p]] = m[[p, c]]
        m[c] = m[c] / m[c, c]
        for i in range(n):
            if i != c:
                m[i] = m[i] - m[i, c] * m[c]
    return m[:, n:]


def _sym(X):
    return (X + X.T) / 2


def symplectic_round(M: np.ndarray) -> np.ndarray:
    """A nearby matrix that is symplectic up to working precision.

    Uses ``M = lower(C A^{-1}) diag(A, A^{-T}) upper(A^{-1} B)``: A is kept, both
    outer parameters are symmetrized and D is rebuilt.  When A is badly
    conditioned, M is first multiplied by an exact ``lower(s I)``, which is
    undone afterwards.
    """
    n = M.shape[0] // 2
    best = None
    for shift in (0, 1, -1, 2, -2, 1j, -1j):
        A = M[:n, :n] + shift * M[:n, n:]
        cond = np.linalg.cond(ex.float_array(A))
        if best is None or cond < best[0]:
            best = (cond, shift)
        if cond < 1e4:
            break
    shift = best[1]
    eye = np.eye(n) * shift
    S = ex.mp_array(eye) if ex.is_mp(M) else ex.exact_array(eye)
    X = M.copy()
    X[:, :n] = M[:, :n] + M[:, n:] @ S
    A, B, C = X[:n, :n], X[:n, n:], X[n:, :n]
    Ai = _inverse(A)
    L = _sym(C @ Ai)
    U = _sym(Ai @ B)
    out = np.empty_like(X)
    out[:n, :n] = A
    out[:n, n:] = A @ U
    out[n:, :n] = L @ A
    out[n:, n:] = L @ A @ U + Ai.T
    out[:, :n] = out[:, :n] - out[:, n:] @ S
    return out


def auto_precision(n: int, M: np.ndarray) -> int:
    """Working bits for the multiprecision recursion, from n and ||M||."""
    growth = 2 ** n * (math.log2(max(2.0, ex.max_abs(M))) + 2)
    return int(96 + 32 * math.ceil(growth / 32))


MAX_PRECISION = 4096


def factorize(M, tol_factor: float = TOL_FACTOR, tol_pivot: float = TOL_PIVOT,
              tol_symp: float = TOL_SYMP, do_compact: bool = False,
              check: bool = True, precision: int | None = None) -> FactorizationResult:
    """Factor a symplectic matrix into at most ``factor_bound(n)`` elementary factors.

    Exact input gives an exact word and a zero residual.  Float input is factored
    in multiprecision (``precision`` bits, chosen automatically when None and
    doubled until the residual is met); ``precision=53`` uses complex128 only.

    The residual is ``||reconstruct(word) - M||_max / max(1, ||M||_max)``.  With
    ``check`` a residual above ``tol_factor`` raises :class:`ResidualTooLarge`.
    """
    sm = M if isinstance(M, SymplecticMatrix) else validate(M, tol_symp)
    A = sm.M
    n = sm.n
    bits = None
    if _is_identity(A):
        word = FactorWord(n, [])
        res = 0.0
    elif ex.is_exact(A):
        word = _factor_word(A, tol_pivot, tol_factor, True)
        res = _residual(word, A)
    elif precision == 53:
        bits = 53
        word = _factor_word(A, tol_pivot, tol_factor, False)
        res = _residual(word, A)
    else:
        bits = precision or auto_precision(n, A)
        while True:
            with ex.precision(bits):
                Am = ex.mp_array(A)
                try:
                    word = _factor_word(symplectic_round(Am), tol_pivot, tol_factor, False)
                    res = _residual(word, Am)
                except (BlockAssertFailed, LiftFailed, NotUnimodular):
                    if precision or bits >= MAX_PRECISION:
                        raise
                    res = math.inf
            if res <= tol_factor or precision or bits >= MAX_PRECISION:
                break
            bits *= 2
    if do_compact:
        word = compact(word)
    out = FactorizationResult(word, res, len(word), factor_bound(n), bits)
    if check and res > tol_factor:
        raise ResidualTooLarge(f"reconstruction residual {res:.3e} > {tol_factor:.1e}", out)
    return out


def _residual(word: FactorWord, A: np.ndarray) -> float:
    R = reconstruct(word, exact=ex.is_exact(A)).M
    return ex.max_abs(R - A) / max(1.0, ex.max_abs(A))


__all__ = [
    "FactorizationResult", "PeelReport", "NotUnimodular", "LiftFailed", "BlockAssertFailed",
    "ResidualTooLarge", "NotSymplectic", "factor_bound", "factor_sl2", "peel", "embed_psi",
    "embed_matrix", "factorize", "sp_inverse", "psi_word", "symplectic_round",
    "auto_precision",
]
