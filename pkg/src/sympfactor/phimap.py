"""The map Phi_K, its Jacobian, singularity classification and the K=3 lift.

Convention: ``M_k(Z)`` is upper ``[[I,Z],[0,I]]`` for odd k and lower
``[[I,0],[Z,I]]`` for even k, and ``Phi_K(Z_1..Z_K) = M_K(Z_K) ... M_1(Z_1) e_2n``.

Factor words (see :mod:`sympfactor.elemsym`) are written the other way round,
``M_1 M_2 ... M_K`` with odd factors lower.  Since an upper factor is the
transpose of the lower factor with the same Z, the last row of such a word is the
transpose of ``Phi_K`` evaluated on the same tuple; :func:`last_row_of_word`
implements that bridge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exact as ex
from .config import TOL_RANK, TOL_ZERO
from .elemsym import LOWER, UPPER, ElementaryFactor, FactorWord
from .symcore import SymmetricParam, f_matrix, symmetric_solve


class ZeroTarget(ValueError):
    """The target (a, b) is the zero vector."""


class ClassificationMismatch(AssertionError):
    """Closed-form singularity test disagrees with the Jacobian rank."""


def side_of(k: int) -> str:
    """Side of M_k in the Phi convention (1-based k)."""
    return UPPER if k % 2 else LOWER


@dataclass(frozen=True)
class PhiPoint:
    n: int
    K: int
    Zs: tuple

    def __post_init__(self):
        object.__setattr__(self, "Zs", tuple(self.Zs))
        if len(self.Zs) != self.K:
            raise ValueError(f"expected {self.K} matrices, got {len(self.Zs)}")
        if any(Z.n != self.n for Z in self.Zs):
            raise ValueError(f"all matrices must be {self.n} x {self.n}")

    @classmethod
    def from_matrices(cls, mats, exact: bool | None = None) -> "PhiPoint":
        Zs = [m if isinstance(m, SymmetricParam) else SymmetricParam.from_matrix(m, exact)
              for m in mats]
        return cls(Zs[0].n, len(Zs), Zs)

    @property
    def exact(self) -> bool:
        return all(Z.exact for Z in self.Zs)

    def packed(self) -> np.ndarray:
        """Concatenated packed coordinates (Z_1 first)."""
        return np.concatenate([Z.packed() for Z in self.Zs])

    def truncate(self, k: int) -> "PhiPoint":
        return PhiPoint(self.n, k, self.Zs[:k])

    def padded(self, K: int) -> "PhiPoint":
        extra = [SymmetricParam.zeros(self.n, self.exact) for _ in range(K - self.K)]
        return PhiPoint(self.n, K, self.Zs + tuple(extra))


@dataclass(frozen=True)
class TargetVector:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.a.shape != self.b.shape or self.a.ndim != 1:
            raise ValueError("a and b must be vectors of equal length")

    @classmethod
    def from_vector(cls, y) -> "TargetVector":
        y = np.asarray(y)
        n = y.shape[0] // 2
        return cls(y[:n], y[n:])

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.a, self.b])

    def is_zero(self, tol: float = TOL_ZERO) -> bool:
        return ex.all_zero(self.vector, tol)


@dataclass(frozen=True)
class ClassificationReport:
    in_WK: bool
    in_SK: bool
    jacobian_rank: int
    wk_matrix_rank: int
    tolerance: float
    consistent: bool = True

    def as_dict(self) -> dict:
        return {
            "in_WK": self.in_WK,
            "in_SK": self.in_SK,
            "jacobian_rank": self.jacobian_rank,
            "wk_matrix_rank": self.wk_matrix_rank,
            "tolerance": self.tolerance,
            "consistent": self.consistent,
        }


def _e(n: int, k: int, exact: bool) -> np.ndarray:
    v = ex.zeros(n, exact)
    v[k] = 1
    return v


def apply_m(k: int, Z: SymmetricParam, y: np.ndarray) -> np.ndarray:
    """M_k(Z) @ y."""
    n = Z.n
    out = y.copy()
    if k % 2:
        out[:n] = y[:n] + Z.matrix @ y[n:]
    else:
        out[n:] = y[n:] + Z.matrix @ y[:n]
    return out


def m_matrix(k: int, Z: SymmetricParam) -> np.ndarray:
    return ElementaryFactor(side_of(k), Z).matrix()


def phi_trajectory(p: PhiPoint) -> list:
    """[Phi_0, Phi_1, ..., Phi_K] with Phi_0 = e_2n."""
    y = _e(2 * p.n, 2 * p.n - 1, p.exact)
    if not p.exact:
        y = ex.float_array(y)
    out = [y]
    for k, Z in enumerate(p.Zs, start=1):
        y = apply_m(k, Z, y)
        out.append(y)
    return out


def phi_eval(p: PhiPoint) -> np.ndarray:
    return phi_trajectory(p)[-1]


def last_row_of_word(w: FactorWord) -> np.ndarray:
    """Last row of ``reconstruct(w)`` via the transposition bridge.

    Row ``e^T M_1 ... M_K`` equals ``(M_K^T ... M_1^T e)^T`` and ``M^T`` is the
    same-Z factor on the other side, so each factor is applied in word order.
    """
    exact = w.exact if len(w) else True
    y = _e(2 * w.n, 2 * w.n - 1, exact)
    n = w.n
    for f in w:
        y = y.copy()
        if f.side == LOWER:      # transpose is upper
            y[:n] = y[:n] + f.Z.matrix @ y[n:]
        else:
            y[n:] = y[n:] + f.Z.matrix @ y[:n]
    return y


def a_block(k: int, y: np.ndarray) -> np.ndarray:
    """A_k(u, v): [F(v); 0] for odd k, [0; F(u)] for even k."""
    n = y.shape[0] // 2
    u, v = y[:n], y[n:]
    exact = ex.is_exact(y)
    top = f_matrix(v) if k % 2 else ex.zeros((n, n * (n + 1) // 2), exact)
    bot = ex.zeros((n, n * (n + 1) // 2), exact) if k % 2 else f_matrix(u)
    return np.vstack([top, bot])


def phi_jacobian(p: PhiPoint) -> np.ndarray:
    """J Phi_K = [M_K J Phi_{K-1} | A_K(Phi_{K-1})], columns ordered Z_1 first."""
    traj = phi_trajectory(p)
    jac = ex.zeros((2 * p.n, 0), p.exact)
    for k, Z in enumerate(p.Zs, start=1):
        left = m_matrix(k, Z) @ jac if jac.shape[1] else jac
        jac = np.hstack([left, a_block(k, traj[k - 1])])
    return jac


def in_wk(p: PhiPoint, tol_zero: float = TOL_ZERO) -> bool:
    """Z_{2i-1} e_n != 0 for some 1 <= i <= ceil((K-1)/2)."""
    upto = -(-(p.K - 1) // 2)
    for i in range(1, upto + 1):
        Z = p.Zs[2 * i - 2]
        col = Z.matrix[:, -1]
        scale = max(1.0, ex.max_abs(Z.matrix))
        if not ex.all_zero(col, tol_zero * scale):
            return True
    return False


def wk_matrix(p: PhiPoint) -> np.ndarray:
    """W_K = (Z_2 | Z_4 | ... | Z_2k), k = floor((K-1)/2); n x 0 when k = 0."""
    k = (p.K - 1) // 2
    mats = [p.Zs[2 * i - 1].matrix for i in range(1, k + 1)]
    if not mats:
        return ex.zeros((p.n, 0), p.exact)
    return np.hstack(mats)


def classify(p: PhiPoint, tol_rank: float = TOL_RANK, tol_zero: float = TOL_ZERO,
             strict: bool = True) -> ClassificationReport:
    """Membership in W_K and S_K, cross-checked against the Jacobian rank.

    With ``strict`` a disagreement raises :class:`ClassificationMismatch`;
    otherwise it is recorded in ``consistent``.
    """
    if p.K < 2:
        raise ValueError("classify needs K >= 2")
    jr = ex.rank(phi_jacobian(p), tol_rank)
    w = in_wk(p, tol_zero)
    if w:
        wr, s = -1, False
    else:
        W = wk_matrix(p)
        wr = ex.rank(W, tol_rank) if W.shape[1] else 0
        s = wr < p.n
    consistent = s == (jr < 2 * p.n)
    if strict and not consistent:
        raise ClassificationMismatch(
            f"closed form says in_SK={s} but Jacobian rank is {jr} (2n={2 * p.n})")
    return ClassificationReport(w, s, jr, wr, tol_rank, consistent)


def project_pi(K: int, y: TargetVector) -> np.ndarray:
    """u for even K, v for odd K."""
    return y.b if K % 2 else y.a


def stratum_of(K: int, y: TargetVector, tol_zero: float = TOL_ZERO) -> str:
    if y.is_zero(tol_zero):
        raise ZeroTarget("stratum_of needs y != 0")
    return "non_generic" if ex.all_zero(project_pi(K, y), tol_zero) else "generic"


def lift_k3(y: TargetVector, tol_zero: float = TOL_ZERO) -> PhiPoint:
    """A point of W_3 with Phi_3 = (a, b), chosen so that a - Z_3 b = (1, ..., 1)."""
    if y.is_zero(tol_zero):
        raise ZeroTarget("cannot lift the zero vector")
    a, b = y.a, y.b
    exact = ex.is_exact(a) and ex.is_exact(b)
    if exact:
        a, b = ex.exact_array(a), ex.exact_array(b)
    else:
        a, b = ex.float_array(a), ex.float_array(b)
    n = y.n
    ones = ex.like(a, [1] * n)
    en = _e(n, n - 1, exact)
    if not exact:
        en = ex.float_array(en)
    if ex.all_zero(b, tol_zero):
        Z3 = SymmetricParam.zeros(n, exact)
    else:
        Z3 = symmetric_solve(b, a - ones, tol_zero)
    v = a - Z3.matrix @ b
    Z1 = symmetric_solve(en, v, tol_zero)
    Z2 = symmetric_solve(v, b - en, tol_zero)
    return PhiPoint(n, 3, (Z1, Z2, Z3))


def lift_pad(y: TargetVector, K: int, tol_zero: float = TOL_ZERO) -> PhiPoint:
    """lift_k3 followed by K - 3 zero matrices."""
    if K < 3:
        raise ValueError("lift_pad needs K >= 3")
    return lift_k3(y, tol_zero).padded(K)


def random_point(rng: np.random.Generator, n: int, K: int, scale: float = 1.0) -> PhiPoint:
    from .elemsym import random_symmetric
    return PhiPoint(n, K, [random_symmetric(rng, n, scale) for _ in range(K)])


def crafted_wkc_point(rng: np.random.Generator, n: int, K: int, rank: int | None = None,
                      lo: int = -3, hi: int = 3) -> PhiPoint:
    """Integer point outside W_K whose W_K has the requested rank (at most).

    Odd slots before K get a zero last column; even slots are ``V D V^T`` with
    ``V`` of ``rank`` columns.  Integer entries keep the Jacobian exactly
    representable, so rank deficiency is not blurred by rounding.
    """
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    V = rng.integers(lo, hi + 1, size=(n, rank))
    Zs = []
    for k in range(1, K + 1):
        if k % 2 and k < K:
            m = rng.integers(lo, hi + 1, size=(n, n))
            m = m + m.T
            m[:, -1] = 0
            m[-1, :] = 0
        elif k % 2 == 0:
            D = rng.integers(lo, hi + 1, size=(rank, rank))
            m = V @ (D + D.T) @ V.T
        else:
            m = rng.integers(lo, hi + 1, size=(n, n))
            m = m + m.T
        Zs.append(SymmetricParam.from_matrix(np.asarray(m, dtype=int), exact=True))
    return PhiPoint(n, K, Zs)
