"""Numeric span checks for the explicit field collections, U matrices and complementary bases.

Builtin collections follow the spanning arguments: at K = 2 the fields
``(Pt^1_{j*})^2 d/dz_{1,ij}`` (i <= j < n) and ``gamma^2``; at K = 3 these plus the
lifts ``phi^3`` of the Type-4 tuples and ``gamma^3``; at K >= 4 the collection
for K - 1 plus the lifts ``phi^K`` of the Type-1 tuples and ``gamma^K``.  In each
case j* maximizes ``|Pt^{K-1}_j|`` at the point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import qr

from .. import exact as ex
from ..config import TOL_RANK
from ..elemsym import blocks, validate
from ..phimap import PhiPoint, classify, phi_jacobian
from .fields import (PolyVectorField, lift_gamma_field, lift_phi_field, partial_field, point_values,
                     ptilde, type1, type4)
from .poly import MultiPoly, zvar

SPAN_TOL = 1e-9


class SingularPoint(ValueError):
    """The point lies in S_K, where Phi_K is not a submersion."""


class AssertRegularFailed(AssertionError):
    """The complementary-basis matrix X came out singular."""


@dataclass(frozen=True)
class SpanReport:
    kernel_dim: int
    spanned_dim: int
    dominated: bool
    n_fields: int = 0

    def as_dict(self) -> dict:
        return {"kernel_dim": self.kernel_dim, "spanned_dim": self.spanned_dim,
                "dominated": self.dominated, "n_fields": self.n_fields}


def _unit_columns(vecs):
    cols = [v / np.linalg.norm(v) for v in vecs if np.linalg.norm(v) > 0]
    return np.array(cols).T if cols else np.zeros((0, 0))


def span_check(n: int, K: int, p: PhiPoint, fields: list, tol_rank: float = TOL_RANK,
               span_tol: float = SPAN_TOL) -> SpanReport:
    """Dimension of span{V(p)} inside ker dPhi_K(p), compared with the kernel dimension.

    Field vectors are normalized and projected on an orthonormal kernel basis;
    singular values below ``span_tol`` (relative) count as zero.
    """
    if p.n != n or p.K != K:
        raise ValueError("point does not match (n, K)")
    rep = classify(p, tol_rank=tol_rank, strict=False)
    if rep.in_SK:
        raise SingularPoint("span_check needs a point outside S_K")
    Jm = ex.float_array(phi_jacobian(p))
    N = Jm.shape[1]
    _, s, vh = np.linalg.svd(Jm)
    r = int(np.sum(s > s[0] * max(Jm.shape) * tol_rank))
    kernel = vh[r:].conj().T
    kdim = N - r
    vals = point_values(p)
    vecs = [V.lifted(K).vector_at(vals, K) for V in fields]
    cols = _unit_columns(vecs)
    if cols.size == 0 or kdim == 0:
        spanned = 0
    else:
        coords = kernel.conj().T @ cols
        sv = np.linalg.svd(coords, compute_uv=False)
        spanned = int(np.sum(sv > span_tol * max(1.0, sv[0])))
    return SpanReport(kdim, spanned, spanned == kdim, len(fields))


def _jstar(n: int, L: int, vals: dict) -> int:
    return int(np.argmax([abs(q.eval(vals)) for q in ptilde(n, L - 1)])) + 1


@lru_cache(maxsize=None)
def _a2(n: int, jstar: int) -> tuple:
    scale = ptilde(n, 1)[jstar - 1] ** 2
    out = [PolyVectorField(n, 2, {zvar(1, i, j): scale})
           for i in range(1, n) for j in range(i, n)]
    out += [lift_gamma_field(i, j, jstar, 2, n) for i in range(1, n + 1) for j in range(i, n + 1)
            if jstar not in (i, j)]
    return tuple(out)


@lru_cache(maxsize=None)
def _level(n: int, K: int, jstar: int) -> tuple:
    gam = [lift_gamma_field(i, j, jstar, K, n) for i in range(1, n + 1) for j in range(i, n + 1)
           if jstar not in (i, j)]
    if K == 3:
        phis = [lift_phi_field(type4(n, m), jstar, 3) for m in range(1, n + 1)]
    else:
        phis = [lift_phi_field(type1(n, K - 1, m), jstar, K) for m in range(1, n + 1)]
    return tuple(phis + gam)


def builtin_collection(n: int, K: int, p: PhiPoint) -> list:
    """The explicit collection for Phi_K at p (j* chosen per level at p)."""
    vals = point_values(p)
    out = list(_a2(n, _jstar(n, 2, vals)))
    for L in range(3, K + 1):
        out += list(_level(n, L, _jstar(n, L, vals)))
    return out


def nonvanishing_ok(n: int, K: int, p: PhiPoint, tol: float = 1e-6) -> bool:
    """Nonvanishing conditions for the builtin collection to span: Q_f^1 != 0 (K = 3) or Q_f^{K-2} Q_s^{K-2} != 0."""
    vals = point_values(p)
    if K <= 2:
        return any(abs(q.eval(vals)) > tol for q in ptilde(n, 1))
    if K == 3:
        return all(abs(q.eval(vals)) > tol for q in ptilde(n, 1))
    return all(abs(q.eval(vals)) > tol for q in ptilde(n, K - 2) + ptilde(n, K - 3))


# -- U matrices --------------------------------------------------------------------

def u_matrix(n: int, K: int) -> list:
    """u_{ij} = d_{x_i}^{K-1}(Pt^{K-2}_j) for the Type-4 (K = 3) or Type-1 (K >= 4) tuples."""
    if K < 3:
        raise ValueError("U matrices need K >= 3")
    tuples = [type4(n, m) for m in range(1, n + 1)] if K == 3 else \
        [type1(n, K - 1, m) for m in range(1, n + 1)]
    P = ptilde(n, K - 2)
    U = []
    for x in tuples:
        V = partial_field(x, K - 1)
        U.append([V.apply(q) for q in P])
    return U


def u_closed_form(n: int, K: int) -> list:
    """Q_f^1 I for K = 3; diag(Pt^{K-3}_i * prod_j Pt^{K-2}_j) for K >= 4."""
    Q = MultiPoly.one()
    for q in ptilde(n, K - 2):
        Q = Q * q
    if K == 3:
        diag = [Q] * n
    else:
        diag = [q * Q for q in ptilde(n, K - 3)]
    return [[diag[i] if i == j else MultiPoly.zero() for j in range(n)] for i in range(n)]


def u_matrix_check(n: int, K: int) -> bool:
    """Exact equality of the U matrix with its diagonal closed form."""
    U, C = u_matrix(n, K), u_closed_form(n, K)
    return all(U[i][j] == C[i][j] for i in range(n) for j in range(n))


# -- complementary bases -------------------------------------------------------------

@dataclass(frozen=True)
class ComplementaryBasis:
    i_idx: tuple
    j_idx: tuple
    det: complex
    scale: float

    def as_dict(self) -> dict:
        return {"i": list(self.i_idx), "j": list(self.j_idx),
                "det": [self.det.real, self.det.imag], "scale": self.scale}


def complementary_basis(M, tol_rank: float = TOL_RANK, tol_det: float = 1e-10) -> ComplementaryBasis:
    """Columns j of B spanning Im(B), completed by the other columns of A to a regular X.

    Indices are 1-based.  ``|det X|`` is compared with ``tol_det`` times the
    Hadamard bound (product of column norms).
    """
    M = np.asarray(M)
    exact = ex.is_exact(M)
    validate(M)
    A, B, _, _ = blocks(M)
    n = A.shape[0]
    if exact:
        jdx = _independent_columns_exact(B)
    else:
        A, B = ex.float_array(A), ex.float_array(B)
        k = ex.numeric_rank(B, tol_rank)
        _, _, piv = qr(B, pivoting=True)
        jdx = sorted(int(c) for c in piv[:k])
    idx = [i for i in range(n) if i not in set(jdx)]
    X = np.hstack([A[:, idx], B[:, jdx]])
    if exact:
        d = ex.exact_det(X)
        dval = complex(d)
        Xf = ex.float_array(X)
    else:
        Xf = X
        dval = complex(np.linalg.det(X))
    scale = float(np.prod(np.linalg.norm(Xf, axis=0))) if n else 1.0
    ok = (d != 0) if exact else abs(dval) > tol_det * scale
    if not ok:
        raise AssertRegularFailed(f"|det X| = {abs(dval):.3e} with scale {scale:.3e}")
    return ComplementaryBasis(tuple(i + 1 for i in idx), tuple(j + 1 for j in jdx), dval, scale)


def _independent_columns_exact(B) -> list:
    chosen = []
    for c in range(B.shape[1]):
        trial = chosen + [c]
        if ex.exact_rank(B[:, trial]) == len(trial):
            chosen = trial
    return chosen


def principal_minor(Z, removed) -> complex:
    """det of Z with the (1-based) rows and columns in ``removed`` deleted."""
    Z = np.asarray(Z)
    keep = [i for i in range(Z.shape[0]) if i + 1 not in set(removed)]
    sub = Z[np.ix_(keep, keep)]
    if ex.is_exact(sub):
        return ex.exact_det(sub)
    return complex(np.linalg.det(sub)) if keep else 1.0 + 0j
