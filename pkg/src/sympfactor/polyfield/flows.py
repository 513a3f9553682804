"""Closed-form flows of affine fields and of their lifts.

An affine field ``x' = A x + b`` has the flow ``exp(t [[A, b], [0, 0]]) (x0, 1)``.
The lift ``phi^K_{x,j*}`` moves the tuple along ``(Pt^{K-1}_{j*})^2 d_x^{K-1}``
(the speed factor is a first integral) and keeps ``Pt^K`` fixed by re-solving
row j* of Z_K, which is how its flow is realized here.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm, solve

from ..phimap import PhiPoint, phi_eval
from ..symcore import SymmetricParam
from .completeness import AffineFlowSystem, completeness_check
from .fields import TupleSpec, lift_gamma_field, point_values, ptilde


class NotCertified(ValueError):
    """The tuple's field is not covered by the completeness criterion."""


def flow(sys: AffineFlowSystem, p0, t) -> np.ndarray:
    """Time-t flow of x' = A x + b started at p0 (complex t allowed)."""
    if not sys.numeric:
        raise ValueError("bind the system's parameters before computing flows")
    m = sys.m
    aug = np.zeros((m + 1, m + 1), dtype=complex)
    aug[:m, :m] = sys.A
    aug[:m, m] = sys.b
    y = np.append(np.asarray(p0, dtype=complex), 1.0)
    return (expm(complex(t) * aug) @ y)[:m]


def affine(A, b, xs=None) -> AffineFlowSystem:
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return AffineFlowSystem(A, b, tuple(xs) if xs is not None else tuple(range(len(b))))


def _with_values(p: PhiPoint, values: dict) -> PhiPoint:
    mats = [Z.matrix.astype(complex).copy() for Z in p.Zs]
    for (_, k, i, j), val in values.items():
        mats[k - 1][i - 1, j - 1] = val
        mats[k - 1][j - 1, i - 1] = val
    return PhiPoint(p.n, p.K, [SymmetricParam(m) for m in mats])


def bound_system(x: TupleSpec, K: int, p: PhiPoint) -> AffineFlowSystem:
    """The certified affine system of d_x^K with non-tuple variables taken from p."""
    res = completeness_check(x, ptilde(x.n, K))
    if not res.complete:
        raise NotCertified(f"tuple {x.triples()} is not certified at K={K}")
    return res.system.bind(point_values(p))


def field_flow(x: TupleSpec, K: int, p: PhiPoint, t, sys: AffineFlowSystem | None = None) -> PhiPoint:
    """Flow of d_x^K = D_x(Pt^K) from p; preserves Pt^K."""
    sys = sys or bound_system(x, K, p)
    vals = point_values(p)
    x0 = [vals[v] for v in x.vars]
    return _with_values(p, dict(zip(x.vars, flow(sys, x0, t))))


def lifted_flow(x: TupleSpec, jstar: int, K: int, p: PhiPoint, t,
                sys: AffineFlowSystem | None = None) -> PhiPoint:
    """Flow of phi^K_{x,j*} from p (a point with K factors); preserves Phi_K."""
    n = x.n
    vals = point_values(p)
    Pm1 = np.array([q.eval(vals) for q in ptilde(n, K - 1)])
    target = np.array([q.eval(vals) for q in ptilde(n, K)])
    speed = Pm1[jstar - 1] ** 2
    sys = sys or bound_system(x, K - 1, p)
    moved = field_flow(x, K - 1, p, speed * complex(t), sys)
    new_vals = point_values(moved)
    Pm2 = np.array([q.eval(new_vals) for q in ptilde(n, K - 2)])
    # row j* of Z_K solves Pt^{K-2} + Z_K Pt^{K-1} = target; other entries stay
    ZK = moved.Zs[K - 1].matrix.astype(complex).copy()
    ZK[jstar - 1, :] = 0
    ZK[:, jstar - 1] = 0
    rhs = target - Pm2 - ZK @ Pm1
    M = np.zeros((n, n), dtype=complex)
    for i in range(1, n + 1):
        # unknown z_{K,j*i} enters Z_K Pm1 through Et_{j* i} Pm1
        col = np.zeros(n, dtype=complex)
        col[jstar - 1] += Pm1[i - 1]
        if i != jstar:
            col[i - 1] += Pm1[jstar - 1]
        M[:, i - 1] = col
    row = solve(M, rhs)
    upd = {}
    for i in range(1, n + 1):
        a, b = sorted((jstar, i))
        upd[("z", K, a, b)] = row[i - 1]
    return _with_values(moved, upd)


def gamma_flow(i: int, j: int, jstar: int, p: PhiPoint, t) -> PhiPoint:
    """Flow of gamma^K_{ij,j*} (K = p.K): a translation in Z_K.

    Its coefficients involve only levels below K, which the field does not
    move, so z(t) = z(0) + t V(p) exactly.
    """
    V = lift_gamma_field(i, j, jstar, p.K, p.n)
    vals = point_values(p)
    return _with_values(p, {v: vals[v] + complex(t) * c.eval(vals) for v, c in V.components.items()})


def phi_invariance(p: PhiPoint, q: PhiPoint) -> float:
    """max |Phi_K(p) - Phi_K(q)|."""
    return float(np.max(np.abs(phi_eval(p) - phi_eval(q))))
