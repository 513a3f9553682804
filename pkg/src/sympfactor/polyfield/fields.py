"""Polynomial vector fields tangent to the fibers of Phi_K.

``ptilde(n, K)`` is the block of ``Phi_K`` that the last factor changes:
``Pt^{-1} = 0``, ``Pt^0 = e_n`` and ``Pt^K = Pt^{K-2} + Z_K Pt^{K-1}``, so that
``Phi_K = (Pt^K, Pt^{K-1})`` for odd K and ``(Pt^{K-1}, Pt^K)`` for even K.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from ..phimap import PhiPoint
from ..symcore import PackedIndex
from .poly import MultiPoly, det, param, poly_sum, var_key, zvar

TYPE_KINDS = tuple(f"type{t}" for t in range(1, 9))
KINDS = TYPE_KINDS + ("custom",)


class IndexClash(ValueError):
    """Field indices violate the constraints of the construction."""


# -- polynomial matrices --------------------------------------------------------

def zmatrix(k: int, n: int) -> list:
    """Z_k as an n x n list of variable polynomials."""
    return [[MultiPoly.var(zvar(k, i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]


def param_matrix(name: str, rows: int, cols: int) -> list:
    return [[MultiPoly.var(param(name, i, j)) for j in range(1, cols + 1)]
            for i in range(1, rows + 1)]


def param_vector(name: str, n: int) -> list:
    return [MultiPoly.var(param(name, i)) for i in range(1, n + 1)]


def matvec(M: list, v: list) -> list:
    return [poly_sum(a * b for a, b in zip(row, v) if not a.is_zero() and not b.is_zero())
            for row in M]


def unit(n: int, k: int) -> list:
    """e_k (1-based) as constant polynomials."""
    return [MultiPoly.one() if i == k else MultiPoly.zero() for i in range(1, n + 1)]


def add_vec(a: list, b: list) -> list:
    return [x + y for x, y in zip(a, b)]


@lru_cache(maxsize=None)
def _ptilde(n: int, K: int) -> tuple:
    if K == -1:
        return tuple(MultiPoly.zero() for _ in range(n))
    if K == 0:
        return tuple(unit(n, n))
    prev2, prev = _ptilde(n, K - 2), _ptilde(n, K - 1)
    return tuple(add_vec(list(prev2), matvec(zmatrix(K, n), list(prev))))


def ptilde(n: int, K: int) -> list:
    """The n polynomials Pt^K (K >= -1)."""
    if K < -1:
        raise ValueError("ptilde needs K >= -1")
    return list(_ptilde(n, K))


def phi_polys(n: int, K: int) -> list:
    """The 2n components of Phi_K as polynomials."""
    a, b = ptilde(n, K), ptilde(n, K - 1)
    return a + b if K % 2 else b + a


def all_vars(n: int, K: int) -> list:
    """Coordinates of (Z_1, ..., Z_K) in packed order, Z_1 first."""
    pairs = PackedIndex(n).pairs
    return [zvar(k, i, j) for k in range(1, K + 1) for i, j in pairs]


def point_values(p: PhiPoint) -> dict:
    """Variable -> value map for a point."""
    out = {}
    for k, Zk in enumerate(p.Zs, start=1):
        m = Zk.matrix
        for i, j in PackedIndex(p.n).pairs:
            out[zvar(k, i, j)] = m[i - 1, j - 1]
    return out


# -- tuples ---------------------------------------------------------------------

@dataclass(frozen=True)
class TupleSpec:
    """An ordered (n+1)-tuple of variables z_{k,ij} and the kind it was built as."""

    n: int
    vars: tuple
    kind: str = "custom"

    def __post_init__(self):
        vs = tuple(zvar(*v[1:]) if v[0] == "z" else zvar(*v) for v in self.vars)
        object.__setattr__(self, "vars", vs)
        if self.kind not in KINDS:
            raise ValueError(f"unknown tuple kind {self.kind!r}")
        if len(vs) != self.n + 1:
            raise ValueError(f"a tuple for n={self.n} needs {self.n + 1} variables, got {len(vs)}")
        if len(set(vs)) != len(vs):
            raise ValueError("tuple variables must be distinct")
        for _, k, i, j in vs:
            if k < 1 or not 1 <= i <= j <= self.n:
                raise ValueError(f"variable z_{k},{i}{j} out of range for n={self.n}")

    @property
    def max_level(self) -> int:
        return max(v[1] for v in self.vars)

    def triples(self) -> list:
        return [v[1:] for v in self.vars]

    def as_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n, "vars": [list(v[1:]) for v in self.vars]}

    @classmethod
    def from_dict(cls, d: dict) -> "TupleSpec":
        return cls(int(d["n"]), tuple(("z",) + tuple(v) for v in d["vars"]), d.get("kind", "custom"))


def type1(n, k, m):
    return TupleSpec(n, [zvar(k - 1, m, m)] + [zvar(k, i, i) for i in range(1, n + 1)], "type1")


def type2(n, k, l, m):
    if l == m:
        raise IndexClash("type2 needs l != m")
    return TupleSpec(n, [zvar(k - 1, m, m)] + [zvar(k, l, i) for i in range(1, n + 1)], "type2")


def type3(n, k, pairs):
    return TupleSpec(n, [zvar(k, i, j) for i, j in pairs], "type3")


def type4(n, istar):
    return TupleSpec(n, [zvar(1, n, istar)] + [zvar(2, i, i) for i in range(1, n + 1)], "type4")


def type5(n, k, l, jstar, pairs):
    if not k < l:
        raise IndexClash("type5 needs k < l")
    return TupleSpec(n, [zvar(k, i, j) for i, j in pairs] + [zvar(l, jstar, jstar)], "type5")


def type6(n, k, I, istar, jstar, jprime):
    J = _complement(n, I)
    _check_partition(I, J, istar, jstar, jprime)
    vs = [zvar(k - 1, jstar, j) for j in J] + [zvar(k, istar, i) for i in I] + [zvar(k, istar, jprime)]
    return TupleSpec(n, vs, "type6")


def type7(n, k, I, istar, jstar, jprime):
    J = _complement(n, I)
    _check_partition(I, J, istar, jstar, jprime)
    vs = [zvar(k, jstar, j) for j in J] + [zvar(k + 1, istar, i) for i in I] + [zvar(k + 2, jprime, jprime)]
    return TupleSpec(n, vs, "type7")


def type8(n, i, j):
    if i == j:
        raise IndexClash("type8 needs i != j")
    return TupleSpec(n, [zvar(1, i, n)] + [zvar(2, j, r) for r in range(1, n + 1)], "type8")


def example_incomplete(n):
    """(z_{1,n1}, ..., z_{1,nn}, z_{2,n1}): the tuple whose field is not complete."""
    return TupleSpec(n, [zvar(1, n, r) for r in range(1, n + 1)] + [zvar(2, n, 1)], "custom")


def _complement(n, I):
    return [i for i in range(1, n + 1) if i not in set(I)]


def _check_partition(I, J, istar, jstar, jprime):
    if istar not in I or jstar not in J or jprime not in J:
        raise IndexClash("need i* in I and j*, j' in the complement")


def min_level(kind: str) -> int:
    """Smallest K for which a tuple of this kind exists."""
    return {"type1": 2, "type2": 2, "type3": 1, "type4": 2, "type5": 2,
            "type6": 2, "type7": 3, "type8": 2}[kind]


def enumerate_type(kind: str, n: int, K: int) -> list:
    """All tuples of the given kind with variables at levels <= K."""
    out = []
    pairs = PackedIndex(n).pairs
    subsets = [list(c) for r in range(1, n + 1) for c in combinations(range(1, n + 1), r)]
    if kind == "type1":
        out = [type1(n, k, m) for k in range(2, K + 1) for m in range(1, n + 1)]
    elif kind == "type2":
        out = [type2(n, k, l, m) for k in range(2, K + 1)
               for l in range(1, n + 1) for m in range(1, n + 1) if l != m]
    elif kind == "type3":
        out = [type3(n, k, c) for k in range(1, K + 1) for c in combinations(pairs, n + 1)]
    elif kind == "type4":
        out = [type4(n, i) for i in range(1, n + 1)] if K >= 2 else []
    elif kind == "type5":
        out = [type5(n, k, l, js, c) for l in range(2, K + 1) for k in range(1, l)
               for js in range(1, n + 1) for c in combinations(pairs, n)]
    elif kind in ("type6", "type7"):
        build, lo, hi = (type6, 2, K) if kind == "type6" else (type7, 1, K - 2)
        for k in range(lo, hi + 1):
            for I in subsets:
                J = _complement(n, I)
                for istar in I:
                    for jstar in J:
                        for jp in J:
                            try:
                                out.append(build(n, k, I, istar, jstar, jp))
                            except ValueError:
                                pass    # repeated variable for this index choice
    elif kind == "type8":
        out = [type8(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j] if K >= 2 else []
    else:
        raise ValueError(f"cannot enumerate kind {kind!r}")
    return out


# -- vector fields ---------------------------------------------------------------

@dataclass(frozen=True)
class PolyVectorField:
    """sum_r V_r d/d(var_r) with polynomial components; zero components dropped."""

    n: int
    K: int
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        comps = {v: c for v, c in self.components.items() if not c.is_zero()}
        for v in comps:
            if v[0] != "z" or v[1] > self.K:
                raise ValueError(f"component along {v} outside levels 1..{self.K}")
        object.__setattr__(self, "components", dict(sorted(comps.items(), key=lambda t: var_key(t[0]))))

    def apply(self, f: MultiPoly) -> MultiPoly:
        """Lie derivative V(f) = sum_r V_r df/d(var_r)."""
        fv = f.variables()
        return poly_sum(c * f.diff(v) for v, c in self.components.items() if v in fv)

    def __call__(self, f):
        return self.apply(f)

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        comps = dict(self.components)
        for v, c in other.components.items():
            comps[v] = comps.get(v, MultiPoly.zero()) + c
        return PolyVectorField(self.n, max(self.K, other.K), comps)

    def scaled(self, f) -> "PolyVectorField":
        return PolyVectorField(self.n, self.K, {v: c * f for v, c in self.components.items()})

    def lifted(self, K: int) -> "PolyVectorField":
        """The same field viewed on K factors (pullback under the projection)."""
        if K < self.K:
            raise ValueError("cannot lift to fewer factors")
        return PolyVectorField(self.n, K, self.components)

    def vector_at(self, values: dict, K: int | None = None) -> np.ndarray:
        """Component vector in the coordinates of :func:`all_vars`."""
        K = K or self.K
        return np.array([self.components[v].eval(values) if v in self.components else 0j
                         for v in all_vars(self.n, K)], dtype=complex)

    def is_zero(self) -> bool:
        return not self.components


def jacobian(P: list, xs: list) -> list:
    return [[p.diff(x) for x in xs] for p in P]


def dx_field(x, P: list, K: int | None = None) -> PolyVectorField:
    """D_x(P): component along x_r is (-1)^r times the Jacobian minor without column r."""
    xs = list(x.vars) if isinstance(x, TupleSpec) else list(x)
    if len(xs) != len(P) + 1:
        raise ValueError(f"D_x(P) needs {len(P) + 1} variables for {len(P)} polynomials, got {len(xs)}")
    n = x.n if isinstance(x, TupleSpec) else len(P)
    if K is None:
        levels = [v[1] for p in P for v in p.variables() if v[0] == "z"] + [v[1] for v in xs]
        K = max(levels)
    Jm = jacobian(P, xs)
    comps = {}
    for r, v in enumerate(xs):
        minor = [row[:r] + row[r + 1:] for row in Jm]
        comps[v] = det(minor) * (-1 if r % 2 else 1)
    return PolyVectorField(n, K, comps)


def partial_field(x: TupleSpec, K: int) -> PolyVectorField:
    """The field d_x^K = D_x(Pt^K)."""
    if x.max_level > K:
        raise ValueError("tuple uses levels above K")
    return dx_field(x, ptilde(x.n, K), K)


def lift_phi_field(x: TupleSpec, jstar: int, K: int) -> PolyVectorField:
    """phi^K_{x,j*}: the lift of d_x^{K-1} that also moves row j* of Z_K."""
    n = x.n
    if x.max_level >= K:
        raise ValueError("phi lift needs a tuple from levels below K")
    if not 1 <= jstar <= n:
        raise IndexClash(f"j* = {jstar} out of range")
    base = partial_field(x, K - 1)
    Pm1, Pm2 = ptilde(n, K - 1), ptilde(n, K - 2)
    u = [base.apply(p) for p in Pm2]
    pj = Pm1[jstar - 1]
    comps = {v: c * pj * pj for v, c in base.components.items()}
    for i in range(1, n + 1):
        if i != jstar:
            comps[zvar(K, jstar, i)] = -(pj * u[i - 1])
    diag = poly_sum(Pm1[i - 1] * u[i - 1] for i in range(1, n + 1) if i != jstar) - pj * u[jstar - 1]
    comps[zvar(K, jstar, jstar)] = diag
    return PolyVectorField(n, K, comps)


def lift_gamma_field(i: int, j: int, jstar: int, K: int, n: int) -> PolyVectorField:
    """gamma^K_{ij,j*}, for i <= j and i, j != j*."""
    if i > j:
        i, j = j, i
    if jstar in (i, j):
        raise IndexClash("gamma needs i != j* and j != j*")
    if not (1 <= i and j <= n and 1 <= jstar <= n):
        raise IndexClash("index out of range")
    P = ptilde(n, K - 1)
    pi, pj, ps = P[i - 1], P[j - 1], P[jstar - 1]
    half = MultiPoly.const(1) if i != j else MultiPoly.const(2)
    inv = 1 / half.constant()
    comps = {zvar(K, i, j): ps * ps}
    terms = [(zvar(K, jstar, jstar), pi * pj * 2 * inv),
             (zvar(K, jstar, j), -(pi * ps) * inv),
             (zvar(K, jstar, i), -(pj * ps) * inv)]
    for v, c in terms:
        comps[v] = comps.get(v, MultiPoly.zero()) + c
    return PolyVectorField(n, K, comps)


def is_fiber_preserving(V: PolyVectorField, polys: list) -> bool:
    """V(p) is the zero polynomial for every p."""
    return all(V.apply(p).is_zero() for p in polys)
