"""Sparse multivariate polynomials with Gaussian-rational coefficients.

Variables are hashable tuples.  Matrix entries are ``('z', k, i, j)`` with
``i <= j`` (see :func:`zvar`); free parameters of generic forms are
``('p', name, *indices)``.  A monomial is a tuple of ``(variable, exponent)``
pairs sorted by :func:`var_key`, and a polynomial is an immutable map
monomial -> nonzero coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce

from .. import exact as ex

ONE_MONO = ()


def zvar(k: int, i: int, j: int) -> tuple:
    """Entry (i, j) of Z_k, 1-based; symmetric so the pair is sorted."""
    if i > j:
        i, j = j, i
    return ("z", k, i, j)


def param(name: str, *idx) -> tuple:
    return ("p", name) + tuple(idx)


def var_key(v) -> tuple:
    # z variables first, ordered by (k, i, j); parameters after, by name then indices
    if v[0] == "z":
        return (0, "", v[1:])
    return (1, str(v[1]), tuple(v[2:]))


def var_name(v) -> str:
    if v[0] == "z":
        return f"z{v[1]}_{v[2]}{v[3]}"
    return v[1] + "".join(f"_{i}" for i in v[2:])


def _coef(c):
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    return ex.to_exact(c)


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=lambda t: var_key(t[0])))


def _mono_degree(m: tuple) -> int:
    return sum(e for _, e in m)


def grlex_key(m: tuple):
    """Graded lex over the fixed variable order; larger key = larger monomial."""
    exps = tuple((var_key(v), e) for v, e in m)
    return (_mono_degree(m), _lex_vector(exps))


def _lex_vector(exps):
    # compare exponent vectors lexicographically in variable order: a monomial
    # with a positive exponent on an earlier variable is larger
    return tuple((tuple(-x for x in _flatten(k)), e) for k, e in exps)


def _flatten(key):
    out = []
    for part in key:
        if isinstance(part, tuple):
            out.extend(part)
        elif isinstance(part, str):
            out.extend(ord(c) for c in part)
            out.append(-1)
        else:
            out.append(part)
    return out


class MultiPoly:
    """Immutable sparse polynomial; zero coefficients are never stored."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms=None):
        t = {}
        for m, c in (terms or {}).items():
            c = _coef(c)
            if c != 0:
                t[m] = c
        self._t = t
        self._h = None

    # -- constructors ---------------------------------------------------------
    @classmethod
    def _raw(cls, t: dict) -> "MultiPoly":
        p = cls.__new__(cls)
        p._t = t
        p._h = None
        return p

    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = _coef(c)
        return cls._raw({ONE_MONO: c} if c != 0 else {})

    @classmethod
    def var(cls, v) -> "MultiPoly":
        return cls._raw({((v, 1),): Fraction(1)})

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "MultiPoly":
        return cls.const(1)

    # -- inspection -----------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def sorted_terms(self) -> list:
        """(monomial, coefficient) pairs, largest first in graded lex order."""
        return sorted(self._t.items(), key=lambda mc: grlex_key(mc[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and ONE_MONO in self._t)

    def constant(self):
        return self._t.get(ONE_MONO, Fraction(0))

    def variables(self) -> frozenset:
        return frozenset(v for m in self._t for v, _ in m)

    def degree(self, v=None) -> int:
        """Total degree, or the degree in ``v``; -1 for the zero polynomial."""
        if not self._t:
            return -1
        if v is None:
            return max(_mono_degree(m) for m in self._t)
        return max(dict(m).get(v, 0) for m in self._t)

    def degree_in(self, vs) -> int:
        """Joint degree in the set of variables ``vs``."""
        if not self._t:
            return -1
        vs = set(vs)
        return max(sum(e for v, e in m if v in vs) for m in self._t)

    def coeff(self, v, d: int) -> "MultiPoly":
        """Coefficient of ``v**d`` viewed as a polynomial in the other variables."""
        out = {}
        for m, c in self._t.items():
            dm = dict(m)
            if dm.get(v, 0) == d:
                dm.pop(v, None)
                out[tuple(sorted(dm.items(), key=lambda t: var_key(t[0])))] = c
        return MultiPoly._raw(out)

    def split(self, vs) -> dict:
        """Group by the exponents of ``vs``: {monomial in vs: coefficient poly}."""
        vs = set(vs)
        out = {}
        for m, c in self._t.items():
            inner = tuple((v, e) for v, e in m if v in vs)
            rest = tuple((v, e) for v, e in m if v not in vs)
            out.setdefault(inner, {})[rest] = c
        return {k: MultiPoly._raw(t) for k, t in out.items()}

    # -- arithmetic -----------------------------------------------------------
    @staticmethod
    def _lift(x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        return MultiPoly.const(x)

    def __add__(self, other):
        other = self._lift(other)
        if len(other._t) > len(self._t):
            self, other = other, self
        t = dict(self._t)
        for m, c in other._t.items():
            s = t.get(m, 0) + c
            if s != 0:
                t[m] = s
            else:
                t.pop(m, None)
        return MultiPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _coef(other)
            if c == 0:
                return MultiPoly.zero()
            return MultiPoly._raw({m: v * c for m, v in self._t.items()})
        t = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                s = t.get(m, 0) + c1 * c2
                if s != 0:
                    t[m] = s
                else:
                    t.pop(m, None)
        return MultiPoly._raw(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative int")
        out, base = MultiPoly.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.const(other)
            except TypeError:
                return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # -- calculus and evaluation ----------------------------------------------
    def diff(self, v) -> "MultiPoly":
        t = {}
        for m, c in self._t.items():
            dm = dict(m)
            e = dm.get(v, 0)
            if e == 0:
                continue
            if e == 1:
                del dm[v]
            else:
                dm[v] = e - 1
            key = tuple(sorted(dm.items(), key=lambda x: var_key(x[0])))
            t[key] = t.get(key, 0) + c * e
        return MultiPoly._raw({m: c for m, c in t.items() if c != 0})

    def subs(self, values: dict) -> "MultiPoly":
        """Substitute scalars or polynomials for some variables, exactly."""
        out = MultiPoly.zero()
        cache = {}
        for m, c in self._t.items():
            term = MultiPoly.const(c)
            rest = []
            for v, e in m:
                if v in values:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = self._lift(values[v]) ** e
                    term = term * cache[key]
                else:
                    rest.append((v, e))
            out = out + term * MultiPoly._raw({tuple(rest): Fraction(1)})
        return out

    def eval(self, values: dict) -> complex:
        """Numeric value; every variable of the polynomial must be bound."""
        total = 0j
        for m, c in self._t.items():
            term = complex(c)
            for v, e in m:
                term *= complex(values[v]) ** e
            total += term
        return total

    def eval_exact(self, values: dict):
        total = Fraction(0)
        for m, c in self._t.items():
            term = c
            for v, e in m:
                term = term * ex.to_exact(values[v]) ** e
            total = total + term
        return total

    def divide(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises ValueError when ``other`` does not divide ``self``."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_m, lead_c = other.sorted_terms()[0]
        rem, q = self, MultiPoly.zero()
        while not rem.is_zero():
            m, c = rem.sorted_terms()[0]
            qm = _mono_div(m, lead_m)
            if qm is None:
                raise ValueError("polynomial division is not exact")
            t = MultiPoly._raw({qm: c / lead_c})
            q = q + t
            rem = rem - t * other
        return q

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(var_name(v) + (f"^{e}" if e > 1 else "") for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _mono_div(a: tuple, b: tuple):
    da = dict(a)
    for v, e in b:
        r = da.get(v, 0) - e
        if r < 0:
            return None
        if r == 0:
            del da[v]
        else:
            da[v] = r
    return tuple(sorted(da.items(), key=lambda t: var_key(t[0])))


def Z(k: int, i: int, j: int) -> MultiPoly:
    return MultiPoly.var(zvar(k, i, j))


def P(name: str, *idx) -> MultiPoly:
    return MultiPoly.var(param(name, *idx))


def poly_sum(items) -> MultiPoly:
    return reduce(lambda a, b: a + b, items, MultiPoly.zero())


def det(mat) -> MultiPoly:
    """Determinant of a square list-of-lists of polynomials by cofactor expansion."""
    n = len(mat)
    if n == 0:
        return MultiPoly.one()
    if n == 1:
        return MultiPoly._lift(mat[0][0])
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    # expand along the sparsest row
    r = min(range(n), key=lambda i: sum(not MultiPoly._lift(x).is_zero() for x in mat[i]))
    out = MultiPoly.zero()
    for c in range(n):
        a = MultiPoly._lift(mat[r][c])
        if a.is_zero():
            continue
        minor = [row[:c] + row[c + 1:] for i, row in enumerate(mat) if i != r]
        sign = -1 if (r + c) % 2 else 1
        out = out + a * det(minor) * sign
    return out


def poly_gcd(polys) -> MultiPoly:
    """Greatest common divisor (monic in graded lex) of nonzero polynomials."""
    import sympy

    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return MultiPoly.zero()
    gens = sorted({v for p in polys for v in p.variables()}, key=var_key)
    if not gens:
        return MultiPoly.one()
    syms = sympy.symbols(f"x0:{len(gens)}")
    sp = [sympy.Poly(to_sympy(p, gens, syms), *syms, domain="QQ_I") for p in polys]
    g = reduce(sympy.gcd, sp)
    return from_sympy(g, gens)


def to_sympy(p: MultiPoly, gens, syms):
    import sympy

    index = {v: s for v, s in zip(gens, syms)}
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        if isinstance(c, ex.QQI):
            coef = sympy.Rational(c.re.numerator, c.re.denominator) + \
                sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
        else:
            coef = sympy.Rational(c.numerator, c.denominator)
        term = coef
        for v, e in m:
            term = term * index[v] ** e
        expr = expr + term
    return expr


def from_sympy(poly, gens) -> MultiPoly:
    import sympy

    t = {}
    for exps, c in poly.terms():
        re, im = (sympy.Rational(x) for x in sympy.sympify(c).as_real_imag())
        coef = ex.gauss(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
        mono = tuple((v, e) for v, e in zip(gens, exps) if e)
        t[mono] = coef
    return MultiPoly(t)
