"""JSON encoding of scalars, matrices, words, points and targets.

A complex scalar is ``[re, im]``.  Each part is a JSON number (float flavor) or
``{"num": int, "den": int}`` (exact flavor); multiprecision values are written
as the exact rationals they hold, so words round-trip bit for bit.  On input a
bare number is also accepted, and a matrix whose entries are all integers or
rationals parses as exact.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import exact as ex
from .elemsym import ElementaryFactor, FactorWord
from .phimap import PhiPoint, TargetVector
from .polyfield.fields import (PolyVectorField, TupleSpec, lift_gamma_field, lift_phi_field,
                               partial_field, phi_polys, ptilde)
from .polyfield.poly import MultiPoly, from_sympy, to_sympy, var_key, var_name, zvar
from .symcore import SymmetricParam


def _rat(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def encode_scalar(x):
    if ex.is_exact_scalar(x):
        v = ex.rationalize(x)
        if isinstance(v, ex.QQI):
            return [_rat(v.re), _rat(v.im)]
        return [_rat(Fraction(v)), _rat(Fraction(0))]
    z = complex(x)
    return [z.real, z.imag]


def _part(p):
    if isinstance(p, dict):
        return Fraction(int(p["num"]), int(p["den"])), True
    if isinstance(p, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(p, int):
        return Fraction(p), True
    if isinstance(p, str):
        return Fraction(p), True
    return float(p), False


def decode_scalar(obj):
    """(value, is_exact) for one encoded scalar."""
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValueError(f"complex scalar must be [re, im], got {obj!r}")
        (re, e1), (im, e2) = _part(obj[0]), _part(obj[1])
        if e1 and e2:
            return ex.gauss(re, im), True
        return complex(float(re), float(im)), False
    v, e = _part(obj)
    return v, e


def encode_matrix(M) -> list:
    M = np.asarray(M)
    if M.ndim == 1:
        return [encode_scalar(v) for v in M]
    return [encode_matrix(row) for row in M]


def decode_array(obj, ndim: int, exact: bool | None = None) -> np.ndarray:
    """Nested lists of ``ndim`` levels with scalar leaves.

    The result is an exact object array when ``exact`` is True, or when it is
    None and every leaf is an integer or rational; otherwise complex128.
    """
    def walk(o, d):
        if d == 0:
            return decode_scalar(o)
        if not isinstance(o, list):
            raise ValueError(f"expected a list at depth {ndim - d}, got {o!r}")
        return [walk(x, d - 1) for x in o]

    nested = walk(obj, ndim)
    shape = _shape(nested, ndim)
    arr = np.empty(shape, dtype=object)
    flags = np.empty(shape, dtype=bool)
    for idx in np.ndindex(*shape):
        v = nested
        for i in idx:
            v = v[i]
        arr[idx], flags[idx] = v
    use_exact = bool(flags.all()) if exact is None else exact
    if use_exact:
        return ex.exact_array(arr)
    return ex.float_array(arr)


def _shape(nested, ndim):
    shape, o = [], nested
    for _ in range(ndim):
        shape.append(len(o))
        o = o[0] if o else None
    return tuple(shape)


def decode_matrix(obj, exact: bool | None = None) -> np.ndarray:
    """A matrix as nested rows, or ``{"M": rows}``."""
    if isinstance(obj, dict):
        obj = obj["M"]
    arr = decode_array(obj, 2, exact)
    return arr


def encode_symmetric(Z: SymmetricParam, packed: bool = False):
    if packed:
        return {"packed": True, "values": encode_matrix(Z.packed())}
    return encode_matrix(Z.matrix)


def decode_symmetric(obj, exact: bool | None = None) -> SymmetricParam:
    """Full n x n rows (symmetry checked) or ``{"packed": true, "values": [...]}``."""
    if isinstance(obj, dict):
        if not obj.get("packed"):
            raise ValueError("a symmetric matrix object needs \"packed\": true")
        z = decode_array(obj["values"], 1, exact)
        return SymmetricParam.from_packed(z, exact=ex.is_exact(z))
    m = decode_matrix(obj, exact)
    return SymmetricParam.from_matrix(m, exact=ex.is_exact(m))


def encode_word(w: FactorWord) -> dict:
    return {"n": w.n, "factors": [{"side": f.side, "Z": encode_matrix(f.Z.matrix)} for f in w]}


def decode_word(obj, exact: bool | None = None) -> FactorWord:
    n = int(obj["n"])
    factors = [ElementaryFactor(f["side"], decode_symmetric(f["Z"], exact)) for f in obj["factors"]]
    if factors and not exact:
        # mixed flavors would break the product; promote everything to one flavor
        if any(f.Z.exact for f in factors) and not all(f.Z.exact for f in factors):
            factors = [ElementaryFactor(f.side, f.Z.to_float()) for f in factors]
    return FactorWord(n, factors)


def encode_point(p: PhiPoint) -> dict:
    return {"n": p.n, "K": p.K, "Zs": [encode_matrix(Z.matrix) for Z in p.Zs]}


def decode_point(obj, exact: bool | None = None) -> PhiPoint:
    Zs = [decode_symmetric(z, exact) for z in obj["Zs"]]
    if not exact and len({Z.exact for Z in Zs}) > 1:
        Zs = [Z.to_float() for Z in Zs]
    p = PhiPoint(int(obj.get("n", Zs[0].n)), int(obj.get("K", len(Zs))), Zs)
    return p


def encode_target(y: TargetVector) -> dict:
    return {"a": encode_matrix(y.a), "b": encode_matrix(y.b)}


def decode_target(obj, exact: bool | None = None) -> TargetVector:
    v = decode_array([*obj["a"], *obj["b"]], 1, exact)
    n = len(obj["a"])
    return TargetVector(v[:n], v[n:])


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys) so reruns are byte-identical."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def load_json(path) -> object:
    return json.loads(Path(path).read_text())


# -- vector field specs ------------------------------------------------------------

_ZNAME = re.compile(r"z(\d+)_(\d)(\d)")


@dataclass(frozen=True)
class FieldSpec:
    """A field named in JSON: ``kind`` is "dx", "phi", "gamma" or "components".

    * ``{"tuple": {...TupleSpec...}, "K": k}`` (or a bare TupleSpec with an
      optional "K") is d_x^K = D_x(Pt^K); K defaults to the tuple's top level.
    * ``{"phi": {"tuple": {...}, "jstar": j, "K": k}}`` is phi^K_{x,j*}.
    * ``{"gamma": {"n": n, "i": i, "j": j, "jstar": j*, "K": k}}`` is gamma^K_{ij,j*}.
    * ``{"n": n, "K": k, "components": {"z2_11": "z1_12**2 - 3*z1_11", ...}}``
      is an explicit map; names are ``z{k}_{i}{j}`` with single-digit i, j.
    """

    kind: str
    n: int
    K: int
    field: PolyVectorField
    tuple: TupleSpec | None = None
    jstar: int | None = None
    gamma: tuple | None = None

    def defining_polys(self) -> list:
        """Pt^K for d_x^K (what it preserves); all 2n components of Phi_K otherwise."""
        if self.kind == "dx":
            return ptilde(self.n, self.K)
        return phi_polys(self.n, self.K)


def decode_field(obj) -> FieldSpec:
    if "phi" in obj:
        d = obj["phi"]
        x = TupleSpec.from_dict(d["tuple"])
        K, js = int(d["K"]), int(d["jstar"])
        return FieldSpec("phi", x.n, K, lift_phi_field(x, js, K), x, js)
    if "gamma" in obj:
        d = obj["gamma"]
        n, K = int(d["n"]), int(d["K"])
        i, j, js = int(d["i"]), int(d["j"]), int(d["jstar"])
        return FieldSpec("gamma", n, K, lift_gamma_field(i, j, js, K, n), jstar=js, gamma=(i, j))
    if "components" in obj:
        n, K = int(obj["n"]), int(obj["K"])
        comps = {_parse_var(name): parse_poly(expr) for name, expr in obj["components"].items()}
        return FieldSpec("components", n, K, PolyVectorField(n, K, comps))
    d = obj.get("tuple", obj)
    x = TupleSpec.from_dict(d)
    K = int(obj.get("K", d.get("K", x.max_level)))
    return FieldSpec("dx", x.n, K, partial_field(x, K), x)


def _parse_var(name: str) -> tuple:
    m = _ZNAME.fullmatch(name.strip())
    if not m:
        raise ValueError(f"bad variable name {name!r}; expected z<k>_<i><j>")
    return zvar(*(int(g) for g in m.groups()))


def parse_poly(text: str) -> MultiPoly:
    """Polynomial from text in the variables z<k>_<i><j> (``I`` is the imaginary unit)."""
    import sympy

    expr = sympy.sympify(text, locals={"I": sympy.I})
    names = sorted(expr.free_symbols, key=lambda s: s.name)
    gens = [_parse_var(s.name) for s in names]
    if not names:
        return MultiPoly.const(_sympy_number(expr))
    return from_sympy(sympy.Poly(sympy.expand(expr), *names), gens)


def _sympy_number(c):
    import sympy

    re, im = (sympy.Rational(x) for x in sympy.sympify(c).as_real_imag())
    return ex.gauss(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def poly_text(p: MultiPoly) -> str:
    """Text form accepted by :func:`parse_poly`."""
    import sympy

    gens = sorted(p.variables(), key=var_key)
    if not gens:
        return str(to_sympy(p, [], []))
    syms = [sympy.Symbol(var_name(v)) for v in gens]
    return sympy.sstr(sympy.expand(to_sympy(p, gens, syms)), order="grlex")


def encode_field(V: PolyVectorField) -> dict:
    return {"n": V.n, "K": V.K, "components": {var_name(v): poly_text(c) for v, c in V.components.items()}}
