"""Gaussian rationals and the two numeric flavors (exact object arrays, complex128).

Exact values are ``Fraction`` or :class:`QQI` (plain ints are accepted on input
and promoted); a QQI never has a zero imaginary part, arithmetic collapses it
back to ``Fraction``.  Exact matrices are numpy arrays of ``dtype=object`` holding
those values, so the same ``@``/``+`` code serves both flavors.

Object arrays may also hold multiprecision ``gmpy2.mpc`` numbers.  They travel
through the exact code paths unchanged but are compared against tolerances like
floats; the factorizer uses them for float input (see :func:`mp_array`).
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from numbers import Rational

import gmpy2
import numpy as np

MP_TYPES = (type(gmpy2.mpc(0)), type(gmpy2.mpfr(0)))


class QQI:
    """Element of Q(i) with a nonzero imaginary part."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- construction helpers -------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, QQI):
            return x.re, x.im
        if isinstance(x, Rational):
            return Fraction(x), Fraction(0)
        return None

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gauss(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gauss(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gauss(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        return gauss(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        d = a * a + b * b
        if d == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return gauss((self.re * a + self.im * b) / d, (self.im * a - self.re * b) / d)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        d = self.re * self.re + self.im * self.im
        a, b = p
        return gauss((a * self.re + b * self.im) / d, (b * self.re - a * self.im) / d)

    def __neg__(self):
        return QQI(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        out, base = Fraction(1), self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return QQI(self.re, -self.im)

    def __abs__(self):
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QQI({self.re}, {self.im})"

    def __str__(self):
        sign = "+" if self.im >= 0 else "-"
        if self.re == 0:
            return f"{self.im}*I"
        return f"({self.re} {sign} {abs(self.im)}*I)"


def gauss(re, im=0):
    """Canonical exact value for ``re + i*im``."""
    if im == 0:
        return Fraction(re)
    return QQI(re, im)


I = QQI(0, 1)


def to_exact(x):
    """Convert a Python/numpy scalar to an exact value (floats convert bit-exactly)."""
    if isinstance(x, (QQI, Fraction)) or isinstance(x, MP_TYPES):
        return x
    if isinstance(x, (int, np.integer)):
        # plain ints would turn into floats under "/"
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        return gauss(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact value")


def is_exact_scalar(x) -> bool:
    """True for values that belong in object arrays (rationals and mp numbers)."""
    return isinstance(x, (int, Fraction, QQI) + MP_TYPES) and not isinstance(x, bool)


def is_rational_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QQI)) and not isinstance(x, bool)


def exact_array(a) -> np.ndarray:
    """Object array of exact values."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_exact(v)
    return out


def float_array(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        return np.vectorize(complex, otypes=[complex])(arr) if arr.size else arr.astype(complex)
    return arr.astype(complex)


def is_exact(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def like(a: np.ndarray, values) -> np.ndarray:
    """Array of ``values`` in the flavor of ``a``."""
    return exact_array(values) if is_exact(a) else np.asarray(values, dtype=complex)


def eye(n: int, exact: bool = False) -> np.ndarray:
    if exact:
        out = zeros((n, n), exact=True)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n, dtype=complex)


def zeros(shape, exact: bool = False) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=complex)


def mag2(x):
    """|x|^2, exact for exact input."""
    if isinstance(x, QQI):
        return x.re * x.re + x.im * x.im
    if isinstance(x, (int, Fraction)):
        return Fraction(x) * x
    x = complex(x)
    return x.real * x.real + x.imag * x.imag


def is_zero(x, tol: float = 0.0) -> bool:
    if is_rational_scalar(x):
        return x == 0
    return abs(complex(x)) <= tol


def max_abs(a) -> float:
    """Max-modulus entry as a float (0 for empty input)."""
    arr = np.asarray(a)
    if arr.size == 0:
        return 0.0
    if arr.dtype == object:
        return max(abs(complex(v)) for v in arr.flat)
    return float(np.max(np.abs(arr)))


def all_zero(a, tol: float = 0.0) -> bool:
    arr = np.asarray(a)
    if arr.dtype == object:
        return all(is_zero(v, tol) for v in arr.flat)
    return arr.size == 0 or float(np.max(np.abs(arr))) <= tol


def numeric_rank(a, rel_tol: float = 1e-12) -> int:
    """Rank by singular values: count of sigma > sigma_max * max(shape) * rel_tol."""
    arr = float_array(a)
    if arr.size == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > s[0] * max(arr.shape) * rel_tol))


def exact_rank(a) -> int:
    """Rank over Q(i) by fraction arithmetic."""
    m = [[to_exact(v) for v in row] for row in np.asarray(a, dtype=object)]
    if not m or not m[0]:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def rank(a, rel_tol: float = 1e-12) -> int:
    return exact_rank(a) if is_exact(np.asarray(a)) else numeric_rank(a, rel_tol)


def exact_det(a):
    m = [[to_exact(v) for v in row] for row in np.asarray(a, dtype=object)]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


# -- multiprecision ----------------------------------------------------------

@contextmanager
def precision(bits: int):
    """Working precision (in bits) for gmpy2 arithmetic inside the block."""
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        yield


def _to_mp(x):
    if isinstance(x, MP_TYPES):
        return gmpy2.mpc(x)
    if isinstance(x, QQI):
        return gmpy2.mpc(gmpy2.mpfr(gmpy2.mpq(x.re.numerator, x.re.denominator)),
                         gmpy2.mpfr(gmpy2.mpq(x.im.numerator, x.im.denominator)))
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return gmpy2.mpc(gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator)))
    return gmpy2.mpc(complex(x))


def mp_array(a) -> np.ndarray:
    """Object array of gmpy2.mpc at the current working precision (floats convert exactly)."""
    arr = np.asarray(a)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = _to_mp(v)
    return out


def is_mp(a) -> bool:
    arr = np.asarray(a)
    return arr.dtype == object and any(isinstance(v, MP_TYPES) for v in arr.flat)


def _mpfr_to_fraction(x) -> Fraction:
    q = gmpy2.mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


def rationalize(x):
    """Exact rational value of a scalar; binary floats and mp numbers convert bit-exactly."""
    if isinstance(x, MP_TYPES):
        x = gmpy2.mpc(x)
        return gauss(_mpfr_to_fraction(x.real), _mpfr_to_fraction(x.imag))
    return to_exact(x)


def rational_array(a) -> np.ndarray:
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = rationalize(v)
    return out


__all__ = [
    "QQI", "I", "gauss", "to_exact", "exact_array", "float_array", "is_exact",
    "is_exact_scalar", "like", "eye", "zeros", "mag2", "is_zero", "max_abs",
    "all_zero", "numeric_rank", "exact_rank", "rank", "exact_det", "precision",
    "mp_array", "is_mp", "rationalize", "rational_array", "is_rational_scalar",
]
