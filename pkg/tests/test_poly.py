from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympfactor.polyfield.poly import MultiPoly, Z, det, poly_gcd, zvar

VARS = [zvar(1, 1, 1), zvar(1, 1, 2), zvar(2, 1, 1)]

monomial = st.tuples(st.integers(-3, 3), st.lists(st.integers(0, 2), min_size=3, max_size=3))


def build(terms):
    p = MultiPoly.zero()
    for c, exps in terms:
        m = MultiPoly.const(c)
        for v, e in zip(VARS, exps):
            m = m * MultiPoly.var(v) ** e
        p = p + m
    return p


polys = st.lists(monomial, max_size=4).map(build)
points = st.lists(st.fractions(-3, 3, max_denominator=4), min_size=3, max_size=3).map(
    lambda xs: dict(zip(VARS, xs)))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiPoly.zero() and a * MultiPoly.one() == a


@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b).eval_exact(x) == a.eval_exact(x) * b.eval_exact(x)
    assert (a + b).eval_exact(x) == a.eval_exact(x) + b.eval_exact(x)


@given(polys, polys)
def test_leibniz_rule(a, b):
    v = VARS[0]
    assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_exact_division(a, b):
    assert (a * b).divide(b) == a


def test_division_with_remainder_raises():
    x, y = Z(1, 1, 1), Z(1, 1, 2)
    with pytest.raises(ValueError):
        (x + 1).divide(y)


def test_degree_and_coefficients():
    x, y = Z(1, 1, 1), Z(1, 1, 2)
    p = 3 * x * x * y + y - 2
    assert p.degree() == 3 and p.degree(zvar(1, 1, 1)) == 2 and p.degree(zvar(1, 1, 2)) == 1
    assert p.coeff(zvar(1, 1, 1), 2) == 3 * y
    assert p.subs({zvar(1, 1, 1): Fraction(1)}) == 4 * y - 2


def test_det_and_gcd():
    x, y = Z(1, 1, 1), Z(1, 1, 2)
    assert det([[x, y], [y, x]]) == x * x - y * y
    g = poly_gcd([(x + y) * x, (x + y) * y * 3])
    assert g.divide(x + y).is_constant()
