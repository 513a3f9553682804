import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympfactor.phimap import PhiPoint, phi_eval, random_point
from sympfactor.polyfield.fields import (IndexClash, TupleSpec, dx_field, enumerate_type,
                                         is_fiber_preserving, lift_gamma_field, lift_phi_field,
                                         min_level, partial_field, phi_polys, point_values,
                                         ptilde, type1, type2, type4, type8, TYPE_KINDS)
from sympfactor.polyfield.poly import Z, zvar


@pytest.mark.parametrize("n,K", [(1, 3), (2, 2), (2, 4), (3, 3)])
def test_phi_polys_match_phi_eval(rng, n, K):
    p = random_point(rng, n, K)
    vals = point_values(p)
    got = np.array([q.eval(vals) for q in phi_polys(n, K)])
    assert np.max(np.abs(got - phi_eval(p))) <= 1e-12 * max(1, np.max(np.abs(got)))


def test_ptilde_low_levels():
    assert ptilde(1, 1) == [Z(1, 1, 1)]
    assert ptilde(1, 2) == [1 + Z(2, 1, 1) * Z(1, 1, 1)]


def test_dx_field_n1_k2():
    x = TupleSpec(1, [zvar(1, 1, 1), zvar(2, 1, 1)])
    V = partial_field(x, 2)
    z1, z2 = Z(1, 1, 1), Z(2, 1, 1)
    assert V.components == {zvar(1, 1, 1): z1, zvar(2, 1, 1): -z2}


def test_dx_field_arity_check():
    with pytest.raises(ValueError):
        dx_field([zvar(1, 1, 1)], ptilde(1, 1))


def test_tuple_validation():
    with pytest.raises(ValueError):
        TupleSpec(1, [zvar(1, 1, 1), zvar(1, 1, 1)])
    with pytest.raises(ValueError):
        TupleSpec(2, [zvar(1, 1, 1), zvar(1, 3, 3), zvar(2, 1, 1)])
    with pytest.raises(IndexClash):
        type2(2, 2, 1, 1)
    with pytest.raises(IndexClash):
        type8(3, 2, 2)
    x = type1(2, 3, 1)
    assert TupleSpec.from_dict(x.as_dict()) == x


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumerated_tuples_exist_from_min_level(n):
    for kind in TYPE_KINDS:
        # these kinds need two distinct indices (or n + 1 distinct pairs)
        if kind == "type7" or (kind in ("type2", "type3", "type6", "type8") and n == 1):
            continue
        assert enumerate_type(kind, n, max(min_level(kind), 3))


@pytest.mark.parametrize("n,K", [(1, 2), (2, 2), (2, 3), (3, 3)])
def test_partial_fields_preserve_ptilde(n, K):
    for kind in ("type1", "type2", "type3", "type4"):
        for x in enumerate_type(kind, n, K)[:3]:
            assert is_fiber_preserving(partial_field(x, K), ptilde(n, K))


@pytest.mark.parametrize("n", [1, 2])
def test_phi_lifts_preserve_phi(n):
    for m in range(1, n + 1):
        for js in range(1, n + 1):
            assert is_fiber_preserving(lift_phi_field(type4(n, m), js, 3), phi_polys(n, 3))


def test_gamma_fields_preserve_phi():
    for K in (2, 3):
        for (i, j) in [(1, 1), (1, 2), (2, 2)]:
            V = lift_gamma_field(i, j, 3, K, 3)
            assert is_fiber_preserving(V, phi_polys(3, K))
    with pytest.raises(IndexClash):
        lift_gamma_field(1, 2, 2, 2, 2)


@given(st.sampled_from([0, 1, 2]), st.integers(1, 3), st.integers(1, 3))
def test_derivation_law(which, a, b):
    x = type1(2, 2, 1)
    V = partial_field(x, 2)
    f = [Z(1, 1, 1), Z(2, 1, 2) + a, Z(2, 2, 2) * Z(1, 1, 1)][which]
    g = ptilde(2, 2)[0] * b + Z(2, 1, 1)
    assert V.apply(f * g) == V.apply(f) * g + f * V.apply(g)


def test_field_tangent_to_numeric_fiber(rng):
    n, K = 2, 3
    x = type4(n, 1)
    V = lift_phi_field(x, 2, K)
    p = random_point(rng, n, K)
    vec = V.vector_at(point_values(p), K)
    from sympfactor.phimap import phi_jacobian
    assert np.max(np.abs(phi_jacobian(p).astype(complex) @ vec)) <= 1e-10 * max(1, np.max(np.abs(vec)))
