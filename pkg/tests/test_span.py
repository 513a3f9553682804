import numpy as np
import pytest

from sympfactor import exact as ex
from sympfactor.elemsym import random_word, reconstruct
from sympfactor.phimap import crafted_wkc_point, random_point
from sympfactor.polyfield.span import (AssertRegularFailed, SingularPoint, builtin_collection,
                                       complementary_basis, nonvanishing_ok, principal_minor,
                                       span_check, u_matrix_check)


@pytest.mark.parametrize("n,K", [(1, 3), (2, 2), (2, 3), (2, 4)])
def test_builtin_collection_spans_kernel(rng, n, K):
    for _ in range(5):
        p = random_point(rng, n, K)
        if not nonvanishing_ok(n, K, p):
            continue
        rep = span_check(n, K, p, builtin_collection(n, K, p))
        assert rep.kernel_dim == K * n * (n + 1) // 2 - 2 * n
        assert rep.dominated


def test_span_check_rejects_singular_points(rng):
    p = crafted_wkc_point(rng, 2, 4, rank=0, lo=-1, hi=1)
    with pytest.raises(SingularPoint):
        span_check(2, 4, p, [])


def test_span_of_nothing_is_zero(rng):
    rep = span_check(2, 3, random_point(rng, 2, 3), [])
    assert rep.spanned_dim == 0 and not rep.dominated


@pytest.mark.parametrize("n,K", [(1, 3), (2, 3), (2, 4), (3, 4), (2, 5)])
def test_u_matrix_closed_form(n, K):
    assert u_matrix_check(n, K)


def test_u_matrix_needs_k3():
    with pytest.raises(ValueError):
        u_matrix_check(2, 2)


def test_complementary_basis_float(rng):
    for n in (1, 2, 3, 4):
        for _ in range(10):
            M = reconstruct(random_word(rng, n, 5)).M
            cb = complementary_basis(M)
            assert len(cb.i_idx) + len(cb.j_idx) == n
            assert abs(cb.det) > 1e-10 * cb.scale


def test_complementary_basis_exact_identity():
    cb = complementary_basis(ex.eye(4, True))
    assert cb.j_idx == () and cb.i_idx == (1, 2) and cb.det == 1


def test_principal_minor():
    Zm = ex.exact_array([[1, 2, 0], [2, 5, 1], [0, 1, 3]])
    assert principal_minor(Zm, [3]) == 1
    assert principal_minor(Zm, [1, 2, 3]) == 1
    assert principal_minor(np.eye(2), [1]) == 1
