from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympfactor import exact as ex
from sympfactor.symcore import (PackedIndex, SymmetricParam, ZeroVector, elementary_symmetric,
                                f_matrix, pack, symmetric_solve, unpack)

from conftest import exact_equal, exact_symmetric, exact_vectors


def test_packed_order_is_row_major_upper_triangle():
    assert PackedIndex(3).pairs == ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_packed_index_round_trip(n):
    idx = PackedIndex(n)
    assert idx.size == n * (n + 1) // 2
    for k in range(1, idx.size + 1):
        assert idx.index(*idx.pair(k)) == k


def test_pack_examples():
    assert exact_equal(pack(SymmetricParam.from_matrix([[3]])), ex.exact_array([3]))
    assert exact_equal(pack(SymmetricParam.from_matrix([[1, 2], [2, 5]])), ex.exact_array([1, 2, 5]))
    assert exact_equal(pack(SymmetricParam.zeros(2, True)), ex.exact_array([0, 0, 0]))


def test_from_matrix_rejects_asymmetric():
    with pytest.raises(ValueError):
        SymmetricParam.from_matrix([[1, 2], [3, 4]])


@given(st.integers(1, 4).flatmap(exact_symmetric))
def test_pack_unpack_inverse(Z):
    assert exact_equal(unpack(pack(Z)), Z.matrix)


def test_elementary_symmetric_follows_the_normalization():
    # 1/(1 + delta_ij) (E_ij + E_ji): the off-diagonal entries are 1
    assert exact_equal(elementary_symmetric(1, 1, 2).matrix, [[1, 0], [0, 0]])
    assert exact_equal(elementary_symmetric(1, 2, 2).matrix, [[0, 1], [1, 0]])
    assert exact_equal(elementary_symmetric(2, 2, 2).matrix, [[0, 0], [0, 1]])
    with pytest.raises((IndexError, ValueError)):
        elementary_symmetric(0, 1, 2)


def test_f_matrix_examples():
    assert exact_equal(f_matrix(ex.exact_array([5])), [[5]])
    F = f_matrix(ex.exact_array([0, 1]))
    # columns for (1,1), (1,2), (2,2) are E~_ij v
    assert exact_equal(F, [[0, 1, 0], [0, 0, 1]])
    assert exact_equal(f_matrix(ex.exact_array([0, 0, 0])), np.zeros((3, 6), dtype=int))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(exact_symmetric(n), exact_vectors(n))))
def test_f_matrix_commuting_identity(Zv):
    Z, v = Zv
    assert exact_equal(f_matrix(v) @ pack(Z), Z.matrix @ v)


@given(st.integers(1, 4).flatmap(lambda n: exact_vectors(n, nonzero=True)))
def test_f_matrix_has_full_rank_at_nonzero_vectors(a):
    assert ex.exact_rank(f_matrix(a)) == len(a)


def test_symmetric_solve_examples():
    Z = symmetric_solve(ex.exact_array([2]), ex.exact_array([6]))
    assert exact_equal(Z.matrix, [[3]])
    a, v = ex.exact_array([0, 1]), ex.exact_array([1, 0])
    assert exact_equal(symmetric_solve(a, v).matrix @ a, v)
    # isotropic a (a^T a = 0) defeats projector formulas but not elimination
    a = np.array([1, 1j])
    Z = symmetric_solve(a, np.array([1, 1]))
    assert np.max(np.abs(Z.matrix @ a - 1)) <= 1e-10
    Z = symmetric_solve(ex.exact_array([1, ex.I]), ex.exact_array([1, 1]))
    assert exact_equal(Z.matrix @ ex.exact_array([1, ex.I]), [1, 1])


def test_symmetric_solve_rejects_zero():
    with pytest.raises(ZeroVector):
        symmetric_solve(np.zeros(3), np.ones(3))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(exact_vectors(n, nonzero=True), exact_vectors(n))))
def test_symmetric_solve_is_exact_right_inverse(av):
    a, v = av
    Z = symmetric_solve(a, v)
    assert exact_equal(Z.matrix @ a, v)


def test_symmetric_solve_float_residual(rng):
    for n in range(1, 6):
        for _ in range(20):
            a = rng.normal(size=n) + 1j * rng.normal(size=n)
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            Z = symmetric_solve(a, v)
            assert np.max(np.abs(Z.matrix @ a - v)) <= 1e-10


def test_symmetric_param_arithmetic():
    A = SymmetricParam.from_matrix([[1, 2], [2, 3]])
    assert (A + (-A)).is_zero()
    assert exact_equal(A.scaled(Fraction(1, 2)).matrix, [[Fraction(1, 2), 1], [1, Fraction(3, 2)]])
    assert exact_equal(A.embed(3).matrix, [[1, 2, 0], [2, 3, 0], [0, 0, 0]])
