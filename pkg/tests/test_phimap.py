import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympfactor import exact as ex
from sympfactor.elemsym import ElementaryFactor, FactorWord, reconstruct
from sympfactor.phimap import (ClassificationMismatch, PhiPoint, TargetVector, ZeroTarget,
                               classify, crafted_wkc_point, in_wk, last_row_of_word, lift_k3,
                               lift_pad, m_matrix, phi_eval, phi_jacobian, random_point, side_of,
                               stratum_of)
from sympfactor.symcore import SymmetricParam

from conftest import exact_equal, exact_symmetric, exact_vectors


def scalar_point(*zs):
    return PhiPoint.from_matrices([[[z]] for z in zs], exact=True)


def test_phi_small_examples():
    # n = 1: Phi_1 = (z1, 1), Phi_2 = (z1, 1 + z1 z2)
    assert exact_equal(phi_eval(scalar_point(3)), [3, 1])
    assert exact_equal(phi_eval(scalar_point(3, 5)), [3, 16])
    assert exact_equal(phi_eval(scalar_point(0, 0, 0)), [0, 1])


def test_phi_jacobian_n1_k2():
    assert exact_equal(phi_jacobian(scalar_point(3, 5)), [[1, 0], [5, 3]])


def test_side_convention():
    assert side_of(1) == "upper" and side_of(2) == "lower"


@given(st.integers(1, 3), st.integers(1, 5), st.data())
def test_phi_is_last_column_of_product(n, K, data):
    p = PhiPoint(n, K, [data.draw(exact_symmetric(n)) for _ in range(K)])
    prod = ex.eye(2 * n, True)
    for k in range(K, 0, -1):
        prod = prod @ m_matrix(k, p.Zs[k - 1])
    assert exact_equal(phi_eval(p), prod[:, -1])


def test_phi_jacobian_matches_finite_differences(rng):
    for n, K in [(1, 3), (2, 4), (3, 3)]:
        p = random_point(rng, n, K)
        Jm = phi_jacobian(p)
        x0 = p.packed()
        m = n * (n + 1) // 2
        h = 1e-6
        for c in range(len(x0)):
            mats = []
            for k in range(K):
                z = x0[k * m:(k + 1) * m].copy()
                if c // m == k:
                    z[c % m] += h
                mats.append(SymmetricParam.from_packed(z, exact=False))
            fd = (phi_eval(PhiPoint(n, K, mats)) - phi_eval(p)) / h
            assert np.max(np.abs(fd - Jm[:, c])) <= 1e-4


def test_last_row_example():
    E = SymmetricParam.from_matrix([[1]])
    O = SymmetricParam.from_matrix([[0]])
    w = FactorWord(1, [ElementaryFactor("lower", E), ElementaryFactor("upper", O),
                       ElementaryFactor("lower", O)])
    assert exact_equal(last_row_of_word(w), [1, 1])


def test_last_row_matches_reconstruction(rng):
    from sympfactor.elemsym import random_word
    for n in (1, 2, 3):
        w = random_word(rng, n, 6)
        assert np.max(np.abs(last_row_of_word(w) - reconstruct(w).M[-1])) <= 1e-12


def test_classify_example_n2_k5():
    Z1 = [[1, 0], [0, 0]]
    Z2 = [[1, 0], [0, 0]]
    Z3 = [[1, 0], [0, 0]]
    Z4 = [[2, 0], [0, 0]]
    Z5 = [[1, 1], [1, 1]]
    rep = classify(PhiPoint.from_matrices([Z1, Z2, Z3, Z4, Z5], exact=True))
    assert not rep.in_WK and rep.in_SK
    assert rep.wk_matrix_rank == 1 and rep.jacobian_rank < 4


def test_classify_generic_point(rng):
    rep = classify(random_point(rng, 2, 5))
    assert rep.in_WK and not rep.in_SK and rep.jacobian_rank == 4


def test_classify_needs_k2():
    with pytest.raises(ValueError):
        classify(scalar_point(1))


def test_classify_crafted_points_agree(rng):
    for n, K in [(2, 4), (2, 5), (3, 5), (3, 6)]:
        for rank in range(n + 1):
            p = crafted_wkc_point(rng, n, K, rank, lo=-1, hi=1)
            rep = classify(p)
            assert not rep.in_WK and rep.consistent


def test_in_wk_only_looks_at_early_odd_slots():
    # Z_K itself never counts
    p = PhiPoint.from_matrices([[[0, 0], [0, 0]], [[1, 0], [0, 1]], [[1, 1], [1, 1]]], exact=True)
    assert not in_wk(p)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(exact_vectors(n), exact_vectors(n))))
def test_lift_k3_exact(ab):
    a, b = ab
    y = TargetVector(a, b)
    if y.is_zero():
        with pytest.raises(ZeroTarget):
            lift_k3(y)
        return
    p = lift_k3(y)
    assert p.K == 3 and p.exact
    assert exact_equal(phi_eval(p), y.vector)
    assert in_wk(p)


def test_lift_k3_examples():
    one = ex.exact_array
    p = lift_k3(TargetVector(one([0]), one([1])))
    assert [Z.matrix[0, 0] for Z in p.Zs] == [1, 0, -1]
    p = lift_k3(TargetVector(one([1]), one([0])))
    assert [Z.matrix[0, 0] for Z in p.Zs] == [1, -1, 0]


def test_lift_pad_float(rng):
    for n in (1, 2, 3, 4):
        for K in (3, 4, 7):
            y = TargetVector.from_vector(rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n))
            p = lift_pad(y, K)
            assert p.K == K
            assert np.max(np.abs(phi_eval(p) - y.vector)) <= 1e-10 * max(1, np.max(np.abs(y.vector)))
            assert not classify(p).in_SK


def test_lift_pad_needs_k3():
    with pytest.raises(ValueError):
        lift_pad(TargetVector.from_vector(np.ones(2)), 2)


def test_stratum():
    y = TargetVector(ex.exact_array([0, 0]), ex.exact_array([1, 0]))
    assert stratum_of(2, y) == "non_generic"
    assert stratum_of(3, y) == "generic"
    with pytest.raises(ZeroTarget):
        stratum_of(3, TargetVector(np.zeros(2), np.zeros(2)))


def test_point_validation():
    with pytest.raises(ValueError):
        PhiPoint(1, 2, [SymmetricParam.zeros(1, True)])
    with pytest.raises(ValueError):
        PhiPoint(2, 1, [SymmetricParam.zeros(1, True)])


@given(st.integers(1, 3), st.integers(1, 6), st.data())
def test_a_block_is_fixed_by_m(n, k, data):
    from sympfactor.phimap import a_block
    Z = data.draw(exact_symmetric(n))
    y = ex.exact_array(list(data.draw(exact_vectors(n))) + list(data.draw(exact_vectors(n))))
    A = a_block(k, y)
    assert exact_equal(m_matrix(k, Z) @ A, A)
