from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympfactor import exact as ex
from sympfactor.elemsym import (ElementaryFactor, FactorWord, NotSymplectic, k_matrix,
                                random_word, reconstruct)
from sympfactor.factorizer import (NotUnimodular, ResidualTooLarge, embed_matrix, embed_psi,
                                   factor_bound, factor_sl2, factorize, sp_inverse)

from conftest import exact_equal, exact_symmetric


def test_factor_bound_values():
    assert [factor_bound(n) for n in range(1, 6)] == [4, 13, 27, 46, 70]
    with pytest.raises(ValueError):
        factor_bound(0)


def test_factor_sl2_example():
    w = factor_sl2(ex.exact_array([[2, 3], [1, 2]]))
    assert [(f.side, f.Z.matrix[0, 0]) for f in w] == [("upper", 1), ("lower", 1), ("upper", 1)]


def test_factor_sl2_zero_pivot():
    M = ex.exact_array([[2, 0], [0, Fraction(1, 2)]])
    w = factor_sl2(M)
    assert len(w) == 4
    assert [(f.side, f.Z.matrix[0, 0]) for f in w] == [
        ("lower", -1), ("upper", Fraction(1, 2)), ("lower", 2), ("upper", Fraction(-1, 4))]
    assert exact_equal(reconstruct(w).M, M)


def test_factor_sl2_identity_and_bad_det():
    assert len(factor_sl2(ex.eye(2, True))) == 0
    with pytest.raises(NotUnimodular):
        factor_sl2(ex.exact_array([[1, 1], [1, 1]]))


def test_embedding_commutes_with_reconstruct(rng):
    w = random_word(rng, 2, 5)
    assert np.max(np.abs(reconstruct(embed_psi(w)).M - embed_matrix(reconstruct(w).M))) <= 1e-12


def test_sp_inverse(rng):
    M = reconstruct(random_word(rng, 3, 5)).M
    assert np.max(np.abs(sp_inverse(M) @ M - np.eye(6))) <= 1e-10


@given(st.integers(1, 3).flatmap(lambda n: st.lists(
    st.tuples(st.sampled_from(["upper", "lower"]), exact_symmetric(n)), min_size=1, max_size=5).map(
    lambda fs: FactorWord(n, [ElementaryFactor(s, Z) for s, Z in fs]))))
def test_exact_round_trip(w):
    M = reconstruct(w, exact=True).M
    res = factorize(M)
    assert res.reconstruction_residual == 0 and res.precision is None
    assert res.factor_count <= factor_bound(w.n)
    assert exact_equal(reconstruct(res.word).M, M)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_float_round_trip(rng, n):
    for _ in range(15):
        M = reconstruct(random_word(rng, n, int(rng.integers(1, 9)))).M
        res = factorize(M)
        assert res.reconstruction_residual <= 1e-8
        assert res.factor_count <= factor_bound(n)
        R = reconstruct(res.word.to_float()).M
        assert np.max(np.abs(R - M)) <= 1e-8 * max(1, np.max(np.abs(M)))


def test_identity_gives_empty_word():
    res = factorize(np.eye(6))
    assert res.factor_count == 0 and res.reconstruction_residual == 0


def test_k_matrices_factor():
    for n in (2, 3):
        M = k_matrix(1, n, ex.gauss(2, -1), n).M
        res = factorize(M)
        assert exact_equal(reconstruct(res.word).M, M)


def test_compact_option(rng):
    M = reconstruct(random_word(rng, 3, 6)).M
    res = factorize(M, do_compact=True)
    assert all(a.side != b.side for a, b in zip(res.word.factors, res.word.factors[1:]))
    assert res.reconstruction_residual <= 1e-8


def test_double_precision_path(rng):
    M = reconstruct(random_word(rng, 2, 4)).M
    res = factorize(M, precision=53, check=False)
    assert res.precision == 53 and res.reconstruction_residual < 1e-6


def test_residual_check_raises():
    M = reconstruct(random_word(np.random.default_rng(3), 2, 4)).M
    with pytest.raises(ResidualTooLarge) as info:
        factorize(M, tol_factor=1e-300)
    assert info.value.result is not None


def test_rejects_non_symplectic():
    with pytest.raises(NotSymplectic):
        factorize(np.diag([2.0, 1.0]))
