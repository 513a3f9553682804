import os
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sympfactor import exact as ex

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_fraction = st.fractions(min_value=-5, max_value=5, max_denominator=7)
gaussian_rational = st.builds(ex.gauss, small_fraction, small_fraction)


@st.composite
def exact_vectors(draw, n, nonzero=False):
    v = ex.exact_array([draw(gaussian_rational) for _ in range(n)])
    if nonzero and all(x == 0 for x in v):
        v[draw(st.integers(0, n - 1))] = Fraction(1)
    return v


@st.composite
def exact_symmetric(draw, n):
    from sympfactor.symcore import SymmetricParam
    m = ex.zeros((n, n), True)
    for i in range(n):
        for j in range(i, n):
            m[i, j] = m[j, i] = draw(gaussian_rational)
    return SymmetricParam(m)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def exact_equal(A, B) -> bool:
    A, B = np.asarray(A), np.asarray(B)
    return A.shape == B.shape and all(A[i] == B[i] for i in np.ndindex(A.shape))
