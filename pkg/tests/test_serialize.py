import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympfactor import exact as ex
from sympfactor import serialize as ser
from sympfactor.elemsym import random_word, reconstruct
from sympfactor.factorizer import factorize
from sympfactor.phimap import TargetVector, random_point
from sympfactor.symcore import SymmetricParam

from conftest import exact_equal, exact_symmetric, gaussian_rational

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(finite, finite)
def test_float_scalar_round_trip(re, im):
    v, is_exact = ser.decode_scalar(json.loads(json.dumps(ser.encode_scalar(complex(re, im)))))
    assert not is_exact and v == complex(re, im)


@given(gaussian_rational)
def test_exact_scalar_round_trip(q):
    v, is_exact = ser.decode_scalar(json.loads(json.dumps(ser.encode_scalar(q))))
    assert is_exact and v == q


def test_scalar_input_forms():
    assert ser.decode_scalar(3) == (Fraction(3), True)
    assert ser.decode_scalar("1/3") == (Fraction(1, 3), True)
    assert ser.decode_scalar({"num": 2, "den": 4}) == (Fraction(1, 2), True)
    assert ser.decode_scalar(0.5) == (0.5, False)
    with pytest.raises(ValueError):
        ser.decode_scalar([1, 2, 3])
    with pytest.raises(ValueError):
        ser.decode_scalar(True)


def test_matrix_flavor_detection():
    assert ex.is_exact(ser.decode_matrix([[1, 0], [0, 1]]))
    assert not ex.is_exact(ser.decode_matrix([[1.0, 0], [0, 1]]))
    assert ex.is_exact(ser.decode_matrix({"M": [[[1, 2], [0, 1]]]}))
    assert not ex.is_exact(ser.decode_matrix([[1, 0], [0, 1]], exact=False))


@given(st.integers(1, 3).flatmap(exact_symmetric), st.booleans())
def test_symmetric_round_trip(Z, packed):
    back = ser.decode_symmetric(json.loads(ser.dumps(ser.encode_symmetric(Z, packed))))
    assert exact_equal(back.matrix, Z.matrix)


def test_symmetric_rejects_asymmetric():
    with pytest.raises(ValueError):
        ser.decode_symmetric([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        ser.decode_symmetric({"values": [1, 2, 3]})


def test_float_word_round_trip_is_bit_exact(rng):
    w = random_word(rng, 3, 6).to_float()
    back = ser.decode_word(json.loads(ser.dumps(ser.encode_word(w))), exact=False)
    for f, g in zip(w, back):
        assert f.side == g.side and np.array_equal(f.Z.matrix, g.Z.matrix)


def test_multiprecision_word_round_trip(rng):
    M = reconstruct(random_word(rng, 2, 5)).M
    res = factorize(M)
    assert res.precision is not None
    text = ser.dumps(ser.encode_word(res.word))
    back = ser.decode_word(json.loads(text))
    # mp entries are written as the rationals they hold, so nothing is lost
    assert back.exact
    for f, g in zip(res.word, back):
        assert exact_equal(ex.rational_array(f.Z.matrix), g.Z.matrix)
    assert ser.dumps(ser.encode_word(back)) == text


def test_point_and_target_round_trip(rng):
    p = random_point(rng, 2, 3)
    q = ser.decode_point(json.loads(ser.dumps(ser.encode_point(p))))
    assert all(np.array_equal(a.matrix, b.matrix) for a, b in zip(p.Zs, q.Zs))
    y = TargetVector(ex.exact_array([1, 0]), ex.exact_array([0, ex.gauss(0, 1)]))
    z = ser.decode_target(json.loads(ser.dumps(ser.encode_target(y))))
    assert exact_equal(z.vector, y.vector)


def test_dumps_is_canonical():
    assert ser.dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_field_specs():
    fs = ser.decode_field({"kind": "type4", "n": 2, "vars": [[1, 2, 1], [2, 1, 1], [2, 2, 2]]})
    assert fs.kind == "dx" and fs.K == 2
    assert all(fs.field.apply(q).is_zero() for q in fs.defining_polys())
    fs = ser.decode_field({"phi": {"tuple": {"n": 2, "vars": [[1, 2, 1], [2, 1, 1], [2, 2, 2]]},
                                   "jstar": 1, "K": 3}})
    assert fs.kind == "phi" and all(fs.field.apply(q).is_zero() for q in fs.defining_polys())
    fs = ser.decode_field({"gamma": {"n": 2, "i": 2, "j": 2, "jstar": 1, "K": 2}})
    assert fs.kind == "gamma" and all(fs.field.apply(q).is_zero() for q in fs.defining_polys())


def test_component_field_text_round_trip():
    obj = {"n": 1, "K": 2, "components": {"z2_11": "z1_11**2", "z1_11": "I*z2_11 - 1/3"}}
    fs = ser.decode_field(obj)
    again = ser.decode_field(ser.encode_field(fs.field))
    assert again.field.components == fs.field.components
    with pytest.raises(ValueError):
        ser.decode_field({"n": 1, "K": 1, "components": {"x": "1"}})
