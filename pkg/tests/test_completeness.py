import numpy as np
import pytest

from sympfactor.polyfield.completeness import (COMPLETE, FAILS, certify, completeness_check,
                                               incompleteness_witness, verify_type_table)
from sympfactor.polyfield.fields import (TupleSpec, enumerate_type, example_incomplete, ptilde,
                                         type1, type3, type4)
from sympfactor.polyfield.poly import Z, zvar


def test_linear_field_is_complete():
    x = TupleSpec(1, [zvar(1, 1, 1), zvar(2, 1, 1)])
    res = completeness_check(x, ptilde(1, 2))
    assert res.status == COMPLETE and res.system is not None


def test_quadratic_self_dependence_fails():
    # P = z1^2 z2 gives V = (z1^2, -2 z1 z2); the z1 flow blows up
    x = TupleSpec(1, [zvar(1, 1, 1), zvar(2, 1, 1)])
    P = [Z(1, 1, 1) ** 2 * Z(2, 1, 1)]
    res = completeness_check(x, P)
    assert res.status == FAILS
    w = incompleteness_witness(x, P)
    assert w is not None and w.degree >= 2


def test_example_incomplete_is_flagged():
    for n in (2, 3):
        x = example_incomplete(n)
        P = ptilde(n, 2)
        assert not completeness_check(x, P).complete
        w = incompleteness_witness(x, P)
        assert w is not None and w.variable == zvar(2, n, 1) and w.degree == 2


@pytest.mark.parametrize("x", [type1(2, 2, 1), type1(3, 3, 2), type4(2, 2),
                               type3(2, 1, [(1, 1), (1, 2), (2, 2)])])
def test_listed_tuples_certified(x):
    assert certify(x).complete
    assert completeness_check(x, ptilde(x.n, x.max_level)).complete


def test_bound_system_matches_field(rng):
    x = type1(2, 2, 1)
    res = completeness_check(x, ptilde(2, 2))
    from sympfactor.phimap import random_point
    from sympfactor.polyfield.fields import partial_field, point_values
    vals = point_values(random_point(rng, 2, 2))
    sys = res.system.bind(vals)
    x0 = np.array([vals[v] for v in x.vars])
    V = partial_field(x, 2)
    direct = np.array([V.components.get(v).eval(vals) if v in V.components else 0 for v in x.vars])
    assert np.max(np.abs(sys.A @ x0 + sys.b - direct)) <= 1e-10


def test_arity_check():
    with pytest.raises(ValueError):
        completeness_check([zvar(1, 1, 1)], ptilde(1, 2))


@pytest.mark.parametrize("n,K", [(2, 3), (3, 4)])
def test_type_table(n, K):
    rep = verify_type_table(n, K)
    assert rep.passed, rep.as_dict()
    assert all(r["checked"] == len(enumerate_type(k, n, K)) for k, r in rep.per_type.items())
