import io
import json

import numpy as np
import pytest

from sympfactor import serialize as ser
from sympfactor.cli import run
from sympfactor.elemsym import random_word, reconstruct


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def write(path, obj):
    path.write_text(json.dumps(obj))
    return path


@pytest.fixture
def symplectic_file(tmp_path):
    M = reconstruct(random_word(np.random.default_rng(1), 2, 5)).M
    return write(tmp_path / "m.json", {"M": ser.encode_matrix(M)}), M


def test_validate(tmp_path):
    code, out, _ = call("validate", write(tmp_path / "i.json", np.eye(4, dtype=int).tolist()))
    assert code == 0 and json.loads(out) == {"residual": 0, "symplectic": True}
    code, out, _ = call("validate", write(tmp_path / "b.json", [[1, 2], [0, 2]]))
    assert code == 2 and json.loads(out)["symplectic"] is False


def test_factor_reconstruct_round_trip(tmp_path, symplectic_file):
    path, M = symplectic_file
    code, out, err = call("factor", path, "--emit", tmp_path / "w.json")
    assert code == 0 and "factors" in err
    res = json.loads(out)
    assert res["factor_count"] <= res["bound"] == 13 and res["residual"] <= 1e-8
    code, out, _ = call("reconstruct", tmp_path / "w.json")
    assert code == 0
    R = ser.decode_matrix(json.loads(out)["M"])
    assert np.max(np.abs(R - M)) <= 1e-8 * max(1, np.max(np.abs(M)))


def test_factor_is_byte_identical_across_runs(symplectic_file):
    path, _ = symplectic_file
    assert call("factor", path)[1] == call("factor", path)[1]


def test_exact_factorization(tmp_path):
    path = write(tmp_path / "k.json", [[2, 0], [0, "1/2"]])
    code, out, _ = call("factor", path)
    assert code == 0 and json.loads(out)["residual"] == 0
    code, out, _ = call("reconstruct", write(tmp_path / "w.json", json.loads(out)["word"]), "--exact")
    assert json.loads(out)["M"][1][1] == [{"num": 1, "den": 2}, {"num": 0, "den": 1}]


def test_tolerance_failure_exits_3(symplectic_file):
    path, _ = symplectic_file
    code, out, err = call("factor", path, "--tol-factor", "1e-300")
    assert code == 3 and "check failed" in err and json.loads(out)["residual"] > 0


def test_usage_errors_exit_1(tmp_path):
    assert call()[0] == 1
    assert call("factor")[0] == 1
    assert call("factor", tmp_path / "missing.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("validate", bad)[0] == 1
    assert call("validate", write(tmp_path / "i.json", [[1, 0], [0, 1]]), "--tol-symp", "-1")[0] == 1
    assert call("fields", "check-type", "--type", "type9", "--n", "2", "--K", "3")[0] == 1


def test_lift_and_phi(tmp_path):
    target = write(tmp_path / "t.json", {"a": [[1, 0], [0, 2]], "b": [[0, 0], [1, 0]]})
    code, out, _ = call("lift", "--target", target, "--K", "4")
    assert code == 0
    res = json.loads(out)
    assert res["residual"] <= 1e-10 and res["in_WK"]
    point = write(tmp_path / "p.json", res["point"])
    code, out, _ = call("phi", "--point", point)
    phi = ser.decode_array(json.loads(out)["phi"], 1)
    assert np.allclose(phi.astype(complex), [1, 2j, 0, 1])


def test_lift_zero_target_is_domain_error(tmp_path):
    target = write(tmp_path / "t.json", {"a": [0, 0], "b": [0, 0]})
    assert call("lift", "--target", target, "--K", "3")[0] == 2


def test_classify(tmp_path):
    p = write(tmp_path / "p.json", {"n": 1, "K": 3, "Zs": [[[1]], [[0]], [[0]]]})
    code, out, _ = call("classify", "--point", p)
    assert code == 0 and json.loads(out)["in_WK"] is True


def test_fields_commands(tmp_path):
    code, out, _ = call("fields", "check-type", "--type", "type1", "--n", "2", "--K", "3")
    assert code == 0 and json.loads(out)["passed"]
    spec = write(tmp_path / "f.json", {"kind": "type4", "n": 2, "vars": [[1, 2, 1], [2, 1, 1], [2, 2, 2]]})
    code, out, _ = call("fields", "lie", "--spec", spec)
    res = json.loads(out)
    assert code == 0 and res["zero"] and res["completeness"]["status"] == "complete_by_criterion"
    point = write(tmp_path / "p.json", {"n": 2, "K": 2, "Zs": [[[1, 0], [0, 1]], [["1/2", 1], [1, 0]]]})
    code, out, _ = call("fields", "flow", "--spec", spec, "--point", point, "--t", "0.5,1")
    assert code == 0 and json.loads(out)["drift"] <= 1e-8


def test_component_flow_not_certified(tmp_path):
    spec = write(tmp_path / "c.json", {"n": 1, "K": 2, "components": {"z2_11": "z2_11**2"}})
    point = write(tmp_path / "p.json", {"n": 1, "K": 2, "Zs": [[[1]], [[1]]]})
    assert call("fields", "flow", "--spec", spec, "--point", point, "--t", "1")[0] == 2


def test_span(tmp_path):
    rng = np.random.default_rng(4)
    from sympfactor.phimap import random_point
    point = write(tmp_path / "p.json", ser.encode_point(random_point(rng, 2, 3)))
    code, out, _ = call("span", "--point", point)
    res = json.loads(out)
    assert code == 0 and res["dominated"] and res["kernel_dim"] == 5


def test_selftest_subset():
    code, out, err = call("selftest", "--only", "1,7")
    assert code == 0 and json.loads(out)["passed"]
    assert err.count("PASS") == 2
    assert call("selftest", "--only", "1,7")[1] == out
    assert call("selftest", "--only", "12")[0] == 1
