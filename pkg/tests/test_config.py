import json

import pytest

from sympfactor.config import TOL_FACTOR, Config


def test_defaults():
    cfg = Config()
    assert cfg.tol_factor == TOL_FACTOR and cfg.mode == "float" and cfg.seed == 0


def test_validation():
    with pytest.raises(ValueError):
        Config(tol_rank=-1.0)
    with pytest.raises(ValueError):
        Config(mode="symbolic")


def test_precedence(tmp_path, monkeypatch):
    path = tmp_path / "c.toml"
    path.write_text("[sympfactor]\ntol_rank = 1e-9\nseed = 7\n")
    monkeypatch.setenv("SYMPFACTOR_SEED", "99")
    cfg = Config.load(path)
    assert cfg.tol_rank == 1e-9 and cfg.seed == 7
    assert Config.load(path, {"seed": 3, "tol_rank": None}).seed == 3
    assert Config.load(None).seed == 99


def test_json_config_and_unknown_keys(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"mode": "exact"}))
    assert Config.load(path).mode == "exact"
    path.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(ValueError):
        Config.load(path)


def test_with_and_as_dict():
    cfg = Config().with_(seed=5)
    assert cfg.as_dict()["seed"] == 5
