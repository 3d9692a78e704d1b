import json
from fractions import Fraction as F

import pytest

from fourbody.config import RunConfig, config_from_dict, load_config, parse_rational
from fourbody.errors import ConfigError


def test_parse_rational():
    assert parse_rational("7/2", "d") == F(7, 2)
    assert parse_rational(0.25, "x") == F(1, 4)
    assert parse_rational(3, "x") == 3
    for bad in ("abc", True, None, [1]):
        with pytest.raises(ConfigError):
            parse_rational(bad, "x")


def test_defaults_validate():
    cfg = RunConfig().validate()
    assert cfg.mass_config.is_finite and cfg.d == 3 and cfg.gauge_params.values == (1,) * 6


def test_from_dict_and_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"masses": [1, "2", "3/2", 4], "d": "7/2", "gauge": {"a": 2}, "seed": 5}))
    cfg = load_config(str(path))
    assert cfg.d == F(7, 2) and cfg.gauge_params.a == 2 and cfg.gauge_params.b == 1
    assert cfg.mass_config.masses == (1, 2, F(3, 2), 4)
    cfg2 = load_config(str(path), {"seed": 9, "N": None})
    assert cfg2.seed == 9 and cfg2.N == cfg.N


@pytest.mark.parametrize("data", [
    {"masses": ["inf", "inf", 1, 1]},                       # generic with two infinite masses
    {"variant": "atomic", "masses": [1, 1, 1, 1]},
    {"variant": "molecular", "masses": ["inf", "inf", 1, 2]},
    {"masses": [1, 1, 1, -1]},
    {"N": 9},
    {"N": "2"},
    {"omega": 0},
    {"gauge": [1, 2]},
    {"suites": ["nope"]},
    {"seed": -1},
    {"format": "xml"},
    {"bogus": 1},
    {"gauge": {"h": 1}},
])
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        config_from_dict(data).validate()


def test_special_variant_accepts_leading_infinities():
    cfg = config_from_dict({"variant": "molecular", "masses": ["inf", "inf", 2, 2]}).validate()
    assert cfg.light_mass == 2 and cfg.model.classical_vars == (0,)
    assert cfg.finite_masses().masses == (2, 2, 2, 2)


def test_bad_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    with pytest.raises(ConfigError):
        load_config(str(p))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))


def test_round_trip_to_json():
    cfg = config_from_dict({"d": "5/2", "masses": [1, 2, 3, 4]})
    again = config_from_dict({k: v for k, v in cfg.to_json().items()})
    assert again == cfg
