from json import loads

import numpy as np
from pytest import fixture, raises

from crlab.config import Decoder, Validator, decode, dump, encode, load, parse
from crlab.exceptions import ConfigError
from crlab.lab import Lab
from crlab.models import ExperimentConfig

from tests import EXAMPLES_DIR


@fixture
def lab():
    with Lab(threads=1) as lab:
        yield lab


def test_load_example():
    config = load(EXAMPLES_DIR / "e1.json")

    assert config.experiment == "E1"
    assert config.family.name == "disk"
    assert config.resolution == {"polar_nodes": 64, "grid": 6}
    assert config.t == (0.0,)
    assert config.file_stem == "e1"


def test_decode_syntax_error():
    with raises(ConfigError) as e:
        decode('{"experiment": "E1",')
    assert e.value.code == "config_syntax"
    assert e.value.details["line"] == 1


def test_decode_t_values():
    assert decode('{"t": "0, 0.5, 1"}') == {"t": [0, 0.5, 1]}

    with raises(ConfigError) as e:
        decode('{"t": 0.5}')
    assert e.value.code == "config_value"
    assert e.value.path == "t"


def test_decoder_hooks():
    decoder = Decoder({"seed": int})
    assert decode('{"seed": "7", "t": [1]}', decoder) == {"seed": 7, "t": [1]}


def test_unknown_key():
    with raises(ConfigError) as e:
        load(EXAMPLES_DIR / "unknown_key.json")
    assert e.value.code == "config_unknown_key"
    assert e.value.path == "polar_nodes"


def test_unknown_experiment():
    with raises(ConfigError) as e:
        parse({"experiment": "E11"})
    assert e.value.code == "config_experiment"
    assert e.value.path == "experiment"


def test_nested_paths():
    with raises(ConfigError) as e:
        load(EXAMPLES_DIR / "bad_family.json")
    assert e.value.path == "family.box"

    with raises(ConfigError) as e:
        parse({"experiment": "E2", "resolution": {"quad_m": 4}})
    assert e.value.code == "config_unknown_key"
    assert e.value.path == "resolution.quad_m"

    with raises(ConfigError) as e:
        parse({"experiment": "E2", "resolution": {"quad_n": 0}})
    assert e.value.path == "resolution.quad_n"


def test_invalid_values():
    with raises(ConfigError) as e:
        parse({"experiment": "E7", "t": [0.5, 1.5]})
    assert e.value.path == "t"

    with raises(ConfigError) as e:
        parse({"experiment": "E5", "point": [1, 0, 0]})
    assert e.value.path == "point"


def test_expression_errors_carry_family_path():
    declaration = {"n": 1, "r": "abs2(z1", "box": [[-1, 1], [-1, 1]]}
    with raises(ConfigError) as e:
        parse({"experiment": "E1", "family": declaration})
    assert e.value.code == "config_value"
    assert e.value.path == "family"


def test_missing_file(tmp_path):
    with raises(ConfigError) as e:
        load(tmp_path / "missing.json")
    assert e.value.code == "config_syntax"


def test_encode_config():
    config = parse({"experiment": "E5", "family": "ball", "point": "1,0,0,0", "t": [0.5]})
    data = loads(encode(config))

    assert data["experiment"] == "E5"
    assert data["family"]["r"] == "abs2(z1)+abs2(z2)-1.0"
    assert data["point"] == [1.0, 0.0, 0.0, 0.0]

    again = parse(data)
    assert again.family.n == 2
    assert np.allclose(again.point, config.point)


def test_encode_numpy():
    assert loads(encode({"z": np.array([1j, 2.0]), "k": np.int64(3)})) == {
        "z": [0.0, 1.0, 2.0, 0.0],
        "k": 3,
    }


def test_custom_validator():
    class NotedValidator(Validator):
        def note(self, value, /, **kwargs):
            assert isinstance(value, str), "note must be a string"

    with Lab(validator=NotedValidator()) as lab:
        config = lab.config({"experiment": "E6", "note": "shorter run"})
    assert isinstance(config, ExperimentConfig)

    with raises(ConfigError):
        parse({"experiment": "E6", "note": "shorter run"})


def test_lab_family(lab):
    assert lab.family("ball").n == 2
    assert lab.family(EXAMPLES_DIR / "ball.json").name == "ball"

    with raises(ConfigError) as e:
        lab.family("torus")
    assert e.value.path == "family"


def test_lab_parse(lab):
    assert str(lab.parse("abs2(z1) + abs2(z2) - 1")) == "abs2(z1)+abs2(z2)-1.0"
    assert str(lab.parse("abs2(z1) - c", constants={"c": 2})) == "abs2(z1)-2.0"


def test_dump(tmp_path):
    config = load(EXAMPLES_DIR / "e6.json")
    dump(config, tmp_path / "e6.json")

    again = load(tmp_path / "e6.json")
    assert again.experiment == "E6"
    assert again.seed == config.seed
    assert again.resolution == config.resolution
