"""RunConfig tests."""

import json
import os
from pathlib import Path

import pytest

from peterlin.experiments import PRESETS, RunConfig, read_config_file


def test_defaults():
    config = RunConfig()
    assert config.levels == [32, 64, 128]
    assert config.dt(32) == pytest.approx(1 / 64)
    assert config.assert_bands is False
    assert "assert_bands" in RunConfig.keys()
    assert config.to_dict()["t_end"] == 0.5


@pytest.mark.parametrize("preset", list(PRESETS))
def test_preset(preset):
    config = RunConfig.resolve(overrides={"preset": preset})
    assert (config.nu, config.eps) == (PRESETS[preset]["nu"], PRESETS[preset]["eps"])


def test_resolve_priority():
    config = RunConfig.resolve(
        {"preset": "diffusive", "nu": 0.5, "eps": 0.2, "t_end": 1.0},
        {"eps": 0.3, "t_end": None, "levels": "8,4"},
    )
    assert config.nu == 0.5
    assert config.eps == 0.3
    assert config.t_end == 1.0
    assert config.levels == [4, 8]


def test_override_preset_of_file():
    config = RunConfig.resolve({"preset": "diffusive"}, {"preset": "non-diffusive"})
    assert config.preset == "non-diffusive"
    assert config.eps == 0.0


@pytest.mark.parametrize(
    ("values", "message"),
    (
        ({"colour": "red"}, "Unknown configuration keys: colour"),
        ({"preset": "viscous"}, "'preset' should be one of"),
        ({"levels": []}, "'levels' should be a nonempty list"),
        ({"levels": "0,8"}, "'levels' should be positive"),
        ({"levels": [8, 8]}, "'levels' should be distinct"),
        ({"dt_ratio": 0}, "'dt_ratio' should be positive"),
        ({"workers": 0}, "'workers' should be at least 1"),
    ),
)
def test_resolve_errors(values, message):
    with pytest.raises(ValueError) as exc:
        RunConfig.resolve(values)
    assert message in str(exc.value)


def test_read_config_file(util):
    filename = Path(util.TMP_DIR) / "peterlin-config.json"
    filename.write_text(
        json.dumps({"t-end": 0.25, "assert": True, "levels": [8, 16], "nu": 1})
    )
    values = read_config_file(filename)
    assert values == {"t_end": 0.25, "assert_bands": True, "levels": [8, 16], "nu": 1}
    assert RunConfig.resolve(values).assert_bands is True
    os.remove(filename)


def test_read_config_file_requires_object(util):
    filename = os.path.join(util.TMP_DIR, "peterlin-config-list.json")
    with open(filename, "w") as file:
        json.dump([1, 2], file)
    with pytest.raises(ValueError) as exc:
        read_config_file(filename)
    assert "a JSON object is expected" in str(exc.value)
    os.remove(filename)
