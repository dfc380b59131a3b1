import pytest

from adelicert import config


@pytest.mark.parametrize("name", ["example_1_3.json", "example_1_5.json", "example_1_6.json"])
def test_bundled_configs_parse(name):
    cfg = config.parse(config.bundled(name))
    assert cfg.curve is not None and cfg.class_data is not None


def test_class_data_round_trip(cfg15):
    cd = cfg15.class_data
    again = type(cd).from_json(cfg15.field, cd.to_json())
    assert again == cd


def test_missing_field_is_config_error():
    with pytest.raises(config.ConfigError):
        config.parse({"curve": {"roots": [[0], [1], [2]]}})


def test_ainvs_length_checked():
    raw = config.bundled("example_1_6.json")
    raw["curve"] = {"ainvs": [[1, 0, 0]]}
    with pytest.raises(config.ConfigError):
        config.parse(raw)


def test_bad_unit_is_config_error():
    raw = config.bundled("example_1_3.json")
    raw["class_data"]["fundamental_unit"] = ["2", "0", "0"]
    with pytest.raises(config.ConfigError):
        config.parse(raw)
