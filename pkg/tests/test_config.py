import pytest

from quadrange.config import (
    DEFAULT_SETTINGS, ConfigError, load_settings, parse_seed, settings, use_settings,
)


def test_defaults():
    loaded = load_settings(environ={})
    assert loaded == DEFAULT_SETTINGS
    assert loaded is not DEFAULT_SETTINGS


def test_file_override():
    loaded = load_settings("tests/input/settings.yml", environ={})
    assert loaded["oracle"]["seed"] == 7
    assert loaded["oracle"]["trials"] == 64
    assert loaded["oracle"]["starts"] == DEFAULT_SETTINGS["oracle"]["starts"]
    assert loaded["plot"]["samples"] == 500


def test_unknown_setting():
    with pytest.raises(ConfigError, match="oracle.seeds"):
        load_settings("tests/input/bad_settings.yml", environ={})


def test_env_seed():
    loaded = load_settings("tests/input/settings.yml", environ={"QUADRANGE_SEED": "0x10"})
    assert loaded["oracle"]["seed"] == 16


def test_parse_seed():
    assert parse_seed("42") == 42
    assert parse_seed("0xD1ED5") == 0xD1ED5
    with pytest.raises(ConfigError):
        parse_seed("forty")


def test_use_settings_in_place():
    ref = settings
    changed = load_settings(environ={})
    changed["sweep"]["grid"] = 90
    use_settings(changed)
    assert ref["sweep"]["grid"] == 90
    changed["sweep"]["grid"] = 10
    assert ref["sweep"]["grid"] == 90
