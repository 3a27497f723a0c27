import copy
import os
from typing import Optional

import yaml


class ConfigError(ValueError):
    """ Bad settings override file or environment value
    """


DEFAULT_SETTINGS = {
    "tolerance": {
        # relative: thresholds are rel * (1 + max |entry|)
        "relative": 1e-9,
        "witness_denominator": 10**6,
        "strong_duality": 1e-8,
        "certificate": 1e-6,
    },
    "sweep": {
        "grid": 720,
        "golden": 1e-10,
        # margin above which a definite member is confirmed exactly
        "confirm": 1e-6,
    },
    "psd": {
        "bound": 1e9,
        "bisect": 1e-10,
    },
    "dual": {
        "iterations": 200,
        "offset": 1e-12,
        # feasible upper bound search: tau = 2^k, k < doublings
        "doublings": 40,
    },
    "oracle": {
        "seed": 0xD1ED5,
        "trials": 256,
        "starts": 16,
        "iterations": 30,
        "residual": 1e-4,
        "radii": [-8, 8],
        "angles": 64,
        "ball": 512,
    },
    "plot": {
        "viewport": 800,
        "samples": 2000,
        "radius": 4.0,
    },
}

settings = copy.deepcopy(DEFAULT_SETTINGS)


def _merge(base: dict, override: dict, path: str = ""):
    for key, value in override.items():
        if key not in base:
            raise ConfigError("Unknown setting {}{}".format(path, key))
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError("Setting {}{} must be a mapping".format(path, key))
            _merge(base[key], value, "{}{}.".format(path, key))
        else:
            base[key] = value


def parse_seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError as e:
        raise ConfigError("Bad seed {!r}".format(text)) from e


def load_settings(path: Optional[str] = None, environ: Optional[dict] = None) -> dict:
    """ Defaults, then the YAML file at `path`, then QUADRANGE_SEED
    """
    loaded = copy.deepcopy(DEFAULT_SETTINGS)
    if path is not None:
        try:
            with open(path) as inp:
                override = yaml.safe_load(inp.read()) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError("Cannot load settings {}: {}".format(path, e)) from e
        if not isinstance(override, dict):
            raise ConfigError("Settings file must hold a mapping")
        _merge(loaded, override)
    environ = os.environ if environ is None else environ
    if environ.get("QUADRANGE_SEED"):
        loaded["oracle"]["seed"] = parse_seed(environ["QUADRANGE_SEED"])
    return loaded


def use_settings(new: dict):
    """ Swap the module-wide settings in place, so `from .config import
    settings` references stay valid
    """
    fresh = copy.deepcopy(new)
    settings.clear()
    settings.update(fresh)
