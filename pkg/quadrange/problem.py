"""
Problem files.

A problem file is a JSON (or YAML) mapping:

```
    {
        "n": 2,
        "A": [[0, 1], [1, 0]],
        "B": [[0, 0], [0, 0]],
        "a": [0, 0],
        "b": [1, 0],
        "k1": 0,
        "k2": 0,
        "convention": "plain",
        "cone": "zero"
    }
```

Only `A` and `B` are required. Entries are integers, "p/q" strings or
floats. A file holding any float is loaded in float mode (with a
warning), otherwise everything is exact. The `mode` argument of
load_problem forces either one.
"""

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import yaml

from .core import (
    DimensionMismatch, Mode, MixedModeError, NotSymmetric, QuadraticPair
)
from .optimize import ConstraintCone, as_cone


class InputError(Exception):
    """ Something wrong with an input problem def
    """


class AsymmetricMatrix(InputError):
    """ A or B in the problem def isn't symmetric
    """


KNOWN_KEYS = {"n", "A", "B", "a", "b", "k1", "k2", "convention", "cone",
              "name", "description"}


@dataclass(frozen=True)
class Problem:
    name: str
    pair: QuadraticPair
    cone: Optional[ConstraintCone] = None
    convention: str = "plain"
    description: str = ""


def _entry(value, where: str):
    if isinstance(value, bool):
        raise InputError("{}: booleans are not numbers".format(where))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError("{}: bad number {!r}".format(where, value)) from e
    raise InputError("{}: expected a number, got {!r}".format(where, value))


def _vector(data, key: str, n: int) -> list:
    values = data.get(key)
    if values is None:
        return [Fraction(0)] * n
    if not isinstance(values, list):
        raise InputError("{} must be a list".format(key))
    if len(values) != n:
        raise InputError("{} has {} entries, expected {}".format(key, len(values), n))
    return [_entry(v, "{}[{}]".format(key, i)) for i, v in enumerate(values)]


def _matrix(data, key: str) -> list:
    rows = data.get(key)
    if rows is None:
        raise InputError("Missing matrix {}".format(key))
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("{} must be a list of rows".format(key))
    n = len(rows)
    for i, r in enumerate(rows):
        if len(r) != n:
            raise InputError("{} row {} has {} entries, expected {}".format(key, i, len(r), n))
    M = [[_entry(v, "{}[{}][{}]".format(key, i, j)) for j, v in enumerate(r)]
         for i, r in enumerate(rows)]
    for i in range(n):
        for j in range(i + 1, n):
            if M[i][j] != M[j][i]:
                raise AsymmetricMatrix("{} is not symmetric at ({},{})".format(key, i, j))
    return M


def _coerce(values: list, mode: Mode) -> list:
    if mode is Mode.FLOAT:
        return [float(v) for v in values]
    # decimal text of the float, so 0.1 loads as 1/10
    return [Fraction(repr(v)) if isinstance(v, float) else v for v in values]


def problem_from_dict(data: dict, name: str = "problem", mode: Optional[Mode] = None) -> Problem:
    """ Build a Problem from a loaded mapping. `mode` None picks float
    mode when any entry is a float.
    """
    if not isinstance(data, dict):
        raise InputError("Problem def must be a mapping")
    unknown = set(data) - KNOWN_KEYS
    if unknown:
        raise InputError("Unknown problem keys {}".format(", ".join(sorted(unknown))))

    A = _matrix(data, "A")
    B = _matrix(data, "B")
    n = len(A)
    if len(B) != n:
        raise InputError("A is {0}x{0} but B is {1}x{1}".format(n, len(B)))
    if "n" in data and data["n"] != n:
        raise InputError("n = {} but the matrices are {}x{}".format(data["n"], n, n))
    a = _vector(data, "a", n)
    b = _vector(data, "b", n)
    k = [_entry(data.get("k1", 0), "k1"), _entry(data.get("k2", 0), "k2")]

    flat = [v for r in A + B for v in r] + a + b + k
    has_float = any(isinstance(v, float) for v in flat)
    if mode is None:
        mode = Mode.FLOAT if has_float else Mode.EXACT
        if has_float:
            logging.warning("%s: float entries, loading in float mode", name)

    convention = data.get("convention", "plain")
    if convention not in ("plain", "half"):
        raise InputError("Unknown convention {!r}".format(convention))

    cone = data.get("cone")
    if cone is not None:
        try:
            cone = as_cone(cone)
        except ValueError as e:
            raise InputError("Unknown cone {!r}".format(cone)) from e

    try:
        pair = QuadraticPair.build(
            [_coerce(r, mode) for r in A], [_coerce(r, mode) for r in B],
            _coerce(a, mode), _coerce(b, mode), *_coerce(k, mode),
            convention=convention)
    except NotSymmetric as e:
        raise AsymmetricMatrix(str(e)) from e
    except (DimensionMismatch, MixedModeError) as e:
        raise InputError(str(e)) from e

    logging.debug("loaded %s: n=%d, %s mode, %s convention", name, n, mode.value, convention)
    return Problem(str(data.get("name", name)), pair, cone, convention,
                   str(data.get("description", "")))


def load_problem(path: str, mode: Optional[Mode] = None) -> Problem:
    """ Load a problem file, JSON or YAML
    """
    try:
        with open(path) as inp:
            data = yaml.safe_load(inp.read())
    except OSError as e:
        raise InputError("Cannot read {}: {}".format(path, e)) from e
    except yaml.YAMLError as e:
        raise InputError("Cannot parse {}: {}".format(path, e)) from e
    name = os.path.splitext(os.path.basename(path))[0]
    return problem_from_dict(data, name, mode)
