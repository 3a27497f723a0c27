from fractions import Fraction
import logging

import pytest

from quadrange.core import Mode, SymMatrix
from quadrange.optimize import ConstraintCone
from quadrange.problem import (
    load_problem, problem_from_dict, InputError, AsymmetricMatrix,
)


def input_file(name):
    return "tests/input/{}".format(name)


def test_load_json():
    problem = load_problem(input_file("unbounded.json"))
    assert problem.name == "unbounded"
    assert problem.cone is ConstraintCone.ZERO
    assert problem.pair.mode is Mode.EXACT
    assert problem.pair.A[0, 1] == Fraction(1, 2)
    assert problem.pair.k == (0, 1)
    assert problem.description == "min x1 x2 on x1 = -1"


def test_load_half_convention():
    problem = load_problem(input_file("half.yml"))
    assert problem.convention == "half"
    assert problem.pair.A == SymMatrix.diagonal([1, Fraction(1, 3)])
    assert problem.pair.B == SymMatrix.from_rows([[0, 1], [1, 0]])
    assert problem.pair.k[0] == Fraction(1, 2)
    assert problem.cone is ConstraintCone.NONNEG


def test_float_mode_warns(caplog):
    with caplog.at_level(logging.WARNING):
        problem = load_problem(input_file("float_pair.yml"))
    assert problem.pair.mode is Mode.FLOAT
    assert "float mode" in caplog.text


def test_forced_exact_mode():
    problem = load_problem(input_file("float_pair.yml"), mode=Mode.EXACT)
    assert problem.pair.mode is Mode.EXACT
    assert problem.pair.A[1, 1] == Fraction(1, 2)


def test_forced_float_mode():
    problem = load_problem(input_file("unbounded.json"), mode=Mode.FLOAT)
    assert problem.pair.mode is Mode.FLOAT
    assert problem.pair.A[0, 1] == 0.5


def test_asymmetric():
    with pytest.raises(AsymmetricMatrix):
        load_problem(input_file("asymmetric.json"))


def test_unknown_key():
    with pytest.raises(InputError, match="Unknown problem keys c"):
        load_problem(input_file("bad_key.json"))


def test_unreadable():
    with pytest.raises(InputError):
        load_problem(input_file("no_such_problem.json"))
    with pytest.raises(InputError):
        load_problem(input_file("broken.yml"))


def test_bad_entries():
    base = {"A": [[1, 0], [0, 1]], "B": [[0, 0], [0, 0]]}
    with pytest.raises(InputError):
        problem_from_dict(dict(base, a=[1, 2, 3]))
    with pytest.raises(InputError):
        problem_from_dict(dict(base, k1="one"))
    with pytest.raises(InputError):
        problem_from_dict(dict(base, k1=True))
    with pytest.raises(InputError):
        problem_from_dict(dict(base, n=3))
    with pytest.raises(InputError):
        problem_from_dict(dict(base, cone="positive"))
    with pytest.raises(InputError):
        problem_from_dict(dict(base, convention="third"))
    with pytest.raises(InputError):
        problem_from_dict(dict(base, B=[[1]]))
    with pytest.raises(InputError):
        problem_from_dict({"A": [[1, 0], [0, 1]]})
    with pytest.raises(InputError):
        problem_from_dict([1, 2])


def test_defaults():
    problem = problem_from_dict({"A": [[1]], "B": [["-2/4"]]}, name="tiny")
    assert problem.name == "tiny"
    assert problem.cone is None
    assert problem.pair.B[0, 0] == Fraction(-1, 2)
    assert problem.pair.a == (0,)
    assert problem.pair.k == (0, 0)
