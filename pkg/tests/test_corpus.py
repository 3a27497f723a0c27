import pytest

from quadrange import corpus
from quadrange.problem import load_problem


def test_names():
    assert len(corpus.names()) == 11
    assert corpus.names()[0] == "ex0"
    with pytest.raises(KeyError):
        corpus.get_example("nope")


@pytest.mark.parametrize("name", corpus.names())
def test_example_passes(name):
    result = corpus.run_example(name)
    assert result.passed, result.failures


@pytest.mark.parametrize("name", corpus.names())
def test_docs_file_matches(name):
    problem = load_problem("docs/examples/{}.json".format(name))
    ex = corpus.load_example(name)
    assert problem.pair == ex.pair
    assert problem.cone == ex.cone


def test_failing_check_is_reported():
    def boom(problem):
        raise RuntimeError("broken check")

    corpus.example("boom", "raises", {"A": [[1]], "B": [[0]]})(boom)
    try:
        result = corpus.run_example("boom")
        assert not result.passed
        assert "RuntimeError" in result.failures[0]
    finally:
        del corpus._registry["boom"]


def test_duplicate_name_rejected():
    with pytest.raises(ValueError):
        corpus.example("ex0", "again", {})(lambda problem: [])
