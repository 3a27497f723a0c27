import pytest

from quadrange import corpus
from quadrange.config import DEFAULT_SETTINGS, use_settings
from quadrange.core import QuadraticPair


@pytest.fixture(autouse=True)
def default_settings():
    """ Every test starts and ends on the default settings
    """
    use_settings(DEFAULT_SETTINGS)
    yield
    use_settings(DEFAULT_SETTINGS)


@pytest.fixture
def ex0():
    """ f = x1 + x2 - (x1 + x2)^2, g = (x1 + x2)^2 - 1
    """
    return corpus.load_example("ex0").pair


@pytest.fixture
def ej_op0():
    """ f = 2 x1 x2, g = x1
    """
    return corpus.load_example("ej_op0").pair


@pytest.fixture
def ej_op00():
    """ A = diag(1, 0, -1), B = diag(0, 1, -1)
    """
    return corpus.load_example("ej_op00").pair


@pytest.fixture
def ej_op1():
    """ A = [[0, 1], [1, 0]], B = 0
    """
    return corpus.load_example("ej_op1").pair


@pytest.fixture
def ej_reff():
    """ A = [[1, 1], [1, 1]], B = diag(1, -1)
    """
    return corpus.load_example("ej_reff").pair


@pytest.fixture
def ej_s_lema():
    """ f = x1^2, g = 2 x1 x2 + 1
    """
    return corpus.load_example("ej_s_lema").pair


@pytest.fixture
def ej_sinsd1():
    """ f = x1 + x2, g = (x1 + x2)^2
    """
    return corpus.load_example("ej_sinsd1").pair


@pytest.fixture
def x1sq():
    """ f = x1^2, g = x2
    """
    return corpus.load_example("x1sq").pair


@pytest.fixture
def x1sq_minus_x2sq():
    """ f = x1^2 - x2^2, g = x2
    """
    return corpus.load_example("x1sq_minus_x2sq").pair


@pytest.fixture
def x1x2():
    """ f = x1 x2, g = x1 + 1
    """
    return corpus.load_example("x1x2_x1plus1").pair


@pytest.fixture
def identity_pair():
    """ f = |x|^2, g = 0 on R^2
    """
    return QuadraticPair.build([[1, 0], [0, 1]], [[0, 0], [0, 0]])
