from fractions import Fraction

from quadrange.binary import surd_sign, Surd, SurdVector, binary_form_roots, on_ray
from quadrange.core import SymMatrix


def test_surd_sign():
    assert surd_sign(Fraction(1), Fraction(-1), Fraction(2)) == -1
    assert surd_sign(Fraction(2), Fraction(-1), Fraction(4)) == 0
    assert surd_sign(Fraction(3), Fraction(-2), Fraction(2)) == 1
    assert surd_sign(Fraction(0), Fraction(-1), Fraction(3)) == -1
    assert Surd(Fraction(-1), Fraction(1), Fraction(3)).sign() == 1


def test_surd_float():
    assert float(Surd(Fraction(1), Fraction(1), Fraction(4))) == 3.0


def test_binary_roots_rational():
    # y1^2 - y2^2
    roots = binary_form_roots(Fraction(1), Fraction(0), Fraction(-1))
    exact = {r.exact() for r in roots}
    assert exact == {(1, 1), (-1, 1)}


def test_binary_roots_irrational():
    # y1^2 - 2 y2^2 has roots (+-sqrt 2, 1)
    roots = binary_form_roots(Fraction(1), Fraction(0), Fraction(-2))
    assert len(roots) == 2
    S = SymMatrix.diagonal([1, -2])
    for r in roots:
        assert not r.is_rational
        assert r.quad(S).sign() == 0


def test_binary_roots_degenerate():
    assert binary_form_roots(Fraction(0), Fraction(0), Fraction(0)) is None
    assert binary_form_roots(Fraction(1), Fraction(0), Fraction(1)) == []
    assert len(binary_form_roots(Fraction(1), Fraction(1), Fraction(1))) == 1


def test_surd_vector_rational():
    v = SurdVector.rational((1, 2))
    assert v.is_rational
    assert v.exact() == (1, 2)
    assert v.negated().exact() == (-1, -2)


def test_on_ray():
    g = SurdVector.rational((1, 1))
    assert on_ray(g, (Fraction(2), Fraction(2)))
    assert not on_ray(g, (Fraction(-2), Fraction(-2)))
    assert not on_ray(g, (Fraction(0), Fraction(0)))
