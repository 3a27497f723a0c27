from fractions import Fraction

import numpy as np
import pytest
from pytest import approx

from quadrange.core import (
    SymMatrix, QuadraticFunction, QuadraticPair, PlaneDirection, Mode,
    DimensionMismatch, MixedModeError, NotSymmetric, ZeroDirection,
    eval_pair, hom_part, lin_part, cross_term, gradient, perp, li2, cross,
    primitive_vector, as_scalar,
)


def test_eval_pair(ex0):
    assert eval_pair(ex0, (0, 1)) == (0, 0)
    assert eval_pair(ex0, (-1, 0)) == (-2, 0)
    assert eval_pair(ex0, (0, 0)) == ex0.k == (0, -1)


def test_eval_exact_values_are_fractions(ex0):
    f, g = ex0((Fraction(1, 3), Fraction(1, 3)))
    assert isinstance(f, Fraction) and isinstance(g, Fraction)
    assert f == Fraction(2, 3) - Fraction(4, 9)
    assert g == Fraction(4, 9) - 1


def test_hom_and_lin_parts(ej_op0, ex0):
    assert hom_part(ej_op0, (3, 5)) == (30, 0)
    assert lin_part(ej_op0, (3, 5)) == (0, 3)
    assert hom_part(ej_op0, (0, 0)) == (0, 0)
    assert lin_part(ej_op0, (0, 0)) == (0, 0)
    assert hom_part(ex0, (1, 0)) == (-1, 1)


def test_homogeneity(ex0):
    u = (Fraction(2, 3), Fraction(-5, 7))
    t = Fraction(-3, 2)
    tu = tuple(t * x for x in u)
    h, th = hom_part(ex0, u), hom_part(ex0, tu)
    assert th == (t * t * h[0], t * t * h[1])
    l, tl = lin_part(ex0, u), lin_part(ex0, tu)
    assert tl == (t * l[0], t * l[1])


def test_cross_term(ej_op1, ex0):
    assert cross_term(ej_op1, (1, -1), (1, 1)) == (0, 0)
    assert cross_term(ej_op1, (0, 0), (4, 7)) == (0, 0)
    u, v = (Fraction(1, 2), Fraction(3)), (Fraction(-2), Fraction(5, 3))
    assert cross_term(ex0, u, v) == cross_term(ex0, v, u)
    s = tuple(a + b for a, b in zip(u, v))
    huv, hu, hv = hom_part(ex0, s), hom_part(ex0, u), hom_part(ex0, v)
    z = cross_term(ex0, u, v)
    assert (huv[0] - hu[0] - hv[0], huv[1] - hu[1] - hv[1]) == (2 * z[0], 2 * z[1])


def test_perp_and_li2():
    assert perp(PlaneDirection(1, 0)).as_point() == (0, 1)
    assert li2((1, 0), (2, 0)) is False
    assert li2((2, 0), (0, 1)) is True
    d = PlaneDirection(3, -4)
    p = perp(d).as_point()
    assert p[0] * d.d1 + p[1] * d.d2 == 0
    assert p[0] ** 2 + p[1] ** 2 == d.d1 ** 2 + d.d2 ** 2


def test_cross_antisymmetric():
    rng = np.random.default_rng(7)
    for _ in range(50):
        u = tuple(Fraction(int(x), int(y)) for x, y in zip(rng.integers(-9, 10, 2), rng.integers(1, 5, 2)))
        v = tuple(Fraction(int(x), int(y)) for x, y in zip(rng.integers(-9, 10, 2), rng.integers(1, 5, 2)))
        assert cross(u, v) == -cross(v, u)


def test_gradient(x1sq_minus_x2sq):
    assert gradient(x1sq_minus_x2sq.f, (0, 0)) == (0, 0)
    assert gradient(x1sq_minus_x2sq.g, (3, -8)) == (0, 1)
    assert gradient(x1sq_minus_x2sq.f, (1, 2)) == (2, -4)


def test_gradient_matches_finite_difference():
    rng = np.random.default_rng(11)
    M = rng.integers(-5, 6, (3, 3))
    A = (M + M.T).tolist()
    q = QuadraticFunction.build(A, rng.integers(-5, 6, 3).tolist(), 2).to_float()
    x = rng.standard_normal(3)
    h = 1e-6
    g = gradient(q, tuple(x))
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        fd = (q(tuple(x + e)) - q(tuple(x - e))) / (2 * h)
        assert g[i] == approx(fd, rel=1e-6, abs=1e-6)


def test_float_and_exact_agree(ex0):
    x = (Fraction(7, 3), Fraction(-11, 5))
    exact = ex0(x)
    floats = ex0.to_float()(tuple(float(v) for v in x))
    assert floats[0] == approx(float(exact[0]), rel=1e-12)
    assert floats[1] == approx(float(exact[1]), rel=1e-12)


def test_mixed_mode_rejected():
    with pytest.raises(MixedModeError):
        SymMatrix.from_rows([[1, 0.5], [0.5, 1]])
    pair = QuadraticPair.build([[1, 0], [0, 1]], [[0, 0], [0, 0]])
    with pytest.raises(MixedModeError):
        pair((0.5, 1))


def test_not_symmetric():
    with pytest.raises(NotSymmetric):
        SymMatrix.from_rows([[1, 2], [3, 4]])


def test_dimension_mismatch(ex0):
    with pytest.raises(DimensionMismatch):
        eval_pair(ex0, (1, 2, 3))
    with pytest.raises(DimensionMismatch):
        QuadraticPair.build([[1]], [[1, 0], [0, 1]])


def test_half_convention():
    q = QuadraticFunction.build([[2, 0], [0, 4]], convention="half")
    assert q.A == SymMatrix.diagonal([1, 2])
    assert q((1, 1)) == 3


def test_plane_direction_primitive():
    assert PlaneDirection(2, 4).as_point() == (1, 2)
    assert PlaneDirection(-2, 0).as_point() == (-1, 0)
    assert PlaneDirection(Fraction(1, 2), Fraction(1, 3)).as_point() == (3, 2)
    assert PlaneDirection(1, 0) != PlaneDirection(-1, 0)
    assert -PlaneDirection(1, 0) == PlaneDirection(-1, 0)
    with pytest.raises(ZeroDirection):
        PlaneDirection(0, 0)


def test_float_direction_unit_length():
    d = PlaneDirection(3.0, 4.0)
    assert d.mode is Mode.FLOAT
    assert d.as_point() == (approx(0.6), approx(0.8))


def test_primitive_vector():
    assert primitive_vector((Fraction(2, 3), Fraction(-4, 3), 0)) == (1, -2, 0)
    assert primitive_vector((0, 0)) == (0, 0)


def test_as_scalar():
    assert as_scalar("3/4") == Fraction(3, 4)
    assert as_scalar(2) == Fraction(2)
    assert isinstance(as_scalar(0.25), float)
    with pytest.raises(TypeError):
        as_scalar(True)


def test_exact_roundtrip(ex0):
    assert ex0.to_float().exact() == ex0
    assert ex0.to_float().mode is Mode.FLOAT
