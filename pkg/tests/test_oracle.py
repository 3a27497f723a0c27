from fractions import Fraction

import numpy as np
from pytest import approx

from quadrange.config import settings
from quadrange.convexity import joint_range_contains
from quadrange.core import eval_pair
from quadrange.optimize import ConstraintCone
from quadrange.oracle import (
    sample_cloud, ball_points, pair_arrays, evaluate, reach, convexity_probe,
    ProbeVerdict, dual_value_eig, validate_certificate,
)


def test_evaluate_matches_exact(ex0):
    X = np.array([[0.0, 1.0], [-1.0, 0.0], [0.5, 0.25]])
    values = evaluate(pair_arrays(ex0), X)
    for x, v in zip(X, values):
        exact = eval_pair(ex0, tuple(Fraction(float(t)) for t in x))
        assert tuple(v) == approx((float(exact[0]), float(exact[1])))


def test_sample_cloud(ex0):
    cloud = sample_cloud(ex0, seed=1)
    lo, hi = settings["oracle"]["radii"]
    expected = 1 + (hi - lo + 1) * settings["oracle"]["angles"] + settings["oracle"]["ball"]
    assert len(cloud) == expected
    assert cloud.values.shape == (expected, 2)
    again = sample_cloud(ex0, seed=1)
    assert np.array_equal(cloud.points, again.points)


def test_ball_points():
    pts = ball_points(np.random.default_rng(0), 200, 3, 2.5)
    assert pts.shape == (200, 3)
    assert np.all(np.linalg.norm(pts, axis=1) <= 2.5 + 1e-12)


def test_reach(identity_pair):
    arrays = pair_arrays(identity_pair)
    starts = np.array([[1.0, 1.0], [0.3, -2.0]])
    x, residual = reach(arrays, np.array([4.0, 0.0]), starts)
    assert residual < 1e-8
    assert x @ x == approx(4.0)


def test_probe_finds_witness(ex0):
    result = convexity_probe(ex0, seed=42)
    assert result.verdict is ProbeVerdict.NONCONVEX
    p, q, m = result.witness
    assert m == ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    assert joint_range_contains(ex0, m) is False
    assert result.stats["confirmed"] == 1


def test_probe_convex(identity_pair):
    result = convexity_probe(identity_pair, trials=32, seed=42)
    assert result.verdict is ProbeVerdict.PROBABLY_CONVEX
    assert result.witness is None
    assert result.stats["trials"] == 32


def test_probe_is_reproducible(ex0):
    first = convexity_probe(ex0, seed=7)
    second = convexity_probe(ex0, seed=7)
    assert first.witness == second.witness
    assert first.stats == second.stats


def test_dual_value_eig(ej_sinsd1):
    assert dual_value_eig(ej_sinsd1, 1) == approx(-0.25)
    assert dual_value_eig(ej_sinsd1, -1) == float("-inf")


def test_validate_certificate(ej_sinsd1):
    assert validate_certificate(ej_sinsd1, 1, ConstraintCone.ZERO, Fraction(-1, 4))
    assert not validate_certificate(ej_sinsd1, 1, ConstraintCone.ZERO, 0)
    assert validate_certificate(ej_sinsd1, -1, ConstraintCone.ZERO, None)
    assert not validate_certificate(ej_sinsd1, -1, ConstraintCone.NONNEG, None)
    assert not validate_certificate(ej_sinsd1, -1, "zero", Fraction(-1, 4))
