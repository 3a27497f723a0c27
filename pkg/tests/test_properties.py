from fractions import Fraction

import numpy as np

from quadrange.config import settings
from quadrange.core import QuadraticPair, hom_part
from quadrange.cones import classify_hom_range, nd_check, property_battery
from quadrange.convexity import (
    alternative_check, at_most_two_directions, augmented_convexity, joint_range_convexity,
)
from quadrange.optimize import (
    ConstraintCone, KktVerdict, MuStatus, dual_value, epigraph_convexity, kkt_check,
    slater_check, solve_dual,
)
from quadrange.oracle import convexity_probe, ProbeVerdict, ball_points, evaluate, pair_arrays


def random_pair(rng, n=2, low=-3, high=3, proportional=False, homogeneous=False):
    def sym():
        M = rng.integers(low, high + 1, (n, n))
        return (M + M.T).tolist()
    A = sym()
    if proportional:
        r = int(rng.integers(-2, 3))
        B = [[r * x for x in row] for row in A]
    else:
        B = sym()
    if homogeneous:
        return QuadraticPair.build(A, B)
    a, b = rng.integers(low, high + 1, (2, n)).tolist()
    k1, k2 = rng.integers(low, high + 1, 2).tolist()
    return QuadraticPair.build(A, B, a, b, k1, k2)


def random_n(rng, high=4):
    return int(rng.integers(1, high + 1))


def random_point(rng, n):
    return tuple(Fraction(int(p), int(q)) for p, q in zip(rng.integers(-9, 10, n),
                                                           rng.integers(1, 5, n)))


def matvec(M, x):
    return [sum(Fraction(int(M[i][j])) * x[j] for j in range(len(x))) for i in range(len(x))]


def light_oracle():
    """ Fewer samples and Gauss-Newton steps, for probing hundreds of pairs
    """
    settings["oracle"].update(starts=6, iterations=12, angles=16, ball=64, radii=[-2, 4])


def kkt_instance(rng, n):
    """ A pair built around a known minimizer: A + lam B positive definite,
    x stationary for f + lam g and g(x) = 0 with grad g(x) != 0.
    None when the drawn gradient of g vanishes at x.
    """
    C = rng.integers(-2, 3, (n, n))
    M = C.T @ C + np.identity(n, dtype=int)
    S = rng.integers(-3, 4, (n, n))
    B = S + S.T
    lam = int(rng.integers(-2, 3))
    A = M - lam * B
    x = random_point(rng, n)
    b = [Fraction(int(v)) for v in rng.integers(-3, 4, n)]
    Bx, Ax = matvec(B, x), matvec(A, x)
    grad_g = [2 * Bx[i] + b[i] for i in range(n)]
    if all(v == 0 for v in grad_g):
        return None
    a = [-(2 * Ax[i] + lam * grad_g[i]) for i in range(n)]
    k2 = -(sum(x[i] * Bx[i] for i in range(n)) + sum(b[i] * x[i] for i in range(n)))
    k1 = int(rng.integers(-3, 4))
    pair = QuadraticPair.build(A.tolist(), B.tolist(), a, b, k1, k2)
    return pair, x, Fraction(lam)


def test_weak_duality():
    rng = np.random.default_rng(101)
    for _ in range(200):
        n = random_n(rng)
        pair = random_pair(rng, n)
        x = random_point(rng, n)
        if pair.g(x) > 0:
            continue
        lam = Fraction(int(rng.integers(0, 20)), int(rng.integers(1, 5)))
        value = dual_value(pair, lam, ConstraintCone.NONNEG)
        assert value is None or value <= pair.f(x)


def test_nonconvex_epigraph_means_unbounded_dual():
    rng = np.random.default_rng(103)
    for _ in range(60):
        pair = random_pair(rng, random_n(rng), proportional=True)
        if not epigraph_convexity(pair).dual_unbounded:
            continue
        for lam in (Fraction(-3), Fraction(0), Fraction(5, 2)):
            assert dual_value(pair, lam) is None


def test_range_values_in_hom_cone():
    rng = np.random.default_rng(107)
    for _ in range(100):
        n = random_n(rng)
        pair = random_pair(rng, n)
        cone = classify_hom_range(pair)
        if not cone.exact:
            continue
        for _ in range(5):
            u = random_point(rng, n)
            assert cone.contains(hom_part(pair, u)) is not False


def test_hom_range_is_convex_cone():
    light_oracle()
    rng = np.random.default_rng(139)
    for trial in range(500):
        n = random_n(rng)
        pair = random_pair(rng, n, proportional=trial % 4 == 0, homogeneous=True)
        probe = convexity_probe(pair, trials=8, seed=trial)
        assert probe.verdict is ProbeVerdict.PROBABLY_CONVEX
        cone = classify_hom_range(pair)
        if not cone.exact:
            # sweep generators are only approximate near the boundary
            continue
        values = evaluate(pair_arrays(pair), ball_points(rng, 12, n, 2.0))
        mids = (values[:-1] + values[1:]) / 2.0
        for y in np.vstack([values, mids]):
            assert cone.closure_contains(tuple(float(v) for v in y))


def test_nd_witness_is_isotropic():
    rng = np.random.default_rng(109)
    for _ in range(100):
        pair = random_pair(rng, random_n(rng))
        nd = nd_check(pair)
        if not nd.holds and nd.exact:
            v = nd.witness
            assert any(x != 0 for x in v)
            assert pair.A.quad(v) == 0 and pair.B.quad(v) == 0


def test_alternative_never_fails():
    rng = np.random.default_rng(113)
    for _ in range(1000):
        pair = random_pair(rng, random_n(rng))
        cone = classify_hom_range(pair)
        directions = [tuple(int(x) for x in rng.integers(-2, 3, 2))]
        # float sweeps only approximate the boundary rays
        if cone.exact:
            directions += [tuple(-x for x in g) for g in cone.boundary_directions()]
        for d in directions:
            if all(x == 0 for x in d):
                continue
            alternative_check(pair, d)


def test_battery_implications_hold():
    rng = np.random.default_rng(127)
    for _ in range(500):
        property_battery(random_pair(rng, random_n(rng)))


def test_at_most_two_directions():
    rng = np.random.default_rng(131)
    for _ in range(60):
        pair = random_pair(rng, random_n(rng), proportional=bool(rng.integers(0, 2)))
        assert len(at_most_two_directions(pair)) <= 2


def test_probe_agrees_with_exact():
    light_oracle()
    rng = np.random.default_rng(137)
    for trial in range(500):
        pair = random_pair(rng, random_n(rng), proportional=trial % 2 == 0)
        probe = convexity_probe(pair, trials=8, seed=trial)
        if probe.verdict is ProbeVerdict.NONCONVEX:
            assert not joint_range_convexity(pair).convex


def test_strong_duality_means_convex_epigraph():
    rng = np.random.default_rng(149)
    checked = 0
    for _ in range(200):
        found = kkt_instance(rng, random_n(rng))
        if found is None:
            continue
        pair, x, lam = found
        checked += 1
        assert pair.g(x) == 0
        assert slater_check(pair, ConstraintCone.ZERO).ok
        kkt = kkt_check(pair, x, ConstraintCone.ZERO)
        assert kkt.verdict is KktVerdict.OPTIMAL and kkt.lambda_star == lam
        # mu = f(x) = q(lam): finite with strong duality
        assert dual_value(pair, lam) == pair.f(x)
        report = solve_dual(pair, ConstraintCone.ZERO)
        assert report.mu_status is MuStatus.FINITE
        assert report.nu == pair.f(x)
        assert report.mu_lower == report.mu_upper == pair.f(x)
        assert report.strong_duality
        assert augmented_convexity(pair, (1, 0)).convex
    assert checked > 150


def test_nonconvex_epigraph_has_no_finite_dual():
    rng = np.random.default_rng(151)
    for _ in range(200):
        n = random_n(rng)
        S = rng.integers(-3, 4, (n, n))
        b = rng.integers(-3, 4, n).tolist()
        if not any(b):
            continue
        pair = QuadraticPair.build((S + S.T).tolist(), [[0] * n for _ in range(n)],
                                   rng.integers(-3, 4, n).tolist(), b, 0,
                                   int(rng.integers(-3, 4)))
        assert slater_check(pair, ConstraintCone.ZERO).ok
        if augmented_convexity(pair, (1, 0)).convex:
            continue
        for lam in range(-4, 5):
            assert dual_value(pair, Fraction(lam, 2)) is None
