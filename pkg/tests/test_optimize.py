from fractions import Fraction

import pytest

from quadrange.core import QuadraticPair, QuadraticFunction, PreconditionViolated
from quadrange.optimize import (
    ConstraintCone, as_cone, g_range, slater_check, dual_value, solve_dual,
    MuStatus, Infeasible, InfeasiblePoint, kkt_check, KktVerdict,
    slemma_certify, solve_no_slater, finiteness_preconditions,
    existence_report, ArgminStatus, epigraph_convexity,
)


@pytest.fixture
def ball_halfspace():
    """ min |x|^2 subject to x1 + 1 <= 0
    """
    return QuadraticPair.build([[1, 0], [0, 1]], [[0, 0], [0, 0]], b=[1, 0], k2=1)


def test_as_cone():
    assert as_cone("zero") is ConstraintCone.ZERO
    assert as_cone(ConstraintCone.NONNEG) is ConstraintCone.NONNEG
    with pytest.raises(ValueError):
        as_cone("bogus")


def test_cone_membership():
    assert ConstraintCone.ZERO.dual_contains(Fraction(-3))
    assert not ConstraintCone.NONNEG.dual_contains(Fraction(-3))
    assert ConstraintCone.NONNEG.admits(Fraction(-1))
    assert not ConstraintCone.ZERO.admits(Fraction(-1))


def test_g_range():
    rng = g_range(QuadraticFunction.build([[1, 0], [0, 0]], [0, 0], -1))
    assert rng.low == -1
    assert rng.high is None
    assert rng.contains(0) and not rng.contains(-2)
    line = g_range(QuadraticFunction.build([[0, 0], [0, 0]], [0, 1], 0))
    assert line.low is None and line.high is None


def test_slater(ej_s_lema, ej_sinsd1):
    check = slater_check(ej_s_lema, ConstraintCone.ZERO)
    assert check.ok
    neg, pos = check.witnesses
    assert ej_s_lema.g(neg) < 0
    assert ej_s_lema.g(pos) > 0
    assert not slater_check(ej_sinsd1, ConstraintCone.ZERO).ok
    assert not slater_check(ej_sinsd1, "nonneg").ok


def test_dual_value(ej_s_lema, ej_sinsd1):
    assert dual_value(ej_s_lema, 0) == 0
    assert dual_value(ej_sinsd1, 1) == Fraction(-1, 4)
    assert dual_value(ej_sinsd1, -1) is None
    assert dual_value(ej_sinsd1, -1, ConstraintCone.NONNEG) is None


def test_solve_dual_affine(x1sq):
    report = solve_dual(x1sq, ConstraintCone.ZERO)
    assert report.mu_status is MuStatus.FINITE
    assert report.mu == 0
    assert report.lambda_star == 0
    assert report.x_star == (0, 0)
    assert report.strong_duality
    assert report.primal_attained


def test_solve_dual_inequality(ball_halfspace):
    report = solve_dual(ball_halfspace, ConstraintCone.NONNEG)
    assert report.mu_status is MuStatus.FINITE
    assert report.mu == 1
    assert report.lambda_star == 2
    assert report.nu == 1
    assert report.x_star == (-1, 0)
    assert report.dual_attained and report.strong_duality


def test_solve_dual_not_attained(ej_sinsd1, ej_s_lema):
    report = solve_dual(ej_sinsd1, ConstraintCone.ZERO)
    assert report.mu == 0
    assert not report.dual_attained
    assert not report.strong_duality
    report = solve_dual(ej_s_lema, ConstraintCone.ZERO)
    assert report.nu == 0
    assert not report.primal_attained


def test_solve_dual_unbounded(x1x2):
    report = solve_dual(x1x2, ConstraintCone.ZERO)
    assert report.mu_status is MuStatus.MINUS_INFINITY
    assert report.mu is None
    x0, v = report.ray
    far = tuple(a + 10 * b for a, b in zip(x0, v))
    assert x1x2.g(x0) == 0 and x1x2.g(far) == 0
    assert x1x2.f(far) < x1x2.f(x0)


def test_infeasible():
    pair = QuadraticPair.build([[1, 0], [0, 1]], [[1, 0], [0, 0]], k2=1)
    with pytest.raises(Infeasible):
        solve_dual(pair, ConstraintCone.ZERO)
    with pytest.raises(Infeasible):
        solve_dual(pair, ConstraintCone.NONNEG)


def test_kkt(x1sq, x1sq_minus_x2sq):
    report = kkt_check(x1sq, (0, 0), ConstraintCone.ZERO)
    assert report.verdict is KktVerdict.OPTIMAL
    assert report.lambda_star == 0
    report = kkt_check(x1sq_minus_x2sq, (0, 0), ConstraintCone.ZERO)
    assert report.verdict is KktVerdict.NOT_CERTIFIED
    assert report.stationarity_ok and not report.psd_ok
    assert kkt_check(x1sq, (1, 0), "zero").verdict is KktVerdict.NOT_OPTIMAL


def test_kkt_infeasible_point(x1sq):
    with pytest.raises(InfeasiblePoint):
        kkt_check(x1sq, (0, 1), ConstraintCone.ZERO)


def test_kkt_inequality(ball_halfspace):
    report = kkt_check(ball_halfspace, (-1, 0), ConstraintCone.NONNEG)
    assert report.verdict is KktVerdict.OPTIMAL
    assert report.lambda_star == 2


def test_slemma_certified(x1sq):
    report = slemma_certify(x1sq, ConstraintCone.ZERO)
    assert report.holds is True
    assert report.certified
    assert report.lambda_ == 0
    assert report.warnings == ()


def test_slemma_without_certificate(x1sq_minus_x2sq):
    report = slemma_certify(x1sq_minus_x2sq, ConstraintCone.ZERO)
    assert report.premise is True
    assert not report.certified
    assert any("C1-C4" in w for w in report.warnings)


def test_no_slater():
    unsolvable = QuadraticPair.build([[0, 0], [0, 0]], [[0, 0], [0, 1]], a=[1, 0])
    assert not solve_no_slater(unsolvable).solvable
    solvable = QuadraticPair.build([[1, 0], [0, 0]], [[0, 0], [0, 1]])
    report = solve_no_slater(solvable)
    assert report.solvable
    assert report.x_bar == (0, 0)
    assert report.mu == 0


def test_no_slater_precondition(ej_s_lema):
    with pytest.raises(PreconditionViolated):
        solve_no_slater(ej_s_lema)


def test_finiteness(x1x2, identity_pair):
    report = finiteness_preconditions(x1x2, ConstraintCone.ZERO)
    assert not report.holds
    assert report.mu_minus_infinity
    v = report.direction
    # the line stays on x1 = -1 while f = -x2 drops
    assert v[0] == 0 and v[1] != 0
    assert finiteness_preconditions(identity_pair, ConstraintCone.ZERO).holds
    assert finiteness_preconditions(identity_pair, ConstraintCone.NONNEG).holds


def test_finiteness_affine_bounded(x1sq):
    report = finiteness_preconditions(x1sq, ConstraintCone.ZERO)
    assert report.holds and not report.mu_minus_infinity
    assert report.direction == (0, 0)


def test_finiteness_one_sided_direction():
    # f = x2^2 - x1^2, g = x2^2 + x1: f drops along e1 but g moves with it
    pair = QuadraticPair.build([[-1, 0], [0, 1]], [[0, 0], [0, 1]], b=[1, 0])
    report = finiteness_preconditions(pair, ConstraintCone.ZERO)
    assert report.holds and not report.mu_minus_infinity
    v = report.direction
    assert all(x == 0 for x in pair.B.apply(v))
    assert pair.A.quad(v) < 0


def test_finiteness_inequality_fails():
    # g <= 0 forces x1^2 >= 1 where f = -x1^2 runs off
    pair = QuadraticPair.build([[-1, 0], [0, 0]], [[-1, 0], [0, 0]], k2=1)
    report = finiteness_preconditions(pair, ConstraintCone.NONNEG)
    assert not report.holds
    v = report.direction
    assert pair.B.quad(v) <= 0 and pair.A.quad(v) < 0


def test_existence(x1sq, ej_s_lema, ball_halfspace):
    report = existence_report(x1sq, ConstraintCone.ZERO)
    assert report.status is ArgminStatus.ATTAINED
    assert report.solution == (0, 0)
    assert not existence_report(ej_s_lema, ConstraintCone.ZERO).nd_holds
    report = existence_report(ball_halfspace, ConstraintCone.NONNEG)
    assert report.nd_holds
    assert report.status is ArgminStatus.NONEMPTY
    assert report.solution == (-1, 0)


def test_existence_unbounded(x1x2):
    assert existence_report(x1x2, ConstraintCone.ZERO).status is ArgminStatus.UNBOUNDED


def test_epigraph(x1sq, x1sq_minus_x2sq):
    assert epigraph_convexity(x1sq_minus_x2sq).dual_unbounded
    assert not epigraph_convexity(x1sq).dual_unbounded


def test_g_range_semidefinite(ej_sinsd1):
    rng = g_range(ej_sinsd1.g)
    assert rng.low == 0 and rng.low_attained
    assert rng.high is None


def test_no_slater_solvable_with_free_multiplier(ej_sinsd1):
    report = solve_no_slater(ej_sinsd1)
    assert report.solvable
    assert ej_sinsd1.g(report.x_bar) == 0
    assert report.mu == 0


def test_slemma_slater_fails(ej_sinsd1):
    report = slemma_certify(ej_sinsd1, ConstraintCone.ZERO)
    assert report.premise is True
    assert not report.certified
    assert "Slater condition fails" in report.warnings


def test_slemma_premise_fails():
    # f = -x2^2 is negative on {x1 = 0}
    pair = QuadraticPair.build([[0, 0], [0, -1]], [[0, 0], [0, 0]], b=[1, 0])
    report = slemma_certify(pair, ConstraintCone.ZERO)
    assert report.holds is False
    assert not report.certified


def test_existence_outside_disk():
    # min x1^2 subject to 1 - |x|^2 <= 0
    pair = QuadraticPair.build([[1, 0], [0, 0]], [[-1, 0], [0, -1]], k2=1)
    report = existence_report(pair, ConstraintCone.NONNEG)
    assert report.nd_holds
    assert report.status is ArgminStatus.NONEMPTY
    assert pair.f(report.solution) == 0
    assert pair.g(report.solution) <= 0
