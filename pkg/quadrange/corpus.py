"""
Built-in example corpus.

Every example is a small problem def plus the facts it is known to
satisfy. `run_example` loads the def, evaluates each fact and reports
PASS only when all of them hold; a fact that raises counts as failed.
The problem defs are mirrored as files in docs/examples/.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .core import hom_part
from .cones import (
    ConeKind, Closedness, classify_hom_range, nd_check, boundary_line, property_battery,
)
from .convexity import (
    joint_range_convexity, joint_range_contains, augmented_convexity,
    augmented_range_contains, line_restriction, at_most_two_directions,
    convexity_conditions, LineTag,
)
from .optimize import (
    ConstraintCone, MuStatus, KktVerdict, solve_dual, slater_check, kkt_check,
    existence_report, epigraph_convexity, finiteness_preconditions, ArgminStatus,
)
from .pencil import simdiag, SdVerdict
from .problem import Problem, problem_from_dict


Facts = list[tuple[str, bool]]


@dataclass(frozen=True)
class Example:
    name: str
    description: str
    data: dict
    checks: Callable[[Problem], Facts]


@dataclass(frozen=True)
class ExampleResult:
    name: str
    facts: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.facts) and all(ok for _, ok in self.facts)

    @property
    def failures(self) -> list[str]:
        return [label for label, ok in self.facts if not ok]


_registry: dict[str, Example] = {}


def example(name: str, description: str, data: dict):
    """ Register the decorated check function under `name`
    """
    def register(fn: Callable[[Problem], Facts]) -> Callable[[Problem], Facts]:
        if name in _registry:
            raise ValueError("Duplicate example {}".format(name))
        _registry[name] = Example(name, description, dict(data, name=name), fn)
        return fn
    return register


def names() -> list[str]:
    return list(_registry)


def get_example(name: str) -> Example:
    try:
        return _registry[name]
    except KeyError as e:
        raise KeyError("Unknown example {}".format(name)) from e


def load_example(name: str) -> Problem:
    ex = get_example(name)
    return problem_from_dict(ex.data, name)


def run_example(name: str) -> ExampleResult:
    ex = get_example(name)
    try:
        facts = ex.checks(load_example(name))
    except Exception as e:  # pylint: disable=broad-except
        logging.exception("example %s raised", name)
        facts = [("raised {}: {}".format(type(e).__name__, e), False)]
    result = ExampleResult(name, facts)
    for label in result.failures:
        logging.info("%s: fact failed: %s", name, label)
    return result


def run_all() -> list[ExampleResult]:
    return [run_example(name) for name in names()]


F = Fraction


@example("ex0", "Nonconvex joint range with F_H a ray", {
    "A": [[-1, -1], [-1, -1]], "B": [[1, 1], [1, 1]],
    "a": [1, 1], "b": [0, 0], "k1": 0, "k2": -1})
def _ex0(problem: Problem) -> Facts:
    pair = problem.pair
    cone = classify_hom_range(pair)
    verdict = joint_range_convexity(pair)
    w = verdict.witness
    return [
        ("F(0,1) = (0,0)", pair((0, 1)) == (0, 0)),
        ("F(-1,0) = (-2,0)", pair((-1, 0)) == (-2, 0)),
        ("(-1,0) not in F(R^2)", joint_range_contains(pair, (-1, 0)) is False),
        ("F_H(R^2) = R+(-1,1)",
         cone.kind is ConeKind.RAY and cone.generators == ((-1, 1),)),
        ("joint range nonconvex", not verdict.convex),
        ("witness midpoint outside F(R^2)",
         w is not None and joint_range_contains(pair, w.m) is False
         and pair(w.x_p) == w.p and pair(w.x_q) == w.q),
    ]


@example("ej_op00", "F_H is the whole plane but ND fails", {
    "A": [[1, 0, 0], [0, 0, 0], [0, 0, -1]],
    "B": [[0, 0, 0], [0, 1, 0], [0, 0, -1]]})
def _ej_op00(problem: Problem) -> Facts:
    pair = problem.pair
    nd = nd_check(pair)
    battery = property_battery(pair)
    v = nd.witness
    return [
        ("F_H(R^3) = R^2", classify_hom_range(pair).kind is ConeKind.PLANE),
        ("ND fails", not nd.holds),
        ("ND witness is isotropic for both forms",
         v is not None and nd.exact and any(x != 0 for x in v) and hom_part(pair, v) == (0, 0)),
        ("F_H(1,1,1) = (0,0)", hom_part(pair, (1, 1, 1)) == (0, 0)),
        ("battery (a) SD", battery.a is True),
        ("battery (e) ND false", battery.e is False),
        ("battery (h) F_H = R^2", battery.h is True),
    ]


@example("ej_op1", "Simultaneously diagonalizable pair with F_H a line", {
    "A": [[0, 1], [1, 0]], "B": [[0, 0], [0, 0]]})
def _ej_op1(problem: Problem) -> Facts:
    pair = problem.pair
    sd = simdiag(pair.A, pair.B)
    cols = sd.columns or ()
    offdiag = all(pair.A.bilinear(cols[i], cols[j]) == 0 and pair.B.bilinear(cols[i], cols[j]) == 0
                  for i in range(len(cols)) for j in range(i + 1, len(cols)))
    cone = classify_hom_range(pair)
    return [
        ("SD holds", sd.verdict is SdVerdict.DIAGONALIZED),
        ("congruence is exact", sd.exact),
        ("off-diagonal entries exactly zero", len(cols) == 2 and offdiag),
        ("C = [[1,1],[-1,1]] diagonalizes A",
         pair.A.bilinear((1, -1), (1, 1)) == 0),
        ("F_H(R^2) = R x {0}", cone.kind is ConeKind.LINE
         and cone.closure_contains((1, 0)) and cone.closure_contains((-1, 0))
         and not cone.closure_contains((0, 1))),
    ]


@example("ej_reff", "F_H is a halfplane that is not closed", {
    "A": [[1, 1], [1, 1]], "B": [[1, 0], [0, -1]]})
def _ej_reff(problem: Problem) -> Facts:
    pair = problem.pair
    cone = classify_hom_range(pair)
    line = boundary_line(pair)
    return [
        ("SD fails", simdiag(pair.A, pair.B).verdict is SdVerdict.NOT_SD),
        ("closure is the halfplane y1 >= 0",
         cone.kind is ConeKind.HALFPLANE and cone.normal == (1, 0)),
        ("F_H(R^2) is not closed", cone.closed is Closedness.NO),
        ("(0,1) not in F_H(R^2)", cone.contains((0, 1)) is False),
        ("(0,0) and (1,5) in F_H(R^2)",
         cone.contains((0, 0)) is True and cone.contains((1, 5)) is True),
        ("boundary line R(0,1)", line.as_point() in ((0, 1), (0, -1))),
    ]


@example("ej_op0", "Punctured joint range, F_H a line", {
    "A": [[0, 1], [1, 0]], "B": [[0, 0], [0, 0]], "b": [1, 0]})
def _ej_op0(problem: Problem) -> Facts:
    pair = problem.pair
    x, u = (0, 0), (1, 1)
    directions = {d.as_point() for d in at_most_two_directions(pair)}
    return [
        ("F(Ru) nonconvex for u = (1,1)", not line_restriction(pair, x, u).convex),
        ("F(Ru) + R+(-2,0) nonconvex",
         line_restriction(pair, x, u, (-2, 0)).tag is LineTag.B2),
        ("F(Ru) + R+(1,0) convex", line_restriction(pair, x, u, (1, 0)).convex),
        ("F(Ru) + R+(0,1) convex", line_restriction(pair, x, u, (0, 1)).convex),
        ("joint range nonconvex", not joint_range_convexity(pair).convex),
        ("(1,0) not in F(R^2)", joint_range_contains(pair, (1, 0)) is False),
        ("(0,0) and (3,-2) in F(R^2)",
         joint_range_contains(pair, (0, 0)) is True and joint_range_contains(pair, (3, -2)) is True),
        ("at most two nonconvex directions, both horizontal",
         0 < len(directions) <= 2 and directions <= {(1, 0), (-1, 0)}),
    ]


@example("ej_s_lema", "Zero duality gap with the primal infimum not attained", {
    "A": [[1, 0], [0, 0]], "B": [[0, 1], [1, 0]], "k2": 1, "cone": "zero"})
def _ej_s_lema(problem: Problem) -> Facts:
    pair = problem.pair
    report = solve_dual(pair, ConstraintCone.ZERO)
    existence = existence_report(pair, ConstraintCone.ZERO)
    return [
        ("Slater holds", slater_check(pair, ConstraintCone.ZERO).ok),
        ("nu = 0", report.nu == 0),
        ("lambda* = 0", report.lambda_star == 0 and report.dual_attained),
        ("mu in [0, 1e-8]", report.mu_lower == 0 and report.mu_upper is not None
         and 0 <= float(report.mu_upper) <= 1e-8),
        ("primal infimum not attained", not report.primal_attained),
        ("ND fails", not existence.nd_holds),
    ]


@example("ej_sinsd1", "Slater fails, dual supremum not attained", {
    "A": [[0, 0], [0, 0]], "B": [[1, 1], [1, 1]], "a": [1, 1], "cone": "zero"})
def _ej_sinsd1(problem: Problem) -> Facts:
    pair = problem.pair
    report = solve_dual(pair, ConstraintCone.ZERO)
    return [
        ("Slater fails", not slater_check(pair, ConstraintCone.ZERO).ok),
        ("mu = 0", report.mu_status is MuStatus.FINITE and report.mu == 0),
        ("sup q = 0", report.nu is not None and abs(float(report.nu)) <= 1e-8),
        ("dual not attained", not report.dual_attained),
        ("no strong duality", not report.strong_duality),
    ]


@example("x1sq_minus_x2sq", "min x1^2 - x2^2 on x2 = 0: the epigraph direction fails", {
    "A": [[1, 0], [0, -1]], "B": [[0, 0], [0, 0]], "b": [0, 1], "cone": "zero"})
def _x1sq_minus_x2sq(problem: Problem) -> Facts:
    pair = problem.pair
    epigraph = epigraph_convexity(pair)
    conditions = epigraph.verdict.conditions
    kkt = kkt_check(pair, (0, 0), ConstraintCone.ZERO)
    return [
        ("none of C1-C4 for d = (1,0)", not any(conditions.values())),
        ("F + R+(1,0) nonconvex", not epigraph.verdict.convex),
        ("dual identically -inf", epigraph.dual_unbounded),
        ("KKT at 0: A + lam B not psd", not kkt.psd_ok),
        ("mu = 0 at x* = 0",
         solve_dual(pair, ConstraintCone.ZERO).x_star == (0, 0)),
    ]


@example("x1sq", "min x1^2 on x2 = 0", {
    "A": [[1, 0], [0, 0]], "B": [[0, 0], [0, 0]], "b": [0, 1], "cone": "zero"})
def _x1sq(problem: Problem) -> Facts:
    pair = problem.pair
    report = solve_dual(pair, ConstraintCone.ZERO)
    return [
        ("C3 holds for d = (1,0)", convexity_conditions(pair, (1, 0))["C3"] is True),
        ("F + R+(1,0) convex", augmented_convexity(pair, (1, 0)).convex),
        ("lambda* = 0", report.lambda_star == 0),
        ("x* = (0,0)", report.x_star == (0, 0)),
        ("strong duality", report.strong_duality),
        ("KKT certifies x*",
         kkt_check(pair, (0, 0), ConstraintCone.ZERO).verdict is KktVerdict.OPTIMAL),
    ]


@example("x1x2_x1plus1", "min x1 x2 on x1 = -1 is unbounded", {
    "A": [[0, "1/2"], ["1/2", 0]], "B": [[0, 0], [0, 0]], "b": [1, 0], "k2": 1,
    "cone": "zero"})
def _x1x2_x1plus1(problem: Problem) -> Facts:
    pair = problem.pair
    verdict = augmented_convexity(pair, (1, 0))
    finiteness = finiteness_preconditions(pair, ConstraintCone.ZERO)
    return [
        ("F + R+(1,0) nonconvex", not verdict.convex and verdict.witness is not None),
        ("F(1,-1) = (-1,2)", pair((1, -1)) == (-1, 2)),
        ("F(-1,1) = (-1,0)", pair((-1, 1)) == (-1, 0)),
        ("(-1,1) not in F + R+(1,0)",
         augmented_range_contains(pair, (1, 0), (F(-1), F(1))) is False),
        ("finiteness diagnostic forces mu = -inf",
         not finiteness.holds and finiteness.mu_minus_infinity),
        ("mu = -inf", solve_dual(pair, ConstraintCone.ZERO).mu_status is MuStatus.MINUS_INFINITY),
    ]


@example("ball_halfspace", "min |x|^2 on x1 + 1 <= 0: multipliers unbounded above", {
    "A": [[1, 0], [0, 1]], "B": [[0, 0], [0, 0]], "b": [1, 0], "k2": 1, "cone": "nonneg"})
def _ball_halfspace(problem: Problem) -> Facts:
    pair = problem.pair
    report = solve_dual(pair, ConstraintCone.NONNEG)
    existence = existence_report(pair, ConstraintCone.NONNEG)
    kkt = kkt_check(pair, (-1, 0), ConstraintCone.NONNEG)
    return [
        ("Slater holds", slater_check(pair, ConstraintCone.NONNEG).ok),
        ("nu = 1 at lambda* = 2",
         report.nu == 1 and report.lambda_star == 2 and report.dual_attained),
        ("mu = 1 at x* = (-1,0)", report.mu == 1 and report.x_star == (-1, 0)),
        ("strong duality", report.strong_duality),
        ("KKT certifies x* with lambda = 2",
         kkt.verdict is KktVerdict.OPTIMAL and kkt.lambda_star == 2),
        ("finiteness condition holds",
         finiteness_preconditions(pair, ConstraintCone.NONNEG).holds),
        ("argmin nonempty", existence.status is ArgminStatus.NONEMPTY),
    ]
