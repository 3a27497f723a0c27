"""
One quadratic constraint: the primal problem

    mu = inf { f(x) : g(x) in -P },   P = {0} or R+

and its Lagrangian dual

    nu = sup { q(lam) : lam in P* },  q(lam) = inf_x f(x) + lam g(x)

q is concave and finite only where A + lam B is positive semidefinite and
a + lam b lies in its range. We locate its maximum in floating point and
then evaluate q exactly at a handful of rationalized multipliers, so nu
and lam* are exact whenever the optimal multiplier is a small fraction.

The primal side is exact when the feasible set is an affine subspace (g
affine, or g bounded on one side by 0). Otherwise mu is bracketed by nu
from below and by the best feasible point found from above, unless primal
recovery at lam* closes the gap.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from math import isinf
from typing import Optional, Sequence, Union

import numpy as np

from .config import settings
from .core import (
    QuadraticPair, QuadraticFunction, Scalar, Vector, Mode, PreconditionViolated,
    as_scalar, scalar_mode, to_exact, dot, add, scale, is_zero_vector, point,
)
from .ratlinalg import (
    Minimum, SubspaceBasis, minimize, maximize, solve_linear, solve_system,
    kernel_basis, intersect_kernels, hyperplane_basis, nullspace, restrict_form,
    restrict_function, combine_basis, inertia, negative_direction, exact_sqrt,
    rationalize, rationalize_vector, ldl_congruence,
)
from .pencil import psd_interval, golden_max, quadratic_polish, PsdInterval
from .binary import SurdVector
from .cones import nd_check
from .convexity import augmented_convexity, convexity_conditions, ConvexityVerdict


class Infeasible(Exception):
    """ The constraint set {x: g(x) in -P} is empty
    """


class InfeasiblePoint(ValueError):
    """ A point handed over as feasible violates the constraint
    """


class ConstraintCone(Enum):
    ZERO = "zero"
    NONNEG = "nonneg"

    def dual_contains(self, lam: Scalar) -> bool:
        """ lam in P*: all of R for P = {0}, R+ for P = R+
        """
        return self is ConstraintCone.ZERO or lam >= 0

    def admits(self, value: Scalar, tol: float = 0.0) -> bool:
        """ value in -P
        """
        if self is ConstraintCone.ZERO:
            return abs(value) <= tol
        return value <= tol

    @property
    def dual_range(self) -> tuple[float, float]:
        if self is ConstraintCone.ZERO:
            return (float("-inf"), float("inf"))
        return (0.0, float("inf"))


def as_cone(P: Union[str, ConstraintCone]) -> ConstraintCone:
    if isinstance(P, ConstraintCone):
        return P
    try:
        return ConstraintCone(P)
    except ValueError as e:
        raise ValueError("unknown cone {!r}, expected 'zero' or 'nonneg'".format(P)) from e


def _tol(pair: QuadraticPair, key: str) -> float:
    return settings["tolerance"][key] * pair.scale()


def _exact(x: Sequence) -> bool:
    return all(scalar_mode(v) is Mode.EXACT for v in x)


def _lift(base: Vector, W: SubspaceBasis, y: Sequence) -> Vector:
    return base if not W else add(base, combine_basis(W, y))


def _identity(n: int) -> SubspaceBasis:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class GRange:
    """ g(R^n) as an interval; None ends are infinite. Finite ends of a
    quadratic are always attained.
    """
    low: Optional[Fraction]
    high: Optional[Fraction]
    argmin: Optional[Vector] = None
    argmax: Optional[Vector] = None
    low_ray: Optional[tuple[Vector, Vector]] = None
    high_ray: Optional[tuple[Vector, Vector]] = None

    @property
    def low_attained(self) -> bool:
        return self.low is not None

    @property
    def high_attained(self) -> bool:
        return self.high is not None

    def contains(self, value: Scalar) -> bool:
        return ((self.low is None or self.low <= value)
                and (self.high is None or value <= self.high))


def g_range(g: QuadraticFunction) -> GRange:
    g = g.exact()
    low, high = minimize(g), maximize(g)
    return GRange(low.value, high.value, low.argmin, high.argmin, low.ray, high.ray)


def _ray_points(ray: tuple[Vector, Vector], count: Optional[int] = None):
    x0, v = ray
    tau = Fraction(1)
    for _ in range(count or settings["dual"]["doublings"]):
        yield add(x0, scale(tau, v))
        tau *= 2


def _sign_candidates(q: QuadraticFunction, sign: int):
    """ Points where q is likely <= 0 (sign < 0) or >= 0 (sign > 0)
    """
    yield tuple(Fraction(0) for _ in range(q.n))
    ext: Minimum = minimize(q) if sign < 0 else maximize(q)
    if ext.argmin is not None:
        yield ext.argmin
    else:
        yield from _ray_points(ext.ray)


def _quadratic_roots(alpha: Scalar, beta: Scalar, gamma: Scalar) -> list:
    """ Real roots of alpha t^2 + beta t + gamma, exact when rational
    """
    if alpha == 0:
        return [] if beta == 0 else [-gamma / beta]
    disc = beta * beta - 4 * alpha * gamma
    if disc < 0:
        return []
    s = exact_sqrt(disc) if scalar_mode(disc) is Mode.EXACT else None
    if s is None:
        s = float(disc) ** 0.5
        alpha, beta = float(alpha), float(beta)
    return sorted({(-beta - s) / (2 * alpha), (-beta + s) / (2 * alpha)})


def _segment_root(q: QuadraticFunction, x0: Vector, x1: Vector) -> Optional[Vector]:
    """ A zero of q on the segment [x0, x1], q(x0) < 0 <= q(x1)
    """
    w = tuple(b - a for a, b in zip(x0, x1))
    roots = _quadratic_roots(q.A.quad(w), dot(q.gradient(x0), w), q(x0))
    for t in roots:
        if -1e-12 <= float(t) <= 1.0 + 1e-12:
            return add(x0, scale(t, w))
    return None


def _level_point(q: QuadraticFunction, want_zero: bool = True) -> Optional[Vector]:
    """ A point with q = 0, or just q <= 0, exact when the root is rational
    """
    low = next((x for x in _sign_candidates(q, -1) if q(x) <= 0), None)
    if low is None or not want_zero or q(low) == 0:
        return low
    high = next((x for x in _sign_candidates(q, 1) if q(x) >= 0), None)
    if high is None:
        return None
    return _segment_root(q, low, high)


@dataclass(frozen=True)
class SlaterCheck:
    """ `witnesses` holds a point with g < 0, then (for P = {0}) one with g > 0
    """
    ok: bool
    witnesses: tuple
    range: GRange


def slater_check(pair: QuadraticPair, P) -> SlaterCheck:
    """ 0 in ri(g(R^n) + P): g takes negative values, and for P = {0}
    positive ones too
    """
    P = as_cone(P)
    g = pair.g.exact()
    rng = g_range(g)
    negative = rng.low is None or rng.low < 0
    neg = next((x for x in _sign_candidates(g, -1) if g(x) < 0), None)
    if P is ConstraintCone.NONNEG:
        return SlaterCheck(negative, (neg,) if neg is not None else (), rng)
    positive = rng.high is None or rng.high > 0
    pos = next((x for x in _sign_candidates(g, 1) if g(x) > 0), None)
    witnesses = tuple(x for x in (neg, pos) if x is not None)
    return SlaterCheck(negative and positive, witnesses, rng)


def lagrangian(pair: QuadraticPair, lam: Scalar) -> QuadraticFunction:
    """ f + lam g
    """
    return pair.f.combine(lam, pair.g)


def dual_value(pair: QuadraticPair, lam, P=ConstraintCone.ZERO) -> Optional[Fraction]:
    """ q(lam) = inf_x f(x) + lam g(x), None for -inf. Exact: a float lam
    is taken at its exact binary value. Multipliers outside P* give None.
    """
    P = as_cone(P)
    lam = to_exact(as_scalar(lam))
    if not P.dual_contains(lam):
        return None
    return minimize(lagrangian(pair.exact(), lam)).value


def _dual_float(arrays: tuple, lam: float, tol: float) -> float:
    An, Bn, a, b, k1, k2 = arrays
    ev, V = np.linalg.eigh(An + lam * Bn)
    if ev[0] < -tol:
        return float("-inf")
    r = a + lam * b
    w = V.T @ r
    small = np.abs(ev) <= tol
    if np.any(np.abs(w[small]) > tol * (1.0 + float(np.linalg.norm(r)))):
        return float("-inf")
    return float(k1 + lam * k2 - 0.25 * np.sum(w[~small] ** 2 / ev[~small]))


def _kernel_multiplier(pair: QuadraticPair) -> tuple[bool, Optional[Fraction]]:
    """ ker A and ker B stays inside ker(A + lam B), so a + lam b must be
    orthogonal to it: (False, None) when no lam does that, (True, lam0)
    when exactly one does, (True, None) when every lam does
    """
    only = None
    for k in intersect_kernels(pair.A, pair.B):
        alpha, beta = dot(pair.a, k), dot(pair.b, k)
        if beta == 0:
            if alpha != 0:
                return False, None
            continue
        lam = -alpha / beta
        if only is not None and lam != only:
            return False, None
        only = lam
    return True, only


def _multiplier_candidates(raw: Sequence[float], P: ConstraintCone) -> set:
    found = set()
    denominators = (1, 10, 100, 10**4, settings["tolerance"]["witness_denominator"])
    for r in raw:
        for c in [rationalize(r, den) for den in denominators] + [Fraction(r)]:
            if P.dual_contains(c):
                found.add(c)
    return found


def _dual_interval(pair: QuadraticPair, P: ConstraintCone) -> PsdInterval:
    """ {lam in P*: A + lam B >= 0}
    """
    full = psd_interval(pair.A, pair.B)
    interval = full.intersect(*P.dual_range)
    if interval.empty and not full.empty and P is ConstraintCone.NONNEG and inertia(pair.A).psd:
        # bisection left the float end just short of 0
        interval = PsdInterval(0.0, max(full.hi, 0.0))
    return interval


def _maximize_dual(pair: QuadraticPair, P: ConstraintCone,
                   diagnostics: list) -> tuple[Optional[Scalar], Optional[Scalar], bool]:
    """ (lam*, nu, attained); nu None means -inf
    """
    possible, fixed = _kernel_multiplier(pair)
    if not possible:
        diagnostics.append("a + lam b leaves range(A + lam B) for every lam")
        return None, None, False
    if fixed is not None:
        value = dual_value(pair, fixed, P)
        if value is None:
            diagnostics.append("the only admissible multiplier {} gives q = -inf".format(fixed))
            return None, None, False
        return fixed, value, True

    interval = _dual_interval(pair, P)
    if interval.empty:
        diagnostics.append("A + lam B is not positive semidefinite for any lam in P*")
        return None, None, False
    bound = settings["psd"]["bound"]
    lo, hi = max(interval.lo, -bound), min(interval.hi, bound)
    offset = settings["dual"]["offset"] * (1.0 + max(abs(lo), abs(hi)))
    search_lo, search_hi = (lo + offset, hi - offset) if hi - lo > 2.0 * offset else (lo, hi)
    arrays = (pair.A.to_numpy(), pair.B.to_numpy(),
              np.array([float(v) for v in pair.a]), np.array([float(v) for v in pair.b]),
              float(pair.k[0]), float(pair.k[1]))
    tol = settings["tolerance"]["relative"] * pair.scale()

    def q(lam):
        return _dual_float(arrays, lam, tol)

    step = settings["psd"]["bisect"] * (1.0 + abs(search_lo) + abs(search_hi))
    t, best = golden_max(q, search_lo, search_hi, step, settings["dual"]["iterations"])
    t, best = quadratic_polish(q, t, best, search_lo, search_hi, step)
    raw = [t, (lo + hi) / 2.0, lo, hi]
    if interval.contains(0.0):
        raw.append(0.0)
    scored = []
    for c in _multiplier_candidates(raw, P):
        value = dual_value(pair, c, P)
        if value is not None:
            scored.append((value, -c.denominator, c))
    if not scored:
        if best > float("-inf"):
            diagnostics.append("dual optimum located in floating point only")
            return t, best, abs(t) < bound * (1.0 - 1e-6)
        diagnostics.append("q(lam) = -inf at every candidate multiplier")
        return None, None, False
    value, _, lam = max(scored)

    attained = abs(float(lam)) < bound * (1.0 - 1e-6)
    if attained and hi - lo > 1e-6:
        for end in (interval.lo, interval.hi):
            if isinf(end):
                continue
            near = abs(float(lam) - end) <= 1e-6 * (1.0 + abs(end))
            if near and dual_value(pair, rationalize(end, settings["tolerance"]["witness_denominator"]), P) is None:
                attained = False
    if not attained:
        diagnostics.append("dual supremum approached at lam = {:g}, not attained".format(float(lam)))
    logging.debug("dual: lam*=%s nu=%s on [%g, %g]", lam, value, interval.lo, interval.hi)
    return lam, value, attained


class MuStatus(Enum):
    FINITE = "finite"
    MINUS_INFINITY = "minus-infinity"
    INFEASIBLE = "infeasible"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class DualReport:
    """ mu lies in [mu_lower, mu_upper] (None ends are infinite); the two
    agree when mu is known. `ray` is a feasible half-line x0 + t v along
    which f -> -inf.
    """
    cone: ConstraintCone
    mu_status: MuStatus
    mu_lower: Optional[Scalar]
    mu_upper: Optional[Scalar]
    nu: Optional[Scalar]
    lambda_star: Optional[Scalar]
    dual_attained: bool
    primal_attained: bool
    strong_duality: bool
    x_star: Optional[Vector] = None
    ray: Optional[tuple[Vector, Vector]] = None
    diagnostics: tuple[str, ...] = ()

    @property
    def mu(self) -> Optional[Scalar]:
        if self.mu_status is MuStatus.FINITE and self.mu_lower == self.mu_upper:
            return self.mu_lower
        return None


def _feasible(pair: QuadraticPair, P: ConstraintCone, x: Vector) -> bool:
    tol = 0.0 if _exact(x) else _tol(pair, "certificate")
    return P.admits(pair.g(x), tol)


def _complementary(pair: QuadraticPair, P: ConstraintCone, lam: Scalar, x: Vector) -> bool:
    if not _feasible(pair, P, x):
        return False
    if P is ConstraintCone.ZERO or lam == 0:
        return True
    tol = 0.0 if _exact(x) else _tol(pair, "certificate")
    return abs(pair.g(x)) <= tol


def _affine_constraint(pair: QuadraticPair, P: ConstraintCone,
                       rng: GRange) -> Optional[tuple[Vector, SubspaceBasis]]:
    """ The feasible set as base + span(W) when it is an affine subspace
    """
    n = pair.n
    g = pair.g
    if g.A.is_zero():
        if is_zero_vector(g.a):
            return tuple(Fraction(0) for _ in range(n)), _identity(n)
        if P is ConstraintCone.ZERO:
            return solve_system([g.a], [-g.k], n), hyperplane_basis(g.a)
        return None
    # g >= 0 with min 0 (or <= 0 with max 0): feasible points are the extremizers
    if rng.low == 0:
        return rng.argmin, kernel_basis(g.A)
    if P is ConstraintCone.ZERO and rng.high == 0:
        return rng.argmax, kernel_basis(g.A)
    return None


def _recover(pair: QuadraticPair, P: ConstraintCone, lam: Fraction) -> Optional[Vector]:
    """ A feasible, complementary minimizer of the Lagrangian at lam: the
    min-norm stationary point, moved inside ker(A + lam B) when needed
    """
    M = pair.A.combine(1, pair.B, lam)
    x = solve_linear(M, scale(Fraction(-1, 2), add(pair.a, scale(lam, pair.b))))
    if x is None:
        return None
    if _complementary(pair, P, lam, x):
        return x
    N = kernel_basis(M)
    if not N:
        return None
    residual = restrict_function(pair.g, x, N)
    y = _level_point(residual, want_zero=P is ConstraintCone.ZERO or lam != 0)
    if y is None:
        return None
    x = _lift(x, N, y)
    return x if _complementary(pair, P, lam, x) else None


def _restore(pair: QuadraticPair, P: ConstraintCone, x: Vector) -> Optional[Vector]:
    """ Move x along grad g(x) onto the constraint set
    """
    if _feasible(pair, P, x):
        return x
    w = pair.g.gradient(x)
    if is_zero_vector(w):
        return None
    roots = _quadratic_roots(pair.B.quad(w), dot(w, w), pair.g(x))
    if not roots:
        return None
    s = min(roots, key=lambda r: abs(float(r)))
    return add(x, scale(s, w))


def _upper_bound(pair: QuadraticPair, P: ConstraintCone, starts: Sequence[Vector],
                 centre: Optional[Vector], directions: SubspaceBasis) -> tuple[Optional[Scalar], Optional[Vector]]:
    """ Best f over feasible points: the given ones, then centre + tau v
    pulled back onto the constraint, tau = 1, 2, 4, ...
    """
    best_value, best_x = None, None
    candidates = list(starts)
    if centre is not None:
        for v in directions:
            for sign in (1, -1):
                for x in _ray_points((centre, scale(sign, v))):
                    candidates.append(_restore(pair, P, x))
    for x in candidates:
        if x is None or not _feasible(pair, P, x):
            continue
        value = pair.f(x)
        if best_value is None or value < best_value:
            best_value, best_x = value, x
    return best_value, best_x


def _affine_primal(pair: QuadraticPair, base: Vector, W: SubspaceBasis):
    low = minimize(restrict_function(pair.f, base, W))
    if low.bounded:
        return low.value, _lift(base, W, low.argmin), None
    y0, v = low.ray
    zero = tuple(Fraction(0) for _ in base)
    return None, None, (_lift(base, W, y0), _lift(zero, W, v) if W else zero)


def _recession_ray(pair: QuadraticPair, P: ConstraintCone,
                   start: Optional[Vector]) -> Optional[tuple[Vector, Vector]]:
    """ From a feasible point, directions in ker B and b-perp keep g constant;
    f may still run off to -inf along them
    """
    if start is None or not _exact(start):
        return None
    W = nullspace([list(r) for r in pair.B.rows] + [list(pair.b)], pair.n)
    if not W:
        return None
    _, _, ray = _affine_primal(pair, start, W)
    return ray


def solve_dual(pair: QuadraticPair, P) -> DualReport:
    P = as_cone(P)
    pair = pair.exact()
    diagnostics = []
    slater = slater_check(pair, P)
    rng = slater.range
    feasible = rng.contains(0) if P is ConstraintCone.ZERO else (rng.low is None or rng.low <= 0)
    if not feasible:
        raise Infeasible("g(R^n) = [{}, {}] misses -P".format(rng.low, rng.high))
    if not slater.ok:
        diagnostics.append("Slater condition fails")

    lam, nu, dual_attained = _maximize_dual(pair, P, diagnostics)
    tol = _tol(pair, "strong_duality")

    def report(status, lower, upper, x=None, ray=None, attained=False):
        strong = (dual_attained and nu is not None and upper is not None
                  and status is MuStatus.FINITE and float(upper) - float(nu) <= tol)
        if nu is not None and upper is not None and float(upper) < float(nu) - tol:
            logging.warning("weak duality violated: feasible value %s below nu = %s", upper, nu)
        return DualReport(P, status, lower, upper, nu, lam, dual_attained, attained,
                          strong, x, ray, tuple(diagnostics))

    affine = _affine_constraint(pair, P, rng)
    if affine is not None:
        value, x, ray = _affine_primal(pair, *affine)
        if value is None:
            diagnostics.append("f unbounded below on the affine constraint set")
            return report(MuStatus.MINUS_INFINITY, None, None, ray=ray)
        return report(MuStatus.FINITE, value, value, x, attained=True)

    start = _level_point(pair.g, want_zero=P is ConstraintCone.ZERO)
    ray = _recession_ray(pair, P, start)
    if ray is not None:
        diagnostics.append("f unbounded below along a direction keeping g constant")
        return report(MuStatus.MINUS_INFINITY, None, None, ray=ray)

    centre, directions = None, ()
    if lam is not None and scalar_mode(lam) is Mode.EXACT:
        x = _recover(pair, P, lam)
        if x is not None:
            value = pair.f(x)
            return report(MuStatus.FINITE, value, value, x, attained=True)
        logging.warning("primal infimum likely not attained (no feasible minimizer at lam* = %s)",
                        lam)
        diagnostics.append("no feasible Lagrangian minimizer at lam*: infimum likely not attained")
        M = pair.A.combine(1, pair.B, lam)
        centre = solve_linear(M, scale(Fraction(-1, 2), add(pair.a, scale(lam, pair.b))))
        directions = kernel_basis(M)

    upper, _ = _upper_bound(pair, P, [start] if start is not None else [], centre, directions)
    if nu is None:
        if P is ConstraintCone.NONNEG and slater.ok:
            diagnostics.append("nu = -inf and the inequality S-lemma gives mu = nu")
            return report(MuStatus.MINUS_INFINITY, None, None)
        return report(MuStatus.UNDECIDED, None, upper)
    return report(MuStatus.FINITE, nu, upper)


class KktVerdict(Enum):
    OPTIMAL = "optimal"
    NOT_OPTIMAL = "not-optimal"
    NOT_CERTIFIED = "not-certified"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class KktReport:
    stationarity_ok: bool
    psd_ok: bool
    sign_ok: bool
    lambda_star: Optional[Scalar]
    verdict: KktVerdict


def _psd_multiplier(pair: QuadraticPair, P: ConstraintCone, gx: Scalar) -> Optional[Fraction]:
    if P is ConstraintCone.NONNEG and gx < 0:
        return Fraction(0)
    interval = _dual_interval(pair, P)
    if interval.empty:
        return None
    bound = settings["psd"]["bound"]
    lo, hi = max(interval.lo, -bound), min(interval.hi, bound)
    raw = [0.0] if interval.contains(0.0) else []
    raw += [(lo + hi) / 2.0, lo, hi]
    for c in sorted(_multiplier_candidates(raw, P), key=lambda c: (c.denominator, abs(c))):
        if inertia(pair.A.combine(1, pair.B, c)).psd:
            return c
    return None


def kkt_check(pair: QuadraticPair, x: Sequence, P) -> KktReport:
    """ Stationarity of f + lam g at x, the sign of lam and A + lam B >= 0.

    All three together make x a global minimizer. With grad g(x) != 0 the
    KKT conditions are also necessary, so failing them rules x out;
    with grad g(x) = 0 a failure proves nothing.
    """
    P = as_cone(P)
    tol = 0.0 if pair.mode is Mode.EXACT else _tol(pair, "certificate")
    x = tuple(to_exact(v) for v in point(pair.mode, x))
    pair = pair.exact()
    gx = pair.g(x)
    if not P.admits(gx, tol):
        raise InfeasiblePoint("g({}) = {} is not in -P".format(x, gx))
    df, dg = pair.f.gradient(x), pair.g.gradient(x)
    qualified = not is_zero_vector(dg)
    if qualified:
        lam = -dot(df, dg) / dot(dg, dg)
        stationarity = all(abs(r) <= tol for r in add(df, scale(lam, dg)))
    else:
        stationarity = all(abs(v) <= tol for v in df)
        lam = _psd_multiplier(pair, P, gx)
    sign_ok = (lam is not None and P.dual_contains(lam)
               and (P is ConstraintCone.ZERO or lam == 0 or abs(gx) <= tol))
    psd_ok = lam is not None and inertia(pair.A.combine(1, pair.B, lam)).psd
    if stationarity and sign_ok and psd_ok:
        verdict = KktVerdict.OPTIMAL
    elif stationarity and sign_ok:
        verdict = KktVerdict.NOT_CERTIFIED
    elif qualified:
        verdict = KktVerdict.NOT_OPTIMAL
    else:
        verdict = KktVerdict.UNVERIFIED
    return KktReport(stationarity, psd_ok, sign_ok, lam, verdict)


@dataclass(frozen=True)
class SlemmaReport:
    """ premise: g(x) in -P implies f(x) >= 0 (None when undecided);
    certified: lam in P* with f + lam g >= 0 everywhere
    """
    premise: Optional[bool]
    lambda_: Optional[Scalar]
    certified: bool
    warnings: tuple[str, ...] = ()

    @property
    def holds(self) -> Optional[bool]:
        return self.premise


def slemma_certify(pair: QuadraticPair, P) -> SlemmaReport:
    P = as_cone(P)
    exact_input = pair.mode is Mode.EXACT
    pair = pair.exact()
    warnings = []
    if not slater_check(pair, P).ok:
        warnings.append("Slater condition fails")
    if P is ConstraintCone.ZERO:
        if pair.g.is_identically_zero():
            warnings.append("g vanishes identically")
        conditions = convexity_conditions(pair, (1, 0))
        if not any(conditions[k] for k in ("C1", "C2", "C3")):
            warnings.append("only C4 holds for d = (1, 0)" if conditions["C4"]
                            else "none of C1-C4 holds for d = (1, 0)")
    for w in warnings:
        logging.warning("S-lemma hypothesis not verified: %s", w)

    tol = _tol(pair, "certificate")
    try:
        report = solve_dual(pair, P)
    except Infeasible:
        return SlemmaReport(True, None, False, tuple(warnings) + ("constraint set is empty",))
    if report.mu_status is MuStatus.MINUS_INFINITY:
        premise = False
    elif report.mu_lower is not None and float(report.mu_lower) >= -tol:
        premise = True
    elif report.mu_upper is not None and float(report.mu_upper) < -tol:
        premise = False
    else:
        premise = None

    lam, certified = report.lambda_star, False
    if premise and lam is not None and scalar_mode(lam) is Mode.EXACT:
        value = dual_value(pair, lam, P)
        floor = 0 if exact_input else -tol
        certified = (inertia(pair.A.combine(1, pair.B, lam)).psd
                     and value is not None and value >= floor)
        if not certified:
            warnings.append("multiplier {} does not certify f + lam g >= 0".format(lam))
    return SlemmaReport(premise, lam if certified else None, certified, tuple(warnings))


@dataclass(frozen=True)
class NoSlaterReport:
    """ min f on {g = 0} for g >= 0: x_bar with 2B x_bar + b = 0 and
    2A x_bar + a + 2B v = 0
    """
    solvable: bool
    x_bar: Optional[Vector] = None
    v: Optional[Vector] = None
    mu: Optional[Fraction] = None
    failed: Optional[str] = None


def solve_no_slater(pair: QuadraticPair) -> NoSlaterReport:
    pair = pair.exact()
    n = pair.n
    if not inertia(pair.B).psd:
        raise PreconditionViolated("B is not positive semidefinite, g takes negative values")
    rng = g_range(pair.g)
    if rng.low is None or rng.low < 0:
        raise PreconditionViolated("g takes negative values")
    if rng.low > 0:
        return NoSlaterReport(False, failed="g has no zero, the constraint set is empty")
    K = kernel_basis(pair.B)
    if K and not inertia(restrict_form(pair.A, K)).psd:
        return NoSlaterReport(False, failed="A is not positive semidefinite on ker B")
    zeros = [Fraction(0)] * n
    rows = [[2 * x for x in r] + zeros for r in pair.B.rows]
    rows += [[2 * x for x in ra] + [2 * y for y in rb] for ra, rb in zip(pair.A.rows, pair.B.rows)]
    rhs = [-x for x in pair.b] + [-x for x in pair.a]
    sol = solve_system(rows, rhs, 2 * n)
    if sol is None:
        return NoSlaterReport(False, failed="the optimality system has no solution, f is unbounded on {g = 0}")
    x_bar, v = sol[:n], sol[n:]
    return NoSlaterReport(True, x_bar, v, pair.f(x_bar))


@dataclass(frozen=True)
class FinitenessReport:
    """ holds: the necessary condition for a finite mu is met. `direction`
    is the offending (or explaining) v, `multiplier` a lam >= 0 with
    A + lam B >= 0 when one certifies the condition. `mu_minus_infinity`
    is set when the failed condition and a feasible point force mu = -inf.
    """
    holds: bool
    direction: Optional[tuple] = None
    multiplier: Optional[Fraction] = None
    mechanism: str = ""
    mu_minus_infinity: bool = False


def _negative_on_cone(pair: QuadraticPair) -> Optional[Vector]:
    """ v with <Bv,v> <= 0 and <Av,v> < 0, tried on a few candidates
    """
    A, B = pair.A, pair.B
    candidates = []
    u = negative_direction(A)
    if u is not None:
        candidates.append(u)
    An, Bn = A.to_numpy(), B.to_numpy()
    for t in np.concatenate([[0.0], np.logspace(-3, 3, 25)]):
        vectors = np.linalg.eigh(An + t * Bn)[1]
        for j in range(pair.n):
            candidates.append(rationalize_vector(vectors[:, j]))
    for v in candidates:
        if not is_zero_vector(v) and B.quad(v) <= 0 and A.quad(v) < 0:
            return v
    return None


def _isotropic_negative(pair: QuadraticPair) -> Optional[tuple]:
    """ v with <Bv,v> = 0 and <Av,v> < 0: ker B first, then the isotropic
    directions p +- s m of each positive/negative pivot pair of B
    """
    A, B = pair.A, pair.B
    K = kernel_basis(B)
    if K:
        y = negative_direction(restrict_form(A, K))
        if y is not None:
            return combine_basis(K, y)
    congruence = ldl_congruence(B)
    pos = [(d, c) for d, c in zip(congruence.pivots, congruence.columns) if d > 0]
    neg = [(d, c) for d, c in zip(congruence.pivots, congruence.columns) if d < 0]
    for dp, p in pos:
        for dm, m in neg:
            r = -dp / dm
            for sign in (1, -1):
                v = SurdVector(tuple(p), tuple(sign * x for x in m), r)
                if v.quad(A).sign() < 0:
                    return v.best()
    return None


def _finiteness(pair: QuadraticPair, P: ConstraintCone) -> FinitenessReport:
    if P is ConstraintCone.NONNEG:
        if negative_direction(pair.B) is not None:
            interval = _dual_interval(pair, P)
            if not interval.empty:
                lam = _psd_multiplier(pair, P, Fraction(0))
                return FinitenessReport(True, multiplier=lam,
                                        mechanism="A + lam B >= 0 for some lam >= 0")
            return FinitenessReport(False, _negative_on_cone(pair),
                                    mechanism="<Bv,v> <= 0 with <Av,v> < 0: mu = -inf")
        K = kernel_basis(pair.B)
        if not K:
            return FinitenessReport(True, mechanism="B is positive definite")
        y = negative_direction(restrict_form(pair.A, K))
        if y is None:
            return FinitenessReport(True, mechanism="A is positive semidefinite on ker B")
        return FinitenessReport(False, combine_basis(K, y),
                                mechanism="Bv = 0 with <Av,v> < 0: mu = -inf")

    rng = g_range(pair.g)
    if not rng.contains(0):
        return FinitenessReport(True, mechanism="g never vanishes: the constraint set is empty")
    affine = _affine_constraint(pair, P, rng)
    if affine is not None:
        value, x, ray = _affine_primal(pair, *affine)
        if ray is None:
            return FinitenessReport(True, x, mechanism="f attains {} on the affine set g = 0".format(value))
        return FinitenessReport(False, ray[1],
                                mechanism="f is unbounded below along a line inside g = 0: mu = -inf")

    v = _isotropic_negative(pair)
    if v is None:
        return FinitenessReport(True, mechanism="no v with <Bv,v> = 0 and <Av,v> < 0")
    if not _exact(v) or not is_zero_vector(pair.B.apply(v)):
        return FinitenessReport(False, v, mechanism="<Bv,v> = 0, <Av,v> < 0 but Bv != 0: mu = -inf")
    slope = dot(pair.b, v)
    if slope == 0:
        return FinitenessReport(False, v, mechanism="<Av,v> < 0 along v keeping g constant: mu = -inf")
    return FinitenessReport(
        True, v,
        mechanism="f(x + tv) -> -inf in both directions along v, but g moves off 0 "
                  "at rate <b,v> = {} along v".format(slope))


def finiteness_preconditions(pair: QuadraticPair, P) -> FinitenessReport:
    P = as_cone(P)
    pair = pair.exact()
    report = _finiteness(pair, P)
    if report.holds:
        return report
    rng = g_range(pair.g)
    feasible = rng.contains(0) if P is ConstraintCone.ZERO else (rng.low is None or rng.low <= 0)
    return replace(report, mu_minus_infinity=feasible)


class ArgminStatus(Enum):
    NONEMPTY_COMPACT = "nonempty-compact"
    NONEMPTY = "nonempty"
    ATTAINED = "attained"
    UNBOUNDED = "mu-minus-infinity"
    UNKNOWN = "unknown-may-be-empty"


@dataclass(frozen=True)
class ExistenceReport:
    nd_holds: bool
    status: ArgminStatus
    solution: Optional[Vector] = None
    diagnostics: tuple[str, ...] = ()


def _recession_solution(pair: QuadraticPair) -> Optional[Vector]:
    """ x0 + t v with x0 the min-norm minimizer of f, Av = 0, <a,v> = 0,
    <Bv,v> < 0 and t large enough for g <= 0
    """
    W = nullspace([list(r) for r in pair.A.rows] + [list(pair.a)], pair.n)
    if not W:
        return None
    y = negative_direction(restrict_form(pair.B, W))
    x0 = solve_linear(pair.A, scale(Fraction(-1, 2), pair.a))
    if y is None or x0 is None:
        return None
    v = combine_basis(W, y)
    for x in _ray_points((x0, v)):
        if pair.g(x) <= 0:
            return x
    return None


def existence_report(pair: QuadraticPair, P) -> ExistenceReport:
    P = as_cone(P)
    pair = pair.exact()
    nd = nd_check(pair).holds
    report = solve_dual(pair, P)
    notes = report.diagnostics
    if report.mu_status is MuStatus.MINUS_INFINITY:
        return ExistenceReport(nd, ArgminStatus.UNBOUNDED, None, notes)
    if report.mu_status is not MuStatus.FINITE:
        return ExistenceReport(nd, ArgminStatus.UNKNOWN, None, notes)
    if nd:
        if P is ConstraintCone.ZERO:
            return ExistenceReport(nd, ArgminStatus.NONEMPTY_COMPACT, report.x_star, notes)
        solution = _recession_solution(pair)
        if solution is None or pair.f(solution) != report.mu:
            solution = report.x_star
        return ExistenceReport(nd, ArgminStatus.NONEMPTY, solution, notes)
    if report.primal_attained:
        return ExistenceReport(nd, ArgminStatus.ATTAINED, report.x_star, notes)
    return ExistenceReport(nd, ArgminStatus.UNKNOWN, None,
                           notes + ("ND fails and no minimizer was recovered",))


@dataclass(frozen=True)
class EpigraphCheck:
    """ F(R^n) + R+(1,0); when it is nonconvex the dual is identically -inf
    """
    verdict: ConvexityVerdict
    dual_unbounded: bool


def epigraph_convexity(pair: QuadraticPair) -> EpigraphCheck:
    verdict = augmented_convexity(pair, (1, 0))
    return EpigraphCheck(verdict, not verdict.convex)
