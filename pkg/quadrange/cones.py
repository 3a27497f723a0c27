"""
The homogeneous joint range F_H(R^n) = {(<Au,u>, <Bu,u>)}.

It is always a convex cone. We classify its closure, say whether it is
closed, decide non-degeneracy (ND) and evaluate the list of classical
pencil properties (SD, definite member, Finsler and friends), checking the
known implications between them on every call.

Two variables are handled exactly through the ellipse picture in
`binary.py`. Common kernels are factored out first, so larger pairs whose
reduced form lives on R^2 are exact too; everything else goes through the
angular sweep of the pencil.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import pi as PI, sin, cos
from typing import Optional, Sequence

import numpy as np

from .config import settings
from .core import (
    SymMatrix, QuadraticPair, PlaneDirection, PlanePoint, Vector, Mode,
    PreconditionViolated, cross, dot, primitive_vector, sign_normalized,
    proportional_direction, to_exact, is_zero_vector,
)
from .ratlinalg import (
    intersect_kernels, orthogonal_complement, restrict_form, inertia,
    kernel_basis, isotropic_vector, rationalize_vector, rationalize,
)
from .binary import BinaryImage, SurdVector, Surd, binary_form_roots
from .pencil import (
    angular_sweep, pencil_maximum, simdiag, SdVerdict, tolerance,
)


class ImplicationViolated(Exception):
    """ Two pencil properties contradict a known implication
    """


class ConeKind(Enum):
    ZERO = "zero"
    RAY = "ray"
    LINE = "line"
    SECTOR = "pointed-sector"
    HALFPLANE = "halfplane"
    PLANE = "plane"


class Closedness(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def _surd_cross(g: SurdVector, h: SurdVector) -> Surd:
    if g.r != h.r and g.r != 0 and h.r != 0:
        raise ValueError("generators from different quadratic fields")
    r = g.r or h.r
    return Surd(cross(g.base, h.base) + r * cross(g.coef, h.coef),
                cross(g.base, h.coef) + cross(g.coef, h.base), r)


def _exact_point(y: Sequence) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in y)


@dataclass(frozen=True)
class ConeClass:
    """ Closure of F_H(R^n) by kind, with `closed` qualifying the set itself.

    RAY and LINE carry one generator, SECTOR two in counterclockwise order
    (cross(u, v) > 0), HALFPLANE the inward normal.
    """
    kind: ConeKind
    closed: Closedness
    generators: tuple = ()
    normal: Optional[PlanePoint] = None
    exact: bool = True
    surds: tuple = field(default=(), repr=False, compare=False)

    def _tol(self, y: Sequence) -> float:
        if self.exact and _exact_point(y):
            return 0.0
        return settings["tolerance"]["relative"] * (1.0 + max(abs(float(v)) for v in y))

    def _cross(self, i: int, y: Sequence) -> int:
        """ sign of cross(generator_i, y)
        """
        if self.surds and _exact_point(y):
            return self.surds[i].cross(y).sign()
        g = self.generators[i]
        if self.exact and _exact_point(y) and _exact_point(g):
            v = cross(g, y)
            return (v > 0) - (v < 0)
        v = cross([float(x) for x in g], [float(x) for x in y])
        tol = self._tol(y) * (1.0 + max(abs(float(x)) for x in g))
        return 0 if abs(v) <= tol else (1 if v > 0 else -1)

    def _along(self, g: Sequence, y: Sequence, surd: Optional[SurdVector] = None) -> int:
        if surd is not None and _exact_point(y):
            return surd.dot(y).sign()
        if self.exact and _exact_point(y) and _exact_point(g):
            v = dot(g, y)
            return (v > 0) - (v < 0)
        v = dot([float(x) for x in g], [float(x) for x in y])
        tol = self._tol(y) * (1.0 + max(abs(float(x)) for x in g))
        return 0 if abs(v) <= tol else (1 if v > 0 else -1)

    def closure_contains(self, y: Sequence) -> bool:
        if self.kind is ConeKind.PLANE:
            return True
        if self.kind is ConeKind.ZERO:
            return all(abs(float(v)) <= self._tol(y) for v in y)
        if self.kind is ConeKind.HALFPLANE:
            return self._along(self.normal, y) >= 0
        if self.kind is ConeKind.LINE:
            return self._cross(0, y) == 0
        if self.kind is ConeKind.RAY:
            return self._cross(0, y) == 0 and self._along(
                self.generators[0], y, self.surds[0] if self.surds else None) >= 0
        # pointed sector, generators counterclockwise
        return self._cross(0, y) >= 0 and self._cross(1, y) <= 0

    def contains(self, y: Sequence) -> Optional[bool]:
        """ Membership in F_H(R^n) itself; None when only the closure is
        known and y sits on its boundary
        """
        if self.closed is Closedness.YES:
            return self.closure_contains(y)
        if not self.closure_contains(y):
            return False
        if self.kind is ConeKind.HALFPLANE:
            if self._along(self.normal, y) > 0:
                return True
            if all(v == 0 for v in y):
                return True
            return False if self.closed is Closedness.NO else None
        return None

    def on_boundary(self, y: Sequence) -> bool:
        """ y in the boundary of the closure
        """
        if self.kind is ConeKind.PLANE:
            return False
        if self.kind is ConeKind.ZERO:
            return self.closure_contains(y)
        if self.kind in (ConeKind.RAY, ConeKind.LINE):
            return self.closure_contains(y)
        if self.kind is ConeKind.HALFPLANE:
            return self._along(self.normal, y) == 0
        return self.closure_contains(y) and (self._cross(0, y) == 0 or self._cross(1, y) == 0)

    def boundary_directions(self) -> tuple:
        """ The rays making up the boundary of the closure
        """
        if self.kind in (ConeKind.RAY, ConeKind.SECTOR):
            return self.generators
        if self.kind is ConeKind.LINE:
            g = self.generators[0]
            return (g, tuple(-x for x in g))
        if self.kind is ConeKind.HALFPLANE:
            p = self.normal
            return ((p[1], -p[0]), (-p[1], p[0]))
        return ()


def _plane_direction(d) -> PlanePoint:
    return PlaneDirection(*d).as_point()


def _sector(gens: list, closed: Closedness, exact: bool, surds: list = None) -> ConeClass:
    u, v = gens
    if surds:
        if _surd_cross(surds[0], surds[1]).sign() < 0:
            u, v = v, u
            surds = [surds[1], surds[0]]
    elif cross(u, v) < 0:
        u, v = v, u
    if surds:
        pretty = []
        for g, s in zip((u, v), surds):
            pretty.append(primitive_vector(g) if s.is_rational else g)
        u, v = pretty
        if all(s.is_rational for s in surds):
            surds = []
    elif exact:
        u, v = primitive_vector(u), primitive_vector(v)
    return ConeClass(ConeKind.SECTOR, closed, (tuple(u), tuple(v)), exact=exact,
                     surds=tuple(surds or ()))


def _classify_binary(A: SymMatrix, B: SymMatrix) -> ConeClass:
    image = BinaryImage.of(A, B)
    if image.det == 0:
        gens = image.segment_generators()
        return _sector([g.best() for g in gens], Closedness.YES, True, gens)
    kappa = image.excess()
    if kappa < 0:
        return ConeClass(ConeKind.PLANE, Closedness.YES)
    if kappa == 0:
        N = image.gram_inverse()
        nu = (N[0][0] * image.c[0] + N[0][1] * image.c[1],
              N[1][0] * image.c[0] + N[1][1] * image.c[1])
        return ConeClass(ConeKind.HALFPLANE, Closedness.NO, normal=primitive_vector(nu))
    gens = image.tangent_generators()
    return _sector([g.best() for g in gens], Closedness.YES, True, gens)


def _classify_sweep(A: SymMatrix, B: SymMatrix) -> ConeClass:
    sweep = angular_sweep(A, B)
    if not sweep.arcs:
        return ConeClass(ConeKind.PLANE, Closedness.YES, exact=False)
    lo, hi = max(sweep.arcs, key=lambda arc: arc[1] - arc[0])
    if hi - lo <= settings["sweep"]["confirm"]:
        t = (lo + hi) / 2.0
        closed = Closedness.YES if sweep.definite else Closedness.UNKNOWN
        return ConeClass(ConeKind.HALFPLANE, closed, normal=(cos(t), sin(t)), exact=False)
    closed = Closedness.YES if sweep.definite else Closedness.UNKNOWN
    gens = [(sin(hi), -cos(hi)), (-sin(lo), cos(lo))]
    return _sector(gens, closed, False)


def classify_forms(A: SymMatrix, B: SymMatrix) -> ConeClass:
    A, B = A.exact(), B.exact()
    if A.is_zero() and B.is_zero():
        return ConeClass(ConeKind.ZERO, Closedness.YES)
    prop = proportional_direction(A, B)
    if prop is not None:
        d, S = prop
        signs = inertia(S)
        if signs.psd:
            return ConeClass(ConeKind.RAY, Closedness.YES, (d.as_point(),))
        if signs.nsd:
            return ConeClass(ConeKind.RAY, Closedness.YES, ((-d).as_point(),))
        return ConeClass(ConeKind.LINE, Closedness.YES, (d.as_point(),))
    K = intersect_kernels(A, B)
    if K:
        W = orthogonal_complement(K, A.n)
        return classify_forms(restrict_form(A, W), restrict_form(B, W))
    if A.n == 2:
        return _classify_binary(A, B)
    return _classify_sweep(A, B)


def classify_hom_range(pair: QuadraticPair) -> ConeClass:
    found = classify_forms(pair.A, pair.B)
    logging.debug("F_H closure %s closed=%s", found.kind.value, found.closed.value)
    return found


def hom_range_contains(pair: QuadraticPair, y: Sequence) -> Optional[bool]:
    return classify_hom_range(pair).contains(y)


@dataclass(frozen=True)
class NdCheck:
    """ ND verdict; when it fails `witness` is a nonzero v with F_H(v) = 0
    """
    holds: bool
    witness: Optional[Vector] = None
    exact: bool = True
    route: str = ""


def _isotropic_both(A: SymMatrix, B: SymMatrix, v: Sequence) -> bool:
    return not is_zero_vector(v) and A.quad(v) == 0 and B.quad(v) == 0


def _candidates(A: SymMatrix, B: SymMatrix):
    n = A.n
    for S in (A, B, A + B, A - B):
        yield from kernel_basis(S)
    unit = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    yield from unit
    for i in range(n):
        for j in range(i + 1, n):
            for s in (1, -1):
                yield tuple(unit[i][k] + s * unit[j][k] for k in range(n))
    yield tuple(Fraction(1) for _ in range(n))


def _gauss_newton_isotropic(A: SymMatrix, B: SymMatrix) -> Optional[np.ndarray]:
    """ Float unit vector with F_H(v) ~ 0, by least squares on
    (<Av,v>, <Bv,v>, |v|^2 - 1)
    """
    An, Bn = A.to_numpy(), B.to_numpy()
    n = A.n
    starts = []
    for M in (An, Bn, An + Bn, An - Bn):
        starts.extend(np.linalg.eigh(M)[1].T)
    rng = np.random.default_rng(settings["oracle"]["seed"])
    starts.extend(rng.standard_normal((settings["oracle"]["starts"], n)))
    tol = tolerance(An, Bn)
    best, best_res = None, np.inf
    for v in starts:
        v = v / np.linalg.norm(v)
        for _ in range(settings["oracle"]["iterations"]):
            r = np.array([v @ An @ v, v @ Bn @ v, v @ v - 1.0])
            J = np.vstack([2.0 * An @ v, 2.0 * Bn @ v, 2.0 * v])
            step = np.linalg.lstsq(J, -r, rcond=None)[0]
            v = v + step
            if np.linalg.norm(step) < 1e-14:
                break
        res = abs(v @ An @ v) + abs(v @ Bn @ v)
        if res < best_res and np.linalg.norm(v) > 0.5:
            best, best_res = v / np.linalg.norm(v), res
        if best_res <= tol:
            break
    return best


def nd_check(pair: QuadraticPair) -> NdCheck:
    return nd_forms(pair.A, pair.B)


def nd_forms(A: SymMatrix, B: SymMatrix) -> NdCheck:
    """ ND for the forms <Au,u>, <Bu,u>.

    A common kernel vector is the first witness to look for. Proportional
    pairs are ND exactly when the shared form is definite, two variables
    follow the ellipse picture and from three variables on ND is the same
    as having a definite member in the pencil.
    """
    A, B = A.exact(), B.exact()
    n = A.n
    K = intersect_kernels(A, B)
    if K:
        return NdCheck(False, sign_normalized(primitive_vector(K[0])), True, "kernel")
    prop = proportional_direction(A, B)
    if prop is not None:
        S = prop[1]
        if inertia(S).definite:
            return NdCheck(True, route="proportional")
        v = isotropic_vector(S)
        return NdCheck(False, v, _exact_point(v), "proportional")
    if n <= 1:
        return NdCheck(True, route="trivial")
    if n == 2:
        image = BinaryImage.of(A, B)
        if image.det != 0 and image.excess() == 0:
            v = sign_normalized(primitive_vector(image.preimage_of_origin()))
            return NdCheck(False, v, True, "binary")
        return NdCheck(True, route="binary")
    sweep = angular_sweep(A, B)
    if sweep.definite is not None:
        return NdCheck(True, exact=sweep.definite.exact is not None, route="definite-member")
    for v in _candidates(A, B):
        if _isotropic_both(A, B, v):
            return NdCheck(False, sign_normalized(primitive_vector(v)), True, "search")
    v = _gauss_newton_isotropic(A, B)
    if v is not None:
        for denominator in (10, 100, 10**4, settings["tolerance"]["witness_denominator"]):
            r = rationalize_vector(v, denominator)
            if _isotropic_both(A, B, r):
                return NdCheck(False, sign_normalized(primitive_vector(r)), True, "search")
    logging.debug("ND fails without an exact witness")
    return NdCheck(False, tuple(float(x) for x in v) if v is not None else None, False, "search")


def boundary_line(pair: QuadraticPair) -> PlaneDirection:
    """ Direction of the line bd F_H(R^n) when ND fails and F_H != R^2:
    R z_{u,v} for an isotropic v and any u with z_{u,v} != 0
    """
    cone = classify_hom_range(pair)
    if cone.kind is ConeKind.PLANE:
        raise PreconditionViolated("F_H(R^n) is the whole plane")
    nd = nd_check(pair)
    if nd.holds:
        raise PreconditionViolated("ND holds, the boundary is not a line")
    v = nd.witness
    if v is not None:
        if nd.exact:
            A, B = pair.A.exact(), pair.B.exact()
            Av, Bv = A.apply(v), B.apply(v)
        else:
            Av = tuple(pair.A.to_numpy() @ np.array(v, dtype=float))
            Bv = tuple(pair.B.to_numpy() @ np.array(v, dtype=float))
        tol = 0 if nd.exact else tolerance(pair.A, pair.B)
        for i in range(pair.n):
            z = (Av[i], Bv[i])
            if abs(z[0]) > tol or abs(z[1]) > tol:
                return PlaneDirection(*sign_normalized(z))
    # v in the common kernel: the cone itself tells the line
    if cone.kind in (ConeKind.RAY, ConeKind.LINE):
        return PlaneDirection(*sign_normalized(cone.generators[0]))
    if cone.kind is ConeKind.HALFPLANE:
        p = cone.normal
        return PlaneDirection(*sign_normalized((-p[1], p[0])))
    raise PreconditionViolated("no boundary line for a {} cone".format(cone.kind.value))


@dataclass(frozen=True)
class PropertyBattery:
    """ (a) SD, (b) definite member, (c) A + tB > 0, (d) strict Finsler,
    (e) ND, (f) nonstrict Finsler, (g) A + tB >= 0, (h) F_H = R^2.

    None marks an undecided item.
    """
    a: Optional[bool]
    b: bool
    c: bool
    d: bool
    e: bool
    f: bool
    g: bool
    h: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    def items(self) -> dict:
        return {k: getattr(self, k) for k in "abcdefgh"}


def _finsler(A: SymMatrix, B: SymMatrix, strict: bool) -> Optional[tuple[bool, object]]:
    """ <Bu,u> = 0, u != 0 implies <Au,u> > 0 (or >= 0). None when
    B is indefinite on more than two variables.
    """
    signs = inertia(B)
    if signs.definite:
        return True, "B definite"
    if signs.semidefinite:
        K = kernel_basis(B)
        restricted = inertia(restrict_form(A, K))
        return (restricted.pd if strict else restricted.psd), K
    if B.n != 2:
        return None
    roots = binary_form_roots(B[0, 0], B[0, 1], B[1, 1])
    for u in roots:
        s = u.quad(A).sign()
        if s < 0 or (strict and s == 0):
            return False, u.best()
    return True, tuple(u.best() for u in roots)


def _confirm_t(A: SymMatrix, B: SymMatrix, t: float, strict: bool) -> Optional[Fraction]:
    for denominator in (1, 10, 100, 10**4, settings["tolerance"]["witness_denominator"]):
        r = rationalize(t, denominator)
        signs = inertia(A.combine(1, B, r))
        if signs.pd if strict else signs.psd:
            return r
    return None


def _check(pattern: str, ok: bool, battery: dict):
    if not ok:
        raise ImplicationViolated("{} fails for {}".format(pattern, battery))


def check_implications(battery: PropertyBattery, n: int, b_indefinite: bool):
    p = battery.items()

    def implies(x, y):
        return x is None or y is None or not x or y

    def iff(x, y):
        return x is None or y is None or x == y

    _check("(b) => (a)", implies(p["b"], p["a"]), p)
    _check("(c) <=> (d)", iff(p["c"], p["d"]), p)
    _check("(not h and e) <=> (b)", iff((not p["h"]) and p["e"], p["b"]), p)
    if n >= 3:
        _check("(e) => (a)", implies(p["e"], p["a"]), p)
        _check("(e) <=> (b)", iff(p["e"], p["b"]), p)
    if b_indefinite:
        _check("(f) <=> (g)", iff(p["f"], p["g"]), p)


def property_battery(pair: QuadraticPair) -> PropertyBattery:
    """ Evaluate (a)-(h) and check the implication lattice
    """
    A, B = pair.A.exact(), pair.B.exact()
    n = A.n
    witnesses = {}
    cone = classify_forms(A, B)
    nd = nd_forms(A, B)
    sd = simdiag(A, B)
    witnesses["a"] = sd.columns
    witnesses["e"] = nd.witness
    a = {SdVerdict.DIAGONALIZED: True, SdVerdict.NOT_SD: False}.get(sd.verdict)
    h = cone.kind is ConeKind.PLANE
    e = nd.holds
    minus_e1 = (Fraction(-1), Fraction(0))
    prop = proportional_direction(A, B)
    if cone.exact:
        b = e and not h
        c = b and not cone.closure_contains(minus_e1)
        g = not cone.closure_contains(minus_e1)
    else:
        sweep = angular_sweep(A, B)
        b = sweep.definite is not None
        witnesses["b"] = (sweep.definite.t1, sweep.definite.t2) if b else None
        t_star, best = pencil_maximum(A, B)
        tol = tolerance(A, B)
        c = best > tol
        g = best >= -tol
        witnesses["g"] = t_star
        if c:
            witnesses["c"] = _confirm_t(A, B, t_star, True) or t_star
    strict = _finsler(A, B, True)
    nonstrict = _finsler(A, B, False)
    if strict is None:
        d, f = c, g
    else:
        d, witnesses["d"] = strict
        f, witnesses["f"] = nonstrict
    battery = PropertyBattery(a, b, c, d, e, f, g, h, witnesses)
    logging.debug("battery %s (cone %s, prop %s)", battery.items(), cone.kind.value,
                  prop is not None)
    check_implications(battery, n, inertia(B).indefinite)
    return battery
