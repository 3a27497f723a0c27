"""
Exact convexity decisions for the joint range F(R^n) and for F(R^n) + R+ d.

For a direction d write

    e = d1 a + d2 b,   c = d1 b - d2 a,   S = (d1 A + d2 B) / |d|^2

When d2 A = d1 B the component of F along d_perp is affine, <c, x> + const,
and the component along d is the quadratic |d|^2 <Sx,x> + <e,x> + const.
So membership of a plane point in F(R^n) + R+ d is a quadratic
minimization over a hyperplane, which we can do exactly. Every other d is
harmless: F(R^n) + R+ d is convex as soon as one of

    C1  F_L(ker A and ker B) != {0}
    C2  d2 A != d1 B
    C3  -d is not a value of F_H
    C4  F_H(u) = -d with {d, F_L(u)} dependent, for some u

holds, and F(R^n) itself is convex exactly when that is so for every d.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core import (
    QuadraticPair, QuadraticFunction, SymMatrix, PlaneDirection, PlanePoint, Vector,
    ZeroDirection, PreconditionViolated, hom_part, line_linear_part, li2, cross, dot,
    add, scale, is_zero_vector, proportional_direction, eval_pair,
)
from .ratlinalg import (
    intersect_kernels, inertia, negative_direction, restrict_form, hyperplane_basis,
    solve_linear, solve_system, restrict_function, minimize, maximize,
)
from .cones import classify_hom_range, ConeKind
from .pencil import eig_sym


class AlternativeViolated(Exception):
    """ Neither side of the boundary / semidefinite alternative holds
    """


def _direction(d) -> PlaneDirection:
    if isinstance(d, PlaneDirection):
        return d.exact()
    if all(x == 0 for x in d):
        raise ZeroDirection("direction (0, 0)")
    return PlaneDirection(*d).exact()


class LineTag(Enum):
    LD = "ld-convex"
    LI = "li-nonconvex"
    B1 = "li-b1"
    B2 = "li-b2"
    B3 = "li-b3"


@dataclass(frozen=True)
class LineShape:
    """ Shape of F(x + R u), or of F(x + R u) + R+ d when d is given
    """
    tag: LineTag
    x: Vector
    u: Vector
    d: Optional[PlaneDirection]
    convex: bool


def line_restriction(pair: QuadraticPair, x: Sequence, u: Sequence,
                     d: Optional[Sequence] = None) -> LineShape:
    """ F(x + tu) = t^2 F_H(u) + t L + F(x), L = (<2Ax+a,u>, <2Bx+b,u>)
    """
    pair = pair.exact()
    if is_zero_vector(u):
        raise ZeroDirection("line through a zero direction")
    h = hom_part(pair, u)
    lin = line_linear_part(pair, x, u)
    d = _direction(d) if d is not None else None
    x, u = tuple(Fraction(v) for v in x), tuple(Fraction(v) for v in u)
    if not li2(h, lin):
        return LineShape(LineTag.LD, x, u, d, True)
    if d is None:
        return LineShape(LineTag.LI, x, u, d, False)
    side = cross(d.as_point(), h)
    if side == 0 and dot(d.as_point(), h) > 0:
        return LineShape(LineTag.B1, x, u, d, True)
    if side == 0:
        return LineShape(LineTag.B2, x, u, d, False)
    return LineShape(LineTag.B3, x, u, d, True)


@dataclass(frozen=True)
class DirectionalForms:
    """ The pair seen along d: F(x) = (q(x) d + (<c,x> + r) d_perp) / |d|^2
    when d2 A = d1 B, with q(x) = <(d1 A + d2 B) x, x> + <e, x> + k_d
    """
    d: PlaneDirection
    along: QuadraticFunction
    c: Vector
    offset: Fraction
    aligned: bool

    @classmethod
    def of(cls, pair: QuadraticPair, d: PlaneDirection) -> "DirectionalForms":
        d1, d2 = d.as_point()
        along = QuadraticFunction(pair.A.combine(d1, pair.B, d2),
                                  add(scale(d1, pair.a), scale(d2, pair.b)),
                                  d1 * pair.k[0] + d2 * pair.k[1])
        c = add(scale(d1, pair.b), scale(-d2, pair.a))
        offset = d1 * pair.k[1] - d2 * pair.k[0]
        aligned = pair.A.scaled(d2) == pair.B.scaled(d1)
        return cls(d, along, c, offset, aligned)

    @property
    def norm2(self) -> Fraction:
        return dot(self.d.as_point(), self.d.as_point())

    @property
    def S(self) -> SymMatrix:
        return self.along.A.scaled(1 / self.norm2)

    def coordinates(self, y: Sequence) -> tuple[Fraction, Fraction]:
        """ (<d, y>, <d_perp, y>)
        """
        return dot(self.d.as_point(), y), cross(self.d.as_point(), y)

    def on_hyperplane(self, level: Fraction) -> Optional[QuadraticFunction]:
        """ `along` restricted to {<c, x> + offset = level}, None when empty
        """
        n = len(self.c)
        target = level - self.offset
        if is_zero_vector(self.c):
            if target != 0:
                return None
            base = tuple(Fraction(0) for _ in range(n))
            W = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        else:
            base = solve_system([self.c], [target], n)
            W = hyperplane_basis(self.c)
        return restrict_function(self.along, base, W)


def _aligned_forms(pair: QuadraticPair, d) -> DirectionalForms:
    forms = DirectionalForms.of(pair.exact(), _direction(d))
    if not forms.aligned:
        raise PreconditionViolated("d2 A != d1 B for d = {}".format(forms.d))
    return forms


def augmented_range_contains(pair: QuadraticPair, d, y: Sequence) -> bool:
    """ y in F(R^n) + R+ d, exact, for d with d2 A = d1 B
    """
    forms = _aligned_forms(pair, d)
    s, level = forms.coordinates(tuple(Fraction(v) for v in y))
    q = forms.on_hyperplane(level)
    if q is None:
        return False
    low = minimize(q)
    return low.value is None or low.value <= s


def joint_range_contains(pair: QuadraticPair, y: Sequence) -> Optional[bool]:
    """ y in F(R^n), exact when A and B are proportional (or both zero);
    None for other pairs
    """
    pair = pair.exact()
    if pair.A.is_zero() and pair.B.is_zero():
        d = PlaneDirection(1, 0)
    else:
        prop = proportional_direction(pair.A, pair.B)
        if prop is None:
            return None
        d = prop[0]
    forms = DirectionalForms.of(pair, d)
    s, level = forms.coordinates(tuple(Fraction(v) for v in y))
    q = forms.on_hyperplane(level)
    if q is None:
        return False
    low, high = minimize(q), maximize(q)
    return (low.value is None or low.value <= s) and (high.value is None or s <= high.value)


@dataclass(frozen=True)
class Witness:
    """ p = F(x_p), q = F(x_q) and their midpoint m outside the set
    """
    p: PlanePoint
    q: PlanePoint
    m: PlanePoint
    x_p: Vector
    x_q: Vector
    gamma: Fraction


@dataclass(frozen=True)
class ConvexityVerdict:
    convex: bool
    direction: Optional[PlaneDirection] = None
    conditions: dict = field(default_factory=dict)
    reason: str = ""
    witness: Optional[Witness] = None


def convexity_conditions(pair: QuadraticPair, d) -> dict:
    """ Which of C1..C4 hold for d. C3 and C4 are only decided (and only
    matter) when C2 fails; otherwise they are reported as None.
    """
    pair = pair.exact()
    d = _direction(d)
    K = intersect_kernels(pair.A, pair.B)
    c1 = any(dot(pair.a, k) != 0 or dot(pair.b, k) != 0 for k in K)
    forms = DirectionalForms.of(pair, d)
    c2 = not forms.aligned
    c3 = c4 = None
    if not c2:
        c3 = inertia(forms.S).psd
        if c3:
            c4 = False
        elif is_zero_vector(forms.c):
            c4 = True
        else:
            c4 = not inertia(restrict_form(forms.S, hyperplane_basis(forms.c))).psd
    return {"C1": c1, "C2": c2, "C3": c3, "C4": c4}


def _witness(pair: QuadraticPair, forms: DirectionalForms) -> Witness:
    S = forms.S
    u = negative_direction(S)
    e = forms.along.a
    n = pair.n
    zero = tuple(Fraction(0) for _ in range(n))
    if is_zero_vector(e) or _parallel(e, forms.c):
        x_a = zero
    else:
        x_a = solve_linear(S, scale(Fraction(-1, 2) / forms.norm2, e))
        if x_a is None:
            # stationary on the hyperplane: 2|d|^2 S x + e = mu c
            rows = [list(r) + [-ci] for r, ci in zip(S.scaled(2 * forms.norm2).rows, forms.c)]
            sol = solve_system(rows, scale(-1, e), n + 1)
            if sol is None:
                raise PreconditionViolated("no stationary point on the hyperplane")
            x_a = sol[:n]
    gamma = Fraction(1)
    for _ in range(64):
        x_p, x_q = add(x_a, scale(gamma, u)), add(x_a, scale(-gamma, u))
        p, q = eval_pair(pair, x_p), eval_pair(pair, x_q)
        m = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        if not augmented_range_contains(pair, forms.d, m):
            return Witness(p, q, m, x_p, x_q, gamma)
        gamma *= 2
    raise PreconditionViolated("no certified midpoint for d = {}".format(forms.d))


def _parallel(e: Sequence, c: Sequence) -> bool:
    """ e and c parallel (c != 0)
    """
    if is_zero_vector(c):
        return False
    i = next(i for i, v in enumerate(c) if v != 0)
    ratio = e[i] / c[i]
    return all(x == ratio * y for x, y in zip(e, c))


def augmented_convexity(pair: QuadraticPair, d) -> ConvexityVerdict:
    """ Decide convexity of F(R^n) + R+ d; nonconvex verdicts come with a
    certified midpoint
    """
    pair = pair.exact()
    d = _direction(d)
    conditions = convexity_conditions(pair, d)
    fired = [k for k in ("C1", "C2", "C3", "C4") if conditions[k]]
    if fired:
        return ConvexityVerdict(True, d, conditions, fired[0])
    forms = DirectionalForms.of(pair, d)
    witness = _witness(pair, forms)
    logging.debug("F + R+%s nonconvex, midpoint %s", d, witness.m)
    return ConvexityVerdict(False, d, conditions, "b1-b2-b3", witness)


def candidate_directions(pair: QuadraticPair) -> list[PlaneDirection]:
    """ The only d that can break convexity: both orientations of the
    proportionality direction of (A, B)
    """
    pair = pair.exact()
    prop = proportional_direction(pair.A, pair.B)
    if prop is None:
        return []
    d = prop[0]
    return [d, -d]


def joint_range_convexity(pair: QuadraticPair) -> ConvexityVerdict:
    pair = pair.exact()
    if pair.A.is_zero() and pair.B.is_zero():
        return ConvexityVerdict(True, reason="affine")
    K = intersect_kernels(pair.A, pair.B)
    if any(dot(pair.a, k) != 0 or dot(pair.b, k) != 0 for k in K):
        return ConvexityVerdict(True, reason="kernel")
    candidates = candidate_directions(pair)
    if not candidates:
        kind = classify_hom_range(pair).kind
        return ConvexityVerdict(True, reason="plane" if kind is ConeKind.PLANE else "interior")
    per_direction = {}
    for d in candidates:
        verdict = augmented_convexity(pair, d)
        per_direction[str(d)] = verdict.conditions
        if not verdict.convex:
            return ConvexityVerdict(False, d, per_direction, verdict.reason, verdict.witness)
    return ConvexityVerdict(True, conditions=per_direction, reason="proportional")


def at_most_two_directions(pair: QuadraticPair) -> set[PlaneDirection]:
    found = {d for d in candidate_directions(pair) if not augmented_convexity(pair, d).convex}
    assert len(found) <= 2, "more than two nonconvex directions"
    return found


def cone_augmented_convexity(pair: QuadraticPair, generators: Sequence[Sequence]) -> ConvexityVerdict:
    """ Convexity of F(R^n) + P for the closed convex cone P spanned by the
    generators
    """
    gens = [tuple(Fraction(v) for v in g) for g in generators if not is_zero_vector(g)]
    if not gens:
        return joint_range_convexity(pair)
    first = gens[0]
    if any(cross(first, g) != 0 for g in gens[1:]):
        return ConvexityVerdict(True, reason="cone-interior")
    if any(dot(first, g) < 0 for g in gens[1:]):
        return ConvexityVerdict(True, reason="line")
    return augmented_convexity(pair, first)


@dataclass(frozen=True)
class Alternative:
    not_in_neg_boundary: bool
    pencil_semidefinite: bool


def alternative_check(pair: QuadraticPair, d) -> Alternative:
    """ Either d is not in -bd F_H(R^n) or d2 A - d1 B is semidefinite
    """
    pair = pair.exact()
    d = _direction(d)
    d1, d2 = d.as_point()
    cone = classify_hom_range(pair)
    outside = not cone.on_boundary((-d1, -d2))
    semidefinite = inertia(pair.A.combine(d2, pair.B, -d1)).semidefinite
    if not (outside or semidefinite):
        raise AlternativeViolated("d = {} on -bd F_H with an indefinite d2 A - d1 B".format(d))
    return Alternative(outside, semidefinite)


class Shape(Enum):
    PUNCTURED = "punctured"
    SLIT = "slit"
    PARABOLA = "parabola"
    PARABOLIC_REGION = "parabolic-region"


@dataclass(frozen=True)
class CanonicalForm:
    """ F(C y - xbar) = (y_1^2 + .. + y_m^2 - y_{m+1}^2) d
                        + (t1 y_1 + t2 y_{m+1}) d_perp - k
    """
    d: PlaneDirection
    m: int
    l: int
    t1: float
    t2: float
    k: PlanePoint
    C: np.ndarray = field(compare=False)
    xbar: Vector = ()
    shape: Shape = Shape.PUNCTURED

    def model(self, y: Sequence[float]) -> tuple[float, float]:
        y = np.asarray(y, dtype=float)
        m = self.m
        quad = float(np.sum(y[:m] ** 2) - y[m] ** 2)
        lin = (self.t1 * y[0] if m > 0 else 0.0) + self.t2 * y[m]
        d1, d2 = float(self.d.d1), float(self.d.d2)
        return (quad * d1 - lin * d2 - float(self.k[0]),
                quad * d2 + lin * d1 - float(self.k[1]))

    def point(self, y: Sequence[float]) -> np.ndarray:
        """ x = C y - xbar
        """
        return self.C @ np.asarray(y, dtype=float) - np.array([float(v) for v in self.xbar])


def nonconvex_canonical_form(pair: QuadraticPair, d) -> CanonicalForm:
    pair = pair.exact()
    d = _direction(d)
    if augmented_convexity(pair, d).convex:
        raise PreconditionViolated("F + R+{} is convex".format(d))
    forms = DirectionalForms.of(pair, d)
    S = forms.S
    n = pair.n
    signs = inertia(S)
    m, l = signs.n_plus, signs.n_zero
    # shift: S x0 = -e / (2|d|^2) removes the linear part along d
    x0 = solve_linear(S, scale(Fraction(-1, 2) / forms.norm2, forms.along.a))
    k = tuple(-v for v in eval_pair(pair, x0))
    # t1^2 - t2^2 = <S^+ c', c'>, which is exact
    gap = dot(forms.c, solve_linear(S, forms.c))
    if gap == 0:
        shape = Shape.PUNCTURED if m + 1 == 2 else Shape.SLIT
    else:
        shape = Shape.PARABOLA if m + 1 == 1 else Shape.PARABOLIC_REGION

    decomp = eig_sym(S.to_numpy())
    ev, V = decomp.eigenvalues, decomp.eigenvectors
    neg = V[:, 0] / np.sqrt(-ev[0])
    zeros = V[:, 1:1 + l]
    pos = V[:, 1 + l:] / np.sqrt(ev[1 + l:])
    cp = np.array([float(v) for v in forms.c]) / float(forms.norm2)
    t2 = float(neg @ cp)
    if t2 < 0:
        neg, t2 = -neg, -t2
    t1 = 0.0
    if m:
        w = pos.T @ cp
        t1 = float(np.linalg.norm(w))
        if t1 > 0:
            # Householder reflection sending w to t1 e_1
            v = w - t1 * np.eye(m)[0]
            if np.linalg.norm(v) > 1e-300:
                R = np.eye(m) - 2.0 * np.outer(v, v) / (v @ v)
            else:
                R = np.eye(m)
            pos = pos @ R.T
    C = np.column_stack([pos, neg[:, None], zeros]) if m else np.column_stack([neg[:, None], zeros])
    return CanonicalForm(d, m, l, t1, t2, k, C.reshape(n, n), tuple(-v for v in x0), shape)
