"""
Exact arithmetic for two-variable forms.

On R^2 the homogeneous image is an ellipse:

    F_H(cos t, sin t) = c + M (cos 2t, sin 2t)

with c = (tr A, tr B)/2 and M built from the traceless parts. Everything
about the cone F_H(R^2) can be read off the position of the origin
relative to that ellipse, and the answers only need one square root. We
keep numbers of the form p + q*sqrt(r) symbolic (`Surd`, `SurdVector`) so
that sign tests stay exact.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import SymMatrix, Vector, PlanePoint, to_exact, cross, dot
from .ratlinalg import exact_sqrt


def surd_sign(alpha: Fraction, beta: Fraction, r: Fraction) -> int:
    """ Sign of alpha + beta*sqrt(r), r >= 0
    """
    if beta == 0 or r == 0:
        return (alpha > 0) - (alpha < 0)
    sb = (beta > 0) - (beta < 0)
    if alpha == 0:
        return sb
    sa = (alpha > 0) - (alpha < 0)
    if sa == sb:
        return sa
    lhs, rhs = alpha * alpha, beta * beta * r
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


@dataclass(frozen=True)
class Surd:
    """ alpha + beta*sqrt(r)
    """
    alpha: Fraction
    beta: Fraction
    r: Fraction

    def sign(self) -> int:
        return surd_sign(self.alpha, self.beta, self.r)

    def __float__(self) -> float:
        return float(self.alpha) + float(self.beta) * float(self.r) ** 0.5


@dataclass(frozen=True)
class SurdVector:
    """ base + sqrt(r) * coef, a vector with entries in Q(sqrt r)
    """
    base: Vector
    coef: Vector
    r: Fraction

    @classmethod
    def rational(cls, v: Sequence) -> "SurdVector":
        v = tuple(to_exact(x) for x in v)
        return cls(v, tuple(Fraction(0) for _ in v), Fraction(0))

    @property
    def is_rational(self) -> bool:
        return self.r == 0 or all(x == 0 for x in self.coef) or exact_sqrt(self.r) is not None

    def exact(self) -> Optional[Vector]:
        """ The vector itself when its entries are rational
        """
        s = exact_sqrt(self.r)
        if s is None:
            return None if any(x != 0 for x in self.coef) else self.base
        return tuple(b + s * c for b, c in zip(self.base, self.coef))

    def to_float(self) -> tuple[float, ...]:
        s = float(self.r) ** 0.5
        return tuple(float(b) + s * float(c) for b, c in zip(self.base, self.coef))

    def best(self) -> tuple:
        """ Exact entries when possible, floats otherwise
        """
        v = self.exact()
        return v if v is not None else self.to_float()

    def quad(self, S: SymMatrix) -> Surd:
        """ <S v, v> as alpha + beta sqrt(r)
        """
        alpha = S.quad(self.base) + self.r * S.quad(self.coef)
        beta = 2 * S.bilinear(self.base, self.coef)
        return Surd(to_exact(alpha), to_exact(beta), self.r)

    def dot(self, y: Sequence) -> Surd:
        return Surd(to_exact(dot(self.base, y)), to_exact(dot(self.coef, y)), self.r)

    def cross(self, y: Sequence) -> Surd:
        """ <v_perp, y> for plane vectors
        """
        return Surd(to_exact(cross(self.base, y)), to_exact(cross(self.coef, y)), self.r)

    def negated(self) -> "SurdVector":
        return SurdVector(tuple(-x for x in self.base), tuple(-x for x in self.coef), self.r)


def on_ray(g: SurdVector, y: Sequence) -> bool:
    """ y in R+ g, y != 0
    """
    if all(x == 0 for x in y):
        return False
    return g.cross(y).sign() == 0 and g.dot(y).sign() > 0


def binary_form_roots(n11: Fraction, n12: Fraction, n22: Fraction) -> Optional[list[SurdVector]]:
    """ Directions y with n11 y1^2 + 2 n12 y1 y2 + n22 y2^2 = 0. Returns None
    for the zero form, [] when there is no real root, otherwise one or two
    directions (each defined up to sign).
    """
    n11, n12, n22 = to_exact(n11), to_exact(n12), to_exact(n22)
    if n11 == 0 and n12 == 0 and n22 == 0:
        return None
    if n11 == 0:
        roots = [SurdVector.rational((1, 0))]
        if n12 != 0:
            roots.append(SurdVector.rational((-n22, 2 * n12)))
        return roots
    disc = n12 * n12 - n11 * n22
    if disc < 0:
        return []
    if disc == 0:
        return [SurdVector.rational((-n12, n11))]
    s = exact_sqrt(disc)
    if s is not None:
        return [SurdVector.rational((-n12 + s, n11)), SurdVector.rational((-n12 - s, n11))]
    return [SurdVector((-n12, n11), (Fraction(1), Fraction(0)), disc),
            SurdVector((-n12, n11), (Fraction(-1), Fraction(0)), disc)]


@dataclass(frozen=True)
class BinaryImage:
    """ F_H on R^2 as the ellipse c + M w, |w| = 1
    """
    c: PlanePoint
    M: tuple[PlanePoint, PlanePoint]

    @classmethod
    def of(cls, A: SymMatrix, B: SymMatrix) -> "BinaryImage":
        A, B = A.exact(), B.exact()
        half = Fraction(1, 2)
        c = ((A[0, 0] + A[1, 1]) * half, (B[0, 0] + B[1, 1]) * half)
        M = (((A[0, 0] - A[1, 1]) * half, A[0, 1]),
             ((B[0, 0] - B[1, 1]) * half, B[0, 1]))
        return cls(c, M)

    @property
    def det(self) -> Fraction:
        return self.M[0][0] * self.M[1][1] - self.M[0][1] * self.M[1][0]

    def inverse_apply(self, y: Sequence) -> PlanePoint:
        """ M^-1 y, M nonsingular
        """
        (m11, m12), (m21, m22) = self.M
        det = self.det
        return ((m22 * y[0] - m12 * y[1]) / det, (-m21 * y[0] + m11 * y[1]) / det)

    def gram_inverse(self) -> tuple[PlanePoint, PlanePoint]:
        """ (M M^T)^-1
        """
        (m11, m12), (m21, m22) = self.M
        g11 = m11 * m11 + m12 * m12
        g12 = m11 * m21 + m12 * m22
        g22 = m21 * m21 + m22 * m22
        det = g11 * g22 - g12 * g12
        return ((g22 / det, -g12 / det), (-g12 / det, g11 / det))

    def excess(self) -> Fraction:
        """ |M^-1 c|^2 - 1: negative when the origin is inside the ellipse,
        zero on it, positive outside
        """
        w = self.inverse_apply(self.c)
        return w[0] * w[0] + w[1] * w[1] - 1

    def preimage_of_origin(self) -> Vector:
        """ u in R^2 with F_H(u) = 0 when the origin is on the ellipse
        """
        w0 = self.inverse_apply(self.c)
        w0 = (-w0[0], -w0[1])
        if w0[0] == -1:
            return (Fraction(0), Fraction(1))
        return (1 + w0[0], w0[1])

    def tangent_generators(self) -> list[SurdVector]:
        """ The two tangent rays from the origin to the ellipse, origin outside
        """
        N = self.gram_inverse()
        nu = (N[0][0] * self.c[0] + N[0][1] * self.c[1],
              N[1][0] * self.c[0] + N[1][1] * self.c[1])
        kappa = self.excess()
        Q = [[nu[i] * nu[j] - kappa * N[i][j] for j in range(2)] for i in range(2)]
        roots = binary_form_roots(Q[0][0], Q[0][1], Q[1][1])
        return [g if g.dot(nu).sign() > 0 else g.negated() for g in roots]

    def segment_generators(self) -> list[SurdVector]:
        """ Endpoints of the degenerate (rank one) ellipse c + s m, |s| <= |rho|
        """
        (m11, m12), (m21, m22) = self.M
        if (m11, m21) != (0, 0):
            m = (m11, m21)
            rho = (Fraction(1), m12 / m11 if m11 != 0 else m22 / m21)
        else:
            m = (m12, m22)
            rho = (Fraction(0), Fraction(1))
        r = rho[0] * rho[0] + rho[1] * rho[1]
        return [SurdVector(self.c, m, r), SurdVector(self.c, (-m[0], -m[1]), r)]
