"""
Scalars, vectors, symmetric matrices and the quadratic pair itself.

Everything downstream consumes these objects. A value is either exact
(every entry a `fractions.Fraction`) or float (every entry a binary64
`float`) and the two never meet inside one object: building a matrix or a
function out of mixed entries raises `MixedModeError`. Use `.exact()` or
`.to_float()` to move a whole object across.

The internal convention has no 1/2 factor:

    q(x) = <Ax, x> + <a, x> + k

so the gradient is 2Ax + a. Files written in the "half" convention are
converted by the loader (see `problem.py`) by halving the Hessian.

All objects are frozen dataclasses, safe to share between threads.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from numbers import Integral, Rational, Real
from typing import Iterable, Optional, Sequence, Union

import numpy as np


Scalar = Union[Fraction, float]
Vector = tuple[Scalar, ...]
PlanePoint = tuple[Scalar, Scalar]


class DimensionMismatch(ValueError):
    """ Vectors or matrices of incompatible sizes
    """


class MixedModeError(TypeError):
    """ Exact and float scalars met in one object
    """


class NotSymmetric(ValueError):
    """ A matrix handed over as symmetric isn't
    """


class ZeroDirection(ValueError):
    """ A plane direction needs a nonzero vector
    """


class PreconditionViolated(Exception):
    """ An operation was called outside the situation it is defined for
    """


class Mode(Enum):
    EXACT = "exact"
    FLOAT = "float"


def as_scalar(value) -> Scalar:
    """ Coerce user input to a Scalar. Integers, Fractions and "p/q" or
    decimal strings become exact, floats stay floats.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (Integral, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, Real):
        return float(value)
    raise TypeError("cannot use {!r} as a scalar".format(value))


def scalar_mode(value: Scalar) -> Mode:
    if isinstance(value, (Fraction, Integral)) and not isinstance(value, bool):
        return Mode.EXACT
    return Mode.FLOAT


def common_mode(values: Iterable[Scalar], default: Mode = Mode.EXACT) -> Mode:
    """ The mode shared by all values; raises MixedModeError otherwise
    """
    modes = {scalar_mode(v) for v in values}
    if len(modes) > 1:
        raise MixedModeError("exact and float entries mixed")
    return modes.pop() if modes else default


def zero(mode: Mode) -> Scalar:
    return Fraction(0) if mode is Mode.EXACT else 0.0


def to_exact(value: Scalar) -> Fraction:
    """ Exact value of a scalar (floats convert without rounding)
    """
    return value if isinstance(value, Fraction) else Fraction(value)


def vector(values: Iterable) -> Vector:
    return tuple(as_scalar(v) for v in values)


def exact_vector(values: Iterable) -> Vector:
    return tuple(to_exact(as_scalar(v)) for v in values)


def float_vector(values: Iterable) -> Vector:
    return tuple(float(v) for v in values)


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    if len(u) != len(v):
        raise DimensionMismatch("dot of sizes {} and {}".format(len(u), len(v)))
    return sum(x * y for x, y in zip(u, v))


def add(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch("add of sizes {} and {}".format(len(u), len(v)))
    return tuple(x + y for x, y in zip(u, v))


def scale(c: Scalar, u: Sequence[Scalar]) -> Vector:
    return tuple(c * x for x in u)


def is_zero_vector(u: Sequence[Scalar]) -> bool:
    return all(x == 0 for x in u)


def primitive_vector(u: Sequence[Scalar]) -> Vector:
    """ Integer representative of the exact ray R+u: clear denominators,
    divide by the gcd. The sign is kept. Zero vectors are returned as is.
    """
    u = [to_exact(x) for x in u]
    if all(x == 0 for x in u):
        return tuple(u)
    denominators = 1
    for x in u:
        denominators = denominators * x.denominator // gcd(denominators, x.denominator)
    ints = [int(x * denominators) for x in u]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    return tuple(Fraction(i // g) for i in ints)


def sign_normalized(u: Sequence[Scalar]) -> Vector:
    """ Flip u so that its first nonzero entry is positive
    """
    for x in u:
        if x != 0:
            return tuple(u) if x > 0 else tuple(-y for y in u)
    return tuple(u)


@dataclass(frozen=True)
class SymMatrix:
    """ Symmetric n x n matrix, rows stored as tuples
    """
    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        for r in self.rows:
            if len(r) != n:
                raise DimensionMismatch("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if self.rows[i][j] != self.rows[j][i]:
                    raise NotSymmetric(
                        "entry ({0},{1}) != entry ({1},{0})".format(i, j))
        common_mode(self.entries())

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "SymMatrix":
        return cls(tuple(tuple(as_scalar(x) for x in r) for r in rows))

    @classmethod
    def zeros(cls, n: int, mode: Mode = Mode.EXACT) -> "SymMatrix":
        z = zero(mode)
        return cls(tuple(tuple(z for _ in range(n)) for _ in range(n)))

    @classmethod
    def identity(cls, n: int, mode: Mode = Mode.EXACT) -> "SymMatrix":
        return cls.diagonal([1] * n, mode)

    @classmethod
    def diagonal(cls, values: Sequence, mode: Optional[Mode] = None) -> "SymMatrix":
        values = [as_scalar(v) for v in values]
        if mode is Mode.FLOAT:
            values = [float(v) for v in values]
        z = zero(common_mode(values, mode or Mode.EXACT))
        n = len(values)
        return cls(tuple(tuple(values[i] if i == j else z for j in range(n))
                         for i in range(n)))

    @classmethod
    def from_array(cls, array) -> "SymMatrix":
        """ Float matrix from a numpy array, symmetrized
        """
        array = np.asarray(array, dtype=float)
        array = (array + array.T) / 2.0
        return cls(tuple(tuple(float(x) for x in r) for r in array))

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def mode(self) -> Mode:
        return common_mode(self.entries())

    def entries(self) -> list[Scalar]:
        return [x for r in self.rows for x in r]

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    def apply(self, u: Sequence[Scalar]) -> Vector:
        if len(u) != self.n:
            raise DimensionMismatch(
                "vector of size {} for a {}x{} matrix".format(len(u), self.n, self.n))
        return tuple(dot(r, u) for r in self.rows)

    def bilinear(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        return dot(self.apply(u), v)

    def quad(self, u: Sequence[Scalar]) -> Scalar:
        return self.bilinear(u, u)

    def combine(self, s: Scalar, other: "SymMatrix", t: Scalar) -> "SymMatrix":
        """ s*self + t*other
        """
        if other.n != self.n:
            raise DimensionMismatch("pencil of matrices of different sizes")
        return SymMatrix(tuple(
            tuple(s * x + t * y for x, y in zip(r1, r2))
            for r1, r2 in zip(self.rows, other.rows)))

    def scaled(self, c: Scalar) -> "SymMatrix":
        return SymMatrix(tuple(tuple(c * x for x in r) for r in self.rows))

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        return self.combine(1, other, 1)

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        return self.combine(1, other, -1)

    def __neg__(self) -> "SymMatrix":
        return self.scaled(-1)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries())

    def max_abs(self) -> float:
        return max((abs(float(x)) for x in self.entries()), default=0.0)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.rows], dtype=float).reshape(
            self.n, self.n)

    def exact(self) -> "SymMatrix":
        return SymMatrix(tuple(tuple(to_exact(x) for x in r) for r in self.rows))

    def to_float(self) -> "SymMatrix":
        return SymMatrix(tuple(tuple(float(x) for x in r) for r in self.rows))


@dataclass(frozen=True)
class QuadraticFunction:
    """ q(x) = <Ax, x> + <a, x> + k
    """
    A: SymMatrix
    a: Vector
    k: Scalar

    def __post_init__(self):
        if len(self.a) != self.A.n:
            raise DimensionMismatch(
                "linear part of size {} for n={}".format(len(self.a), self.A.n))
        common_mode(self.A.entries() + list(self.a) + [self.k])

    @classmethod
    def build(cls, A: Iterable[Iterable], a: Iterable = None, k=0,
              convention: str = "plain") -> "QuadraticFunction":
        """ Build from plain python data. With convention "half" the data
        describes 1/2<Ax,x> + <a,x> + k and the Hessian is halved.
        """
        A = SymMatrix.from_rows(A)
        a = vector(a) if a is not None else tuple(zero(A.mode) for _ in range(A.n))
        k = as_scalar(k)
        if convention == "half":
            A = A.scaled(Fraction(1, 2) if A.mode is Mode.EXACT else 0.5)
        elif convention != "plain":
            raise ValueError("unknown convention {!r}".format(convention))
        return cls(A, a, k)

    @classmethod
    def zero_function(cls, n: int, mode: Mode = Mode.EXACT) -> "QuadraticFunction":
        return cls(SymMatrix.zeros(n, mode), tuple(zero(mode) for _ in range(n)), zero(mode))

    @property
    def n(self) -> int:
        return self.A.n

    @property
    def mode(self) -> Mode:
        return self.A.mode if self.n else scalar_mode(self.k)

    def __call__(self, x: Sequence[Scalar]) -> Scalar:
        return self.hom(x) + self.lin(x) + self.k

    def hom(self, u: Sequence[Scalar]) -> Scalar:
        return self.A.quad(u)

    def lin(self, u: Sequence[Scalar]) -> Scalar:
        return dot(self.a, u)

    def gradient(self, x: Sequence[Scalar]) -> Vector:
        return add(scale(2, self.A.apply(x)), self.a)

    def combine(self, lam: Scalar, other: "QuadraticFunction") -> "QuadraticFunction":
        """ self + lam*other, the Lagrangian of a pair
        """
        return QuadraticFunction(self.A.combine(1, other.A, lam),
                                 add(self.a, scale(lam, other.a)),
                                 self.k + lam * other.k)

    def negated(self) -> "QuadraticFunction":
        return QuadraticFunction(-self.A, scale(-1, self.a), -self.k)

    def is_identically_zero(self) -> bool:
        return self.A.is_zero() and is_zero_vector(self.a) and self.k == 0

    def exact(self) -> "QuadraticFunction":
        return QuadraticFunction(self.A.exact(), tuple(to_exact(x) for x in self.a),
                                 to_exact(self.k))

    def to_float(self) -> "QuadraticFunction":
        return QuadraticFunction(self.A.to_float(), float_vector(self.a), float(self.k))


@dataclass(frozen=True)
class QuadraticPair:
    """ F = (f, g): R^n -> R^2
    """
    f: QuadraticFunction
    g: QuadraticFunction

    def __post_init__(self):
        if self.f.n != self.g.n:
            raise DimensionMismatch("f has n={}, g has n={}".format(self.f.n, self.g.n))
        if self.f.mode is not self.g.mode:
            raise MixedModeError("f and g are in different modes")

    @classmethod
    def build(cls, A, B, a=None, b=None, k1=0, k2=0,
              convention: str = "plain") -> "QuadraticPair":
        return cls(QuadraticFunction.build(A, a, k1, convention),
                   QuadraticFunction.build(B, b, k2, convention))

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def mode(self) -> Mode:
        return self.f.mode

    @property
    def A(self) -> SymMatrix:
        return self.f.A

    @property
    def B(self) -> SymMatrix:
        return self.g.A

    @property
    def a(self) -> Vector:
        return self.f.a

    @property
    def b(self) -> Vector:
        return self.g.a

    @property
    def k(self) -> PlanePoint:
        return (self.f.k, self.g.k)

    def __call__(self, x: Sequence[Scalar]) -> PlanePoint:
        return eval_pair(self, x)

    def homogeneous(self) -> "QuadraticPair":
        z = zero(self.mode)
        lin = tuple(z for _ in range(self.n))
        return QuadraticPair(QuadraticFunction(self.A, lin, z),
                             QuadraticFunction(self.B, lin, z))

    def pencil(self, t1: Scalar, t2: Scalar) -> SymMatrix:
        """ t1*A + t2*B
        """
        return self.A.combine(t1, self.B, t2)

    def scale(self) -> float:
        """ Magnitude used by the relative tolerances
        """
        return 1.0 + max([self.A.max_abs(), self.B.max_abs()]
                         + [abs(float(x)) for x in self.a + self.b + self.k])

    def exact(self) -> "QuadraticPair":
        if self.mode is Mode.EXACT:
            return self
        return QuadraticPair(self.f.exact(), self.g.exact())

    def to_float(self) -> "QuadraticPair":
        if self.mode is Mode.FLOAT:
            return self
        return QuadraticPair(self.f.to_float(), self.g.to_float())


def point(mode: Mode, x: Iterable) -> Vector:
    """ Coerce a point to the given mode. Integers go either way, a float
    handed to an exact object (or a Fraction to a float one) is an error.
    """
    out = []
    for v in x:
        if isinstance(v, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(v, Integral):
            out.append(Fraction(v) if mode is Mode.EXACT else float(v))
        elif scalar_mode(as_scalar(v)) is not mode:
            raise MixedModeError("{} entry {!r} for a {} object".format(
                scalar_mode(as_scalar(v)).value, v, mode.value))
        else:
            out.append(as_scalar(v))
    return tuple(out)


def _check_dim(pair: QuadraticPair, *vectors: Sequence[Scalar]) -> list[Vector]:
    for v in vectors:
        if len(v) != pair.n:
            raise DimensionMismatch(
                "vector of size {} for a pair on R^{}".format(len(v), pair.n))
    return [point(pair.mode, v) for v in vectors]


def eval_pair(pair: QuadraticPair, x: Sequence[Scalar]) -> PlanePoint:
    """ F(x) = (f(x), g(x))
    """
    x, = _check_dim(pair, x)
    return (pair.f(x), pair.g(x))


def hom_part(pair: QuadraticPair, u: Sequence[Scalar]) -> PlanePoint:
    """ F_H(u) = (<Au,u>, <Bu,u>)
    """
    u, = _check_dim(pair, u)
    return (pair.A.quad(u), pair.B.quad(u))


def lin_part(pair: QuadraticPair, u: Sequence[Scalar]) -> PlanePoint:
    """ F_L(u) = (<a,u>, <b,u>)
    """
    u, = _check_dim(pair, u)
    return (dot(pair.a, u), dot(pair.b, u))


def cross_term(pair: QuadraticPair, u: Sequence[Scalar], v: Sequence[Scalar]) -> PlanePoint:
    """ z_{u,v} = (<Au,v>, <Bu,v>), so F_H(u+v) = F_H(u) + F_H(v) + 2 z_{u,v}
    """
    u, v = _check_dim(pair, u, v)
    return (pair.A.bilinear(u, v), pair.B.bilinear(u, v))


def line_linear_part(pair: QuadraticPair, x: Sequence[Scalar],
                     u: Sequence[Scalar]) -> PlanePoint:
    """ Linear coefficient of t -> F(x + tu): (<2Ax+a,u>, <2Bx+b,u>)
    """
    x, u = _check_dim(pair, x, u)
    return (dot(pair.f.gradient(x), u), dot(pair.g.gradient(x), u))


def gradient(q: QuadraticFunction, x: Sequence[Scalar]) -> Vector:
    """ 2Ax + a
    """
    if len(x) != q.n:
        raise DimensionMismatch("point of size {} for n={}".format(len(x), q.n))
    return q.gradient(point(q.mode, x))


def cross(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    """ <u_perp, v> with u_perp = (-u2, u1)
    """
    return u[0] * v[1] - u[1] * v[0]


def li2(u: Sequence[Scalar], v: Sequence[Scalar]) -> bool:
    """ True when the plane vectors u, v are linearly independent
    """
    return cross(u, v) != 0


@dataclass(frozen=True, init=False)
class PlaneDirection:
    """ A ray R+d in the plane. Exact directions are stored as coprime
    integers keeping their sign, so (1,0) and (-1,0) are different rays.
    Float directions are stored with unit length.
    """
    d1: Scalar
    d2: Scalar

    def __init__(self, d1, d2):
        d1, d2 = as_scalar(d1), as_scalar(d2)
        if d1 == 0 and d2 == 0:
            raise ZeroDirection("direction (0, 0)")
        mode = common_mode([d1, d2])
        if mode is Mode.EXACT:
            d1, d2 = primitive_vector((d1, d2))
        else:
            norm = float(np.hypot(d1, d2))
            d1, d2 = d1 / norm, d2 / norm
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)

    @property
    def mode(self) -> Mode:
        return scalar_mode(self.d1)

    def as_point(self) -> PlanePoint:
        return (self.d1, self.d2)

    def __iter__(self):
        return iter((self.d1, self.d2))

    def __neg__(self) -> "PlaneDirection":
        return PlaneDirection(-self.d1, -self.d2)

    def perp(self) -> "PlaneDirection":
        return perp(self)

    def exact(self) -> "PlaneDirection":
        return PlaneDirection(to_exact(self.d1), to_exact(self.d2))

    def __str__(self):
        return "({}, {})".format(self.d1, self.d2)


def perp(d: PlaneDirection) -> PlaneDirection:
    """ d_perp = (-d2, d1)
    """
    if not isinstance(d, PlaneDirection):
        d = PlaneDirection(*d)
    return PlaneDirection(-d.d2, d.d1)


def proportional_direction(A: SymMatrix, B: SymMatrix) -> Optional[tuple[PlaneDirection, SymMatrix]]:
    """ When A and B are linearly dependent and not both zero return (d, S)
    with A = d1*S and B = d2*S, so that F_H(u) = <Su,u> d. Otherwise None.
    Exact comparison, pass exact matrices.
    """
    if A.n != B.n:
        raise DimensionMismatch("pencil of matrices of different sizes")
    base, other, first = (A, B, True) if not A.is_zero() else (B, A, False)
    if base.is_zero():
        return None
    i, j = next((i, j) for i in range(base.n) for j in range(base.n) if base[i, j] != 0)
    ratio = other[i, j] / base[i, j]
    if any(y != ratio * x for x, y in zip(base.entries(), other.entries())):
        return None
    d = PlaneDirection(1, ratio) if first else PlaneDirection(ratio, 1)
    lead = d.d1 if first else d.d2
    return d, base.scaled(1 / lead)
