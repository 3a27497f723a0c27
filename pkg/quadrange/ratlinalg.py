"""
Exact linear algebra over the rationals.

Row reduction, kernels, linear solves, inertia by symmetric congruence and
restriction of forms to subspaces. Inputs are exact `SymMatrix` objects (or
plain lists of Fractions); outputs are reduced Fractions, never floats.
The float helpers at the bottom (`rationalize`) are the only bridge from the
numeric side back into this module.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .core import (
    Scalar, Vector, SymMatrix, QuadraticFunction, DimensionMismatch,
    dot, add, scale, to_exact, primitive_vector, sign_normalized,
)


Rows = list[list[Fraction]]
SubspaceBasis = tuple[Vector, ...]


@dataclass(frozen=True)
class Inertia:
    """ Counts of positive, negative and zero eigenvalues
    """
    n_plus: int
    n_minus: int
    n_zero: int

    def __post_init__(self):
        if min(self.n_plus, self.n_minus, self.n_zero) < 0:
            raise ValueError("negative count in {}".format(self))

    @property
    def n(self) -> int:
        return self.n_plus + self.n_minus + self.n_zero

    @property
    def psd(self) -> bool:
        return self.n_minus == 0

    @property
    def nsd(self) -> bool:
        return self.n_plus == 0

    @property
    def pd(self) -> bool:
        return self.n_minus == 0 and self.n_zero == 0

    @property
    def nd(self) -> bool:
        return self.n_plus == 0 and self.n_zero == 0

    @property
    def semidefinite(self) -> bool:
        return self.psd or self.nsd

    @property
    def definite(self) -> bool:
        return self.pd or self.nd

    @property
    def indefinite(self) -> bool:
        return self.n_plus > 0 and self.n_minus > 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_plus, self.n_minus, self.n_zero)


def _rows(M) -> Rows:
    if isinstance(M, SymMatrix):
        return [[to_exact(x) for x in r] for r in M.rows]
    return [[to_exact(x) for x in r] for r in M]


def rref(rows: Sequence[Sequence[Scalar]], ncols: Optional[int] = None) -> tuple[Rows, list[int]]:
    """ Reduced row echelon form and the pivot columns
    """
    m = _rows(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], n: int) -> SubspaceBasis:
    """ Basis of {x in Q^n: Mx = 0} for a (possibly rectangular) M
    """
    if not rows:
        return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    m, pivots = rref(rows, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * n
        x[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -m[r][fc]
        basis.append(tuple(x))
    return tuple(basis)


def kernel_basis(M: SymMatrix) -> SubspaceBasis:
    return nullspace(_rows(M), M.n)


def intersect_kernels(A: SymMatrix, B: SymMatrix) -> SubspaceBasis:
    """ Basis of ker A and ker B, from the stacked matrix [A; B]
    """
    if A.n != B.n:
        raise DimensionMismatch("kernels of matrices of different sizes")
    return nullspace(_rows(A) + _rows(B), A.n)


def orthogonal_complement(vectors: Sequence[Sequence[Scalar]], n: int) -> SubspaceBasis:
    """ Basis of {x: <v, x> = 0 for every v}
    """
    return nullspace([list(v) for v in vectors], n)


def hyperplane_basis(c: Sequence[Scalar]) -> SubspaceBasis:
    """ Basis of c_perp
    """
    return orthogonal_complement([c], len(c))


def span_contains(basis: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> bool:
    if all(x == 0 for x in v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [list(v)]) == rank(list(basis))


def solve_system(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar],
                 ncols: Optional[int] = None) -> Optional[Vector]:
    """ Some solution of Mx = rhs (free variables set to zero), or None
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [to_exact(v)] for r, v in zip(_rows(rows), rhs)]
    if not aug:
        return tuple(Fraction(0) for _ in range(ncols))
    m, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][ncols]
    return tuple(x)


def project_out(x: Sequence[Scalar], basis: Sequence[Sequence[Scalar]]) -> Vector:
    """ Orthogonal projection of x onto the complement of span(basis)
    """
    x = tuple(to_exact(v) for v in x)
    if not basis:
        return x
    k = len(basis)
    gram = [[dot(basis[i], basis[j]) for j in range(k)] for i in range(k)]
    coeffs = solve_system(gram, [dot(b, x) for b in basis], k)
    for c, b in zip(coeffs, basis):
        x = add(x, scale(-c, b))
    return x


def solve_linear(S: SymMatrix, v: Sequence[Scalar]) -> Optional[Vector]:
    """ Minimum-norm solution of Sx = v, or None when v is not in range(S).

    For symmetric S the minimum-norm solution is the one orthogonal to the
    kernel: take any particular solution and project the kernel out.
    """
    if len(v) != S.n:
        raise DimensionMismatch("right-hand side of size {} for n={}".format(len(v), S.n))
    x = solve_system(_rows(S), v, S.n)
    if x is None:
        return None
    return project_out(x, kernel_basis(S))


@dataclass(frozen=True)
class Congruence:
    """ C^T S C = diag(pivots); columns[i] is the i-th column of C
    """
    pivots: tuple[Fraction, ...]
    columns: tuple[Vector, ...]

    def inertia(self) -> Inertia:
        return Inertia(sum(1 for d in self.pivots if d > 0),
                       sum(1 for d in self.pivots if d < 0),
                       sum(1 for d in self.pivots if d == 0))

    def directions(self, sign: int) -> list[Vector]:
        return [c for d, c in zip(self.pivots, self.columns)
                if (d > 0 if sign > 0 else d < 0 if sign < 0 else d == 0)]


def _add_multiple(work: Rows, T: Rows, src: int, dst: int, factor: Fraction):
    # column dst += factor * column src, then the same on rows, then on T
    n = len(work)
    for k in range(n):
        work[k][dst] += factor * work[k][src]
    for k in range(n):
        work[dst][k] += factor * work[src][k]
    for k in range(n):
        T[k][dst] += factor * T[k][src]


def ldl_congruence(S: SymMatrix) -> Congruence:
    """ Symmetric elimination over Q. Pivot on the largest diagonal entry
    among the rows left; when every remaining diagonal entry is zero but an
    off-diagonal one isn't, fold row and column j into i first, which puts
    2*s_ij on the diagonal.
    """
    n = S.n
    work = _rows(S)
    T = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    active = list(range(n))
    pivots, columns = [], []
    while active:
        p = max(active, key=lambda i: abs(work[i][i]))
        if work[p][p] == 0:
            pair = next(((i, j) for i in active for j in active
                         if i < j and work[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            _add_multiple(work, T, j, i, Fraction(1))
            p = i
        for j in active:
            if j != p and work[p][j] != 0:
                _add_multiple(work, T, p, j, -work[p][j] / work[p][p])
        pivots.append(work[p][p])
        columns.append(tuple(T[k][p] for k in range(n)))
        active.remove(p)
    for p in active:
        pivots.append(Fraction(0))
        columns.append(tuple(T[k][p] for k in range(n)))
    return Congruence(tuple(pivots), tuple(columns))


def inertia(S: SymMatrix) -> Inertia:
    if S.n == 0:
        return Inertia(0, 0, 0)
    return ldl_congruence(S).inertia()


def negative_direction(S: SymMatrix) -> Optional[Vector]:
    """ An integer vector u with <Su, u> < 0, or None when S is PSD. The
    vector is primitive with its first nonzero entry positive.
    """
    found = ldl_congruence(S).directions(-1)
    if not found:
        return None
    return sign_normalized(primitive_vector(found[0]))


def positive_direction(S: SymMatrix) -> Optional[Vector]:
    found = ldl_congruence(S).directions(1)
    if not found:
        return None
    return sign_normalized(primitive_vector(found[0]))


def restrict_form(S: SymMatrix, W: Sequence[Sequence[Scalar]]) -> SymMatrix:
    """ The m x m matrix (<w_i, S w_j>)
    """
    images = [S.apply(w) for w in W]
    return SymMatrix(tuple(tuple(to_exact(dot(W[i], images[j])) for j in range(len(W)))
                           for i in range(len(W))))


def combine_basis(W: Sequence[Sequence[Scalar]], y: Sequence[Scalar]) -> Vector:
    """ sum_i y_i w_i
    """
    if not W:
        return ()
    out = tuple(Fraction(0) for _ in W[0])
    for c, w in zip(y, W):
        out = add(out, scale(c, w))
    return out


def restrict_function(q: QuadraticFunction, base: Sequence[Scalar],
                      W: Sequence[Sequence[Scalar]]) -> QuadraticFunction:
    """ y -> q(base + W y) as a quadratic function of y
    """
    lin = tuple(to_exact(dot(q.gradient(base), w)) for w in W)
    return QuadraticFunction(restrict_form(q.A, W), lin, to_exact(q(base)))


@dataclass(frozen=True)
class Minimum:
    """ inf of a quadratic function: value (None for -inf), and a minimizer
    when attained. `ray` is a direction along which q decreases without
    bound when value is None.
    """
    value: Optional[Fraction]
    argmin: Optional[Vector]
    ray: Optional[tuple[Vector, Vector]] = None

    @property
    def bounded(self) -> bool:
        return self.value is not None


def minimize(q: QuadraticFunction) -> Minimum:
    """ Exact unconstrained infimum of q.

    inf q = -inf when A has a negative direction or a is not in range(A);
    otherwise the minimizers solve 2Ax = -a and the smallest one is returned.
    Unbounded cases come with a base point and a ray (x0, v) such that
    q(x0 + t v) -> -inf as t -> +inf.
    """
    q = q.exact()
    n = q.n
    zero = tuple(Fraction(0) for _ in range(n))
    if n == 0:
        return Minimum(q.k, ())
    neg = negative_direction(q.A)
    if neg is not None:
        return Minimum(None, None, (zero, neg))
    x = solve_linear(q.A, scale(Fraction(-1, 2), q.a))
    if x is None:
        # a has a component in ker A: move against it
        for v in kernel_basis(q.A):
            slope = dot(q.a, v)
            if slope != 0:
                v = v if slope < 0 else scale(-1, v)
                return Minimum(None, None, (zero, v))
        raise AssertionError("linear part outside range(A) but orthogonal to ker A")
    return Minimum(q(x), x)


def maximize(q: QuadraticFunction) -> Minimum:
    """ sup of q, reported with the sign flipped back
    """
    m = minimize(q.negated())
    return Minimum(-m.value if m.value is not None else None, m.argmin, m.ray)


def exact_sqrt(q: Fraction) -> Optional[Fraction]:
    """ sqrt(q) when it is rational
    """
    q = to_exact(q)
    if q < 0:
        return None
    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def rationalize(value: float, max_denominator: int = 10**6) -> Fraction:
    """ Closest fraction with a bounded denominator (continued fractions)
    """
    return Fraction(value).limit_denominator(max_denominator)


def rationalize_vector(values: Sequence[float], max_denominator: int = 10**6) -> Vector:
    """ Scale so that the largest entry is 1, then round each entry to a
    fraction with bounded denominator
    """
    peak = max((abs(float(v)) for v in values), default=0.0)
    if peak == 0.0:
        return tuple(Fraction(0) for _ in values)
    return tuple(rationalize(float(v) / peak, max_denominator) for v in values)


def isotropic_vector(S: SymMatrix) -> Optional[Vector]:
    """ A nonzero u with <Su, u> = 0, exact when one exists over Q among the
    congruence pairs tried; None when S is definite.

    Float vectors are returned when the only isotropic directions found are
    irrational.
    """
    congruence = ldl_congruence(S)
    zeros = congruence.directions(0)
    if zeros:
        return sign_normalized(primitive_vector(zeros[0]))
    pos = [(d, c) for d, c in zip(congruence.pivots, congruence.columns) if d > 0]
    neg = [(d, c) for d, c in zip(congruence.pivots, congruence.columns) if d < 0]
    if not pos or not neg:
        return None
    fallback = None
    for dp, p in pos:
        for dn, m in neg:
            # <S(p + s m), p + s m> = dp + s^2 dn since p, m are S-orthogonal
            s = exact_sqrt(-dp / dn)
            if s is not None:
                return sign_normalized(primitive_vector(add(p, scale(s, m))))
            if fallback is None:
                root = float(-dp / dn) ** 0.5
                fallback = tuple(float(x) + root * float(y) for x, y in zip(p, m))
    return fallback
