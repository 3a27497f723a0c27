"""
Float machinery for the pencil t1*A + t2*B.

Eigenvalues come from a plain cyclic Jacobi solver (`eig_sym`) where a
decomposition is reported, and from batched `numpy.linalg.eigvalsh` where
only the smallest eigenvalue along a grid is needed (angular sweeps,
t-lines). lambda_min of a pencil is concave in the pencil parameter, which
is what makes golden-section and bisection searches valid here.

`simdiag` lives here too: it mixes the exact two-variable route with the
float constructions for larger n.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isinf, pi as PI, sqrt
from typing import Callable, Optional, Sequence

import numpy as np

from .config import settings
from .core import SymMatrix, Vector, Mode, cross, primitive_vector, proportional_direction
from .ratlinalg import (
    intersect_kernels, orthogonal_complement, restrict_form, ldl_congruence,
    inertia, rationalize, combine_basis,
)
from .binary import binary_form_roots, SurdVector


GOLDEN = (sqrt(5.0) - 1.0) / 2.0


class ConvergenceError(ArithmeticError):
    """ Jacobi sweeps didn't converge, which for symmetric input means a bug
    """


def as_array(S) -> np.ndarray:
    if isinstance(S, SymMatrix):
        return S.to_numpy()
    return np.asarray(S, dtype=float)


def tolerance(*mats) -> float:
    """ rel * (1 + max |entry|)
    """
    peak = max((float(np.max(np.abs(as_array(m)))) if as_array(m).size else 0.0
                for m in mats), default=0.0)
    return settings["tolerance"]["relative"] * (1.0 + peak)


@dataclass(frozen=True)
class EigenDecomp:
    """ Ascending eigenvalues, orthonormal eigenvectors as columns
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def inertia_signs(self, tol: float) -> tuple[int, int, int]:
        ev = self.eigenvalues
        return (int(np.sum(ev > tol)), int(np.sum(ev < -tol)),
                int(np.sum(np.abs(ev) <= tol)))


def eig_sym(S, max_sweeps: int = 100) -> EigenDecomp:
    """ Cyclic Jacobi, row by row over the upper triangle
    """
    a = as_array(S).copy()
    n = a.shape[0]
    v = np.identity(n)
    scale = float(np.sqrt(np.sum(a * a)))
    tiny = 1e-15 * scale
    for _ in range(max_sweeps):
        off = float(np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2)))
        if off <= tiny or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = 100.0 * abs(apq)
                # negligible next to both diagonal entries: drop it
                if (abs(apq) <= tiny or (abs(a[p, p]) + g == abs(a[p, p])
                                         and abs(a[q, q]) + g == abs(a[q, q]))):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * ap - s * aq, s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * ap - s * aq, s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
                a[p, q] = a[q, p] = 0.0
    else:
        raise ConvergenceError("Jacobi did not converge in {} sweeps".format(max_sweeps))
    ev = np.diag(a).copy()
    order = np.argsort(ev, kind="stable")
    return EigenDecomp(ev[order], v[:, order])


def lambda_min(M) -> float:
    M = as_array(M)
    if M.size == 0:
        return float("inf")
    return float(np.linalg.eigvalsh(M)[0])


def golden_max(fn: Callable[[float], float], lo: float, hi: float,
               tol: float, iterations: int = 200) -> tuple[float, float]:
    """ Maximize a unimodal function on [lo, hi]
    """
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iterations):
        if hi - lo <= tol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = fn(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = fn(x1)
    best = max([(f1, x1), (f2, x2), (fn(lo), lo), (fn(hi), hi)])
    return best[1], best[0]


def quadratic_polish(fn: Callable[[float], float], t: float, value: float,
                     lo: float, hi: float, step: float) -> tuple[float, float]:
    """ One parabola step through t - step, t, t + step, kept only if it
    improves on `value`
    """
    a, b = max(lo, t - step), min(hi, t + step)
    if not a < t < b:
        return t, value
    fa, fb = fn(a), fn(b)
    if not np.all(np.isfinite([fa, fb, value])):
        return t, value
    num = (t - a) ** 2 * (value - fb) - (t - b) ** 2 * (value - fa)
    den = (t - a) * (value - fb) - (t - b) * (value - fa)
    if den == 0.0:
        return t, value
    s = t - 0.5 * num / den
    if not lo <= s <= hi:
        return t, value
    fs = fn(s)
    return (s, fs) if fs > value else (t, value)


@dataclass(frozen=True)
class DefiniteMember:
    """ t1*A + t2*B positive definite
    """
    t1: float
    t2: float
    margin: float
    exact: Optional[tuple[Fraction, Fraction]] = None


@dataclass(frozen=True)
class AngularSweep:
    """ theta -> lambda_min(cos(theta) A + sin(theta) B) on the circle.

    `arcs` are the maximal arcs where the value is >= -tol, as (start, end)
    with start <= end, end possibly past 2*pi for an arc through 0. Up to
    sign convention they are the polar cone of F_H(R^n).
    """
    theta_star: float
    m_star: float
    tol: float
    arcs: tuple[tuple[float, float], ...]
    definite: Optional[DefiniteMember] = None

    def direction(self, theta: float) -> tuple[float, float]:
        return (float(np.cos(theta)), float(np.sin(theta)))


def _lambda_min_batch(A: np.ndarray, B: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    stack = (np.cos(thetas)[:, None, None] * A[None, :, :]
             + np.sin(thetas)[:, None, None] * B[None, :, :])
    return np.linalg.eigvalsh(stack)[:, 0]


def _bisect(fn: Callable[[float], bool], inside: float, outside: float, tol: float) -> float:
    """ Boundary between a point where fn holds and one where it fails
    """
    while abs(outside - inside) > tol:
        mid = (inside + outside) / 2.0
        if fn(mid):
            inside = mid
        else:
            outside = mid
    return inside


def confirm_definite(A: SymMatrix, B: SymMatrix, t1: float, t2: float) -> Optional[tuple[Fraction, Fraction]]:
    """ Round (t1, t2) to small fractions and check exact definiteness
    """
    if A.mode is not Mode.EXACT or B.mode is not Mode.EXACT:
        return None
    for denominator in (1, 10, 100, 10**4, settings["tolerance"]["witness_denominator"]):
        r1, r2 = rationalize(t1, denominator), rationalize(t2, denominator)
        if (r1, r2) == (0, 0):
            continue
        if inertia(A.combine(r1, B, r2)).pd:
            return (r1, r2)
    return None


def angular_sweep(A: SymMatrix, B: SymMatrix, grid: Optional[int] = None) -> AngularSweep:
    grid = grid or settings["sweep"]["grid"]
    golden_tol = settings["sweep"]["golden"]
    An, Bn = as_array(A), as_array(B)
    tol = tolerance(An, Bn)
    thetas = np.linspace(0.0, 2.0 * PI, grid, endpoint=False)
    values = _lambda_min_batch(An, Bn, thetas)
    step = 2.0 * PI / grid

    def value(theta: float) -> float:
        return lambda_min(np.cos(theta) * An + np.sin(theta) * Bn)

    i = int(np.argmax(values))
    theta_star, m_star = golden_max(value, thetas[i] - step, thetas[i] + step, golden_tol)
    theta_star = theta_star % (2.0 * PI)

    inside = values >= -tol
    arcs = []
    if inside.all():
        arcs.append((0.0, 2.0 * PI))
    elif inside.any():
        start = int(np.argmin(inside))    # an outside index
        run = None
        for k in range(1, grid + 1):
            j = (start + k) % grid
            if inside[j] and run is None:
                run = [start + k, start + k]
            elif inside[j]:
                run[1] = start + k
            elif run is not None:
                arcs.append(tuple(run))
                run = None
        if run is not None:
            arcs.append(tuple(run))
        refined = []
        for first, last in arcs:
            lo = _bisect(lambda t: value(t) >= -tol, first * step, (first - 1) * step, golden_tol)
            hi = _bisect(lambda t: value(t) >= -tol, last * step, (last + 1) * step, golden_tol)
            shift = 2.0 * PI * np.floor(lo / (2.0 * PI))
            refined.append((lo - shift, hi - shift))
        arcs = refined
    elif m_star >= -tol:
        arcs.append((theta_star, theta_star))

    definite = None
    if m_star > tol:
        t1, t2 = float(np.cos(theta_star)), float(np.sin(theta_star))
        exact = None
        if m_star > settings["sweep"]["confirm"] or A.mode is Mode.EXACT:
            exact = confirm_definite(A, B, t1, t2)
        definite = DefiniteMember(t1, t2, m_star, exact)
    logging.debug("angular sweep: theta*=%g m*=%g arcs=%s", theta_star, m_star, arcs)
    return AngularSweep(theta_star, m_star, tol, tuple(arcs), definite)


def definite_member(A: SymMatrix, B: SymMatrix) -> Optional[DefiniteMember]:
    return angular_sweep(A, B).definite


def pencil_maximum(A: SymMatrix, B: SymMatrix) -> tuple[float, float]:
    """ argmax and max over t of lambda_min(A + tB), searched on
    [-bound, bound]; concave, so golden-section applies
    """
    An, Bn = as_array(A), as_array(B)
    bound = settings["psd"]["bound"]

    def value(t: float) -> float:
        return lambda_min(An + t * Bn)

    # coarse bracket first, the function can be very flat on a wide interval
    ts = np.concatenate([-np.logspace(9, -3, 49), [0.0], np.logspace(-3, 9, 49)])
    stack = An[None, :, :] + ts[:, None, None] * Bn[None, :, :]
    values = np.linalg.eigvalsh(stack)[:, 0]
    i = int(np.argmax(values))
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, len(ts) - 1)]
    t_star, best = golden_max(value, float(lo), float(hi),
                              settings["psd"]["bisect"] * (1.0 + abs(ts[i])))
    if abs(t_star) >= bound * (1.0 - 1e-12):
        logging.debug("pencil maximum at the search bound t=%g", t_star)
    return t_star, best


@dataclass(frozen=True)
class PsdInterval:
    """ {lambda: A + lambda B >= 0} up to tolerance
    """
    lo: float
    hi: float
    empty: bool = False

    def contains(self, t: float) -> bool:
        return not self.empty and self.lo <= t <= self.hi

    def intersect(self, lo: float, hi: float) -> "PsdInterval":
        if self.empty:
            return self
        lo, hi = max(self.lo, lo), min(self.hi, hi)
        if lo > hi:
            return PsdInterval(float("nan"), float("nan"), True)
        return PsdInterval(lo, hi)

    @property
    def singleton(self) -> bool:
        return not self.empty and self.hi - self.lo <= settings["psd"]["bisect"] * (1.0 + abs(self.lo))

    @property
    def bounded(self) -> bool:
        return not self.empty and not isinf(self.lo) and not isinf(self.hi)


EMPTY = PsdInterval(float("nan"), float("nan"), True)


def psd_interval(A: SymMatrix, B: SymMatrix) -> PsdInterval:
    An, Bn = as_array(A), as_array(B)
    tol = tolerance(An, Bn)
    bound = settings["psd"]["bound"]
    rel = settings["psd"]["bisect"]
    t0, best = pencil_maximum(A, B)
    if best < -tol:
        return EMPTY

    def ok(t: float) -> bool:
        return lambda_min(An + t * Bn) >= -tol

    ends = []
    for sign in (1.0, -1.0):
        step = 1.0
        while ok(t0 + sign * step) and step < bound:
            step *= 2.0
        if step >= bound and ok(t0 + sign * bound):
            ends.append(sign * float("inf"))
            continue
        inner = t0 + sign * step / 2.0 if step > 1.0 else t0
        outer = t0 + sign * step
        ends.append(_bisect(ok, inner, outer, rel * (1.0 + abs(outer))))
    return PsdInterval(min(ends), max(ends))


class SdVerdict(Enum):
    DIAGONALIZED = "diagonalized"
    NOT_SD = "not-sd"
    UNKNOWN = "no-definite-member-unknown"


@dataclass(frozen=True)
class SimDiag:
    """ C with C^T A C and C^T B C diagonal, as columns
    """
    verdict: SdVerdict
    columns: Optional[tuple[tuple, ...]] = None
    exact: bool = False
    route: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def matrix(self) -> Optional[tuple[tuple, ...]]:
        if self.columns is None:
            return None
        n = len(self.columns)
        return tuple(tuple(self.columns[j][i] for j in range(n)) for i in range(n))


def _identity_columns(n: int) -> tuple[Vector, ...]:
    return tuple(tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n))


def _offdiag_ok(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> bool:
    tol = tolerance(A, B) * (1.0 + float(np.max(np.abs(C))) ** 2)
    for M in (C.T @ A @ C, C.T @ B @ C):
        off = M - np.diag(np.diag(M))
        if np.max(np.abs(off), initial=0.0) > tol:
            return False
    return True


def _simdiag_binary(A: SymMatrix, B: SymMatrix) -> SimDiag:
    # u with Au parallel to Bu are the zeros of u -> cross(Au, Bu)
    e = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    n11 = cross(A.apply(e[0]), B.apply(e[0]))
    n22 = cross(A.apply(e[1]), B.apply(e[1]))
    n12 = (cross(A.apply(e[0]), B.apply(e[1])) + cross(A.apply(e[1]), B.apply(e[0]))) / 2
    roots = binary_form_roots(n11, n12, n22)
    if not roots or len(roots) < 2:
        return SimDiag(SdVerdict.NOT_SD, route="binary")
    u, v = roots
    if u.is_rational:
        u, v = u.exact(), v.exact()
        if cross(u, v) == 0 or A.bilinear(u, v) != 0 or B.bilinear(u, v) != 0:
            return SimDiag(SdVerdict.NOT_SD, route="binary")
        return SimDiag(SdVerdict.DIAGONALIZED, (primitive_vector(u), primitive_vector(v)),
                       True, "binary")
    # conjugate roots p +- sqrt(r) q: <Su, v> = <Sp, p> - r <Sq, q>, rational
    for S in (A, B):
        if S.quad(u.base) - u.r * S.quad(u.coef) != 0:
            return SimDiag(SdVerdict.NOT_SD, route="binary")
    return SimDiag(SdVerdict.DIAGONALIZED, (u.to_float(), v.to_float()), False, "binary")


def _simdiag_float(A: SymMatrix, B: SymMatrix) -> Optional[SimDiag]:
    An, Bn = as_array(A), as_array(B)
    if np.allclose(An @ Bn, Bn @ An, atol=tolerance(An, Bn)):
        if all(A[i, j] == 0 and B[i, j] == 0
               for i in range(A.n) for j in range(A.n) if i != j):
            return SimDiag(SdVerdict.DIAGONALIZED, _identity_columns(A.n), True, "diagonal")
        V = eig_sym(An + (GOLDEN / 3.0) * Bn).eigenvectors
        if _offdiag_ok(An, Bn, V):
            return SimDiag(SdVerdict.DIAGONALIZED, tuple(tuple(V[:, j]) for j in range(A.n)),
                           False, "commuting")
    member = definite_member(A, B)
    if member is None:
        return None
    P = member.t1 * An + member.t2 * Bn
    L = np.linalg.cholesky(P)
    Linv = np.linalg.inv(L)
    V = eig_sym(Linv @ An @ Linv.T).eigenvectors
    C = Linv.T @ V
    if not _offdiag_ok(An, Bn, C):
        return None
    return SimDiag(SdVerdict.DIAGONALIZED, tuple(tuple(C[:, j]) for j in range(A.n)),
                   False, "definite-member")


def simdiag(A: SymMatrix, B: SymMatrix) -> SimDiag:
    """ Simultaneous diagonalization by congruence.

    Common kernel first: SD of (A, B) is SD of the pair restricted to
    (ker A and ker B)-perp. Then proportional pairs diagonalize exactly by
    symmetric elimination, n = 2 is decided exactly from the generalized
    eigen-directions, and larger n uses commuting or definite-member
    constructions. Anything else is UNKNOWN.
    """
    A, B = A.exact(), B.exact()
    n = A.n
    if n <= 1:
        return SimDiag(SdVerdict.DIAGONALIZED, _identity_columns(n), True, "trivial")
    K = intersect_kernels(A, B)
    if K:
        if len(K) == n:
            return SimDiag(SdVerdict.DIAGONALIZED, _identity_columns(n), True, "zero")
        W = orthogonal_complement(K, n)
        sub = simdiag(restrict_form(A, W), restrict_form(B, W))
        if sub.columns is None:
            return SimDiag(sub.verdict, None, False, sub.route, sub.notes + ("reduced",))
        if sub.exact:
            lifted = tuple(combine_basis(W, c) for c in sub.columns)
        else:
            Wn = np.array([[float(x) for x in w] for w in W]).T
            lifted = tuple(tuple(Wn @ np.array(c, dtype=float)) for c in sub.columns)
            K = tuple(tuple(float(x) for x in k) for k in K)
        return SimDiag(SdVerdict.DIAGONALIZED, lifted + tuple(K), sub.exact, sub.route,
                       sub.notes + ("reduced",))
    prop = proportional_direction(A, B)
    if prop is not None:
        _, S = prop
        columns = tuple(primitive_vector(c) for c in ldl_congruence(S).columns)
        return SimDiag(SdVerdict.DIAGONALIZED, columns, True, "proportional")
    if n == 2:
        return _simdiag_binary(A, B)
    found = _simdiag_float(A, B)
    if found is not None:
        return found
    return SimDiag(SdVerdict.UNKNOWN, route="sweep")
