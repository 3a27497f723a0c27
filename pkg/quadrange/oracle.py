"""
Floating point cross-checks for the exact decisions.

The probe samples the joint range, picks pairs of sampled values and tries
to reach their midpoint with a multistart Gauss-Newton solve of
F(x) = m. A midpoint it cannot reach is only a candidate: it becomes a
witness once the exact membership test in `convexity` rejects it, so the
probe never reports nonconvexity on its own authority.

Every trial draws from its own generator, default_rng([seed, trial]), so
results don't depend on the order trials run in.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from .config import settings
from .core import QuadraticPair, PlanePoint, Scalar, as_scalar, to_exact
from .convexity import joint_range_contains
from .optimize import as_cone
from .pencil import eig_sym, tolerance


@dataclass(frozen=True)
class RangeCloud:
    """ Sampled preimages (rows of `points`) and their values F(x)
    """
    points: np.ndarray
    values: np.ndarray

    def __len__(self):
        return self.points.shape[0]


def pair_arrays(pair: QuadraticPair) -> tuple:
    return (pair.A.to_numpy(), pair.B.to_numpy(),
            np.array([float(v) for v in pair.a]), np.array([float(v) for v in pair.b]),
            float(pair.k[0]), float(pair.k[1]))


def evaluate(arrays: tuple, X: np.ndarray) -> np.ndarray:
    """ F at every row of X, as an (N, 2) array
    """
    A, B, a, b, k1, k2 = arrays
    f = np.einsum("si,ij,sj->s", X, A, X) + X @ a + k1
    g = np.einsum("si,ij,sj->s", X, B, X) + X @ b + k2
    return np.column_stack([f, g])


def sample_cloud(pair: QuadraticPair, seed: Optional[int] = None) -> RangeCloud:
    """ Radial grid on every coordinate plane (radii 2^lo .. 2^hi, fixed
    number of angles) plus uniform samples from a ball
    """
    cfg = settings["oracle"]
    seed = cfg["seed"] if seed is None else seed
    n = pair.n
    lo, hi = cfg["radii"]
    radii = 2.0 ** np.arange(lo, hi + 1)
    thetas = np.linspace(0.0, 2.0 * np.pi, cfg["angles"], endpoint=False)
    rows = [np.zeros(n)]
    if n == 1:
        rows.extend(np.concatenate([radii, -radii])[:, None])
    for i in range(n):
        for j in range(i + 1, n):
            for r in radii:
                slab = np.zeros((len(thetas), n))
                slab[:, i] = r * np.cos(thetas)
                slab[:, j] = r * np.sin(thetas)
                rows.extend(slab)
    if n:
        rows.extend(ball_points(np.random.default_rng(seed), cfg["ball"], n,
                                settings["plot"]["radius"]))
    X = np.array(rows, dtype=float).reshape(-1, n)
    return RangeCloud(X, evaluate(pair_arrays(pair), X))


def ball_points(rng: np.random.Generator, count: int, n: int, radius: float) -> np.ndarray:
    """ `count` points uniform in the ball of the given radius in R^n
    """
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    lengths = rng.random(count) ** (1.0 / n) * radius
    return directions * lengths[:, None]


def reach(arrays: tuple, target: np.ndarray, starts: np.ndarray,
          iterations: Optional[int] = None) -> tuple[np.ndarray, float]:
    """ Gauss-Newton on F(x) = target from every row of `starts` at once.
    Returns the best point and its residual |F(x) - target|.
    """
    A, B, a, b, _, _ = arrays
    X = starts.copy()
    for _ in range(iterations or settings["oracle"]["iterations"]):
        r = evaluate(arrays, X) - target
        J = np.stack([2.0 * X @ A + a, 2.0 * X @ B + b], axis=1)
        X = X - np.einsum("sij,sj->si", np.linalg.pinv(J), r)
    res = np.linalg.norm(evaluate(arrays, X) - target, axis=1)
    i = int(np.argmin(res))
    return X[i], float(res[i])


class ProbeVerdict(Enum):
    PROBABLY_CONVEX = "probably-convex"
    NONCONVEX = "nonconvex-witness"


@dataclass(frozen=True)
class ProbeResult:
    """ `witness` is (p, q, m) with p, q in F(R^n) and m outside, exact
    """
    verdict: ProbeVerdict
    witness: Optional[tuple[PlanePoint, PlanePoint, PlanePoint]] = None
    stats: dict = field(default_factory=dict)


def _exact_value(pair: QuadraticPair, x: np.ndarray) -> PlanePoint:
    return pair(tuple(Fraction(float(v)) for v in x))


def convexity_probe(pair: QuadraticPair, trials: Optional[int] = None,
                    seed: Optional[int] = None, cloud: Optional[RangeCloud] = None) -> ProbeResult:
    cfg = settings["oracle"]
    trials = cfg["trials"] if trials is None else trials
    seed = cfg["seed"] if seed is None else seed
    exact = pair.exact()
    arrays = pair_arrays(pair)
    cloud = cloud if cloud is not None else sample_cloud(pair, seed)
    threshold = cfg["residual"] * pair.scale()
    n = pair.n
    candidates = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        i, j = rng.integers(0, len(cloud), size=2)
        xi, xj = cloud.points[i], cloud.points[j]
        m = (cloud.values[i] + cloud.values[j]) / 2.0
        spread = 1.0 + max(float(np.max(np.abs(xi), initial=0.0)),
                           float(np.max(np.abs(xj), initial=0.0)))
        starts = np.vstack([xi, xj, (xi + xj) / 2.0,
                            spread * rng.standard_normal((cfg["starts"] - 3, n))])
        _, residual = reach(arrays, m, starts)
        if residual <= threshold * (1.0 + float(np.max(np.abs(m)))):
            continue
        candidates += 1
        p, q = _exact_value(exact, xi), _exact_value(exact, xj)
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        if joint_range_contains(exact, mid) is False:
            logging.debug("probe trial %d: confirmed midpoint %s", trial, mid)
            return ProbeResult(ProbeVerdict.NONCONVEX, (p, q, mid),
                               {"trials": trial + 1, "candidates": candidates,
                                "confirmed": 1, "cloud": len(cloud)})
    return ProbeResult(ProbeVerdict.PROBABLY_CONVEX, None,
                       {"trials": trials, "candidates": candidates, "confirmed": 0,
                        "cloud": len(cloud)})


def dual_value_eig(pair: QuadraticPair, lam: Scalar) -> float:
    """ q(lam) from the Jacobi eigendecomposition of A + lam B, -inf when
    unbounded below
    """
    lam = float(lam)
    A, B, a, b, k1, k2 = pair_arrays(pair)
    decomp = eig_sym(A + lam * B)
    ev, V = decomp.eigenvalues, decomp.eigenvectors
    tol = tolerance(A, B) * (1.0 + abs(lam))
    if ev.size and ev[0] < -tol:
        return float("-inf")
    r = a + lam * b
    w = V.T @ r
    small = np.abs(ev) <= tol
    if np.any(np.abs(w[small]) > tol * (1.0 + float(np.linalg.norm(r)))):
        return float("-inf")
    return float(k1 + lam * k2 - 0.25 * np.sum(w[~small] ** 2 / ev[~small]))


def validate_certificate(pair: QuadraticPair, lam, P, claimed_nu) -> bool:
    """ Recompute q(lam) independently and compare it with the claim
    """
    P = as_cone(P)
    lam = as_scalar(lam)
    if not P.dual_contains(lam):
        return False
    value = dual_value_eig(pair, lam)
    if claimed_nu is None or claimed_nu == float("-inf"):
        return value == float("-inf")
    if value == float("-inf"):
        return False
    claimed = float(to_exact(as_scalar(claimed_nu)))
    return abs(value - claimed) <= settings["tolerance"]["certificate"] * pair.scale()
