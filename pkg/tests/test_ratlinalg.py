from fractions import Fraction

import numpy as np

from quadrange.core import SymMatrix, QuadraticFunction
from quadrange.ratlinalg import (
    kernel_basis, intersect_kernels, inertia, restrict_form, solve_linear,
    span_contains, rank, ldl_congruence, minimize, maximize, exact_sqrt,
    isotropic_vector, negative_direction, restrict_function, hyperplane_basis,
)


def random_symmetric(rng, n, low=-5, high=5):
    M = rng.integers(low, high + 1, (n, n))
    return SymMatrix.from_rows((M + M.T).tolist())


def test_kernel_basis():
    K = kernel_basis(SymMatrix.diagonal([1, 0]))
    assert K == ((0, 1),)
    assert kernel_basis(SymMatrix.diagonal([1, 0, -1])) == ((0, 1, 0),)
    assert kernel_basis(SymMatrix.diagonal([1, 2, -1])) == ()
    assert len(kernel_basis(SymMatrix.zeros(2))) == 2


def test_intersect_kernels():
    A = SymMatrix.from_rows([[0, 1], [1, 0]])
    assert intersect_kernels(A, SymMatrix.zeros(2)) == ()
    assert len(intersect_kernels(SymMatrix.zeros(2), SymMatrix.zeros(2))) == 2
    K = intersect_kernels(SymMatrix.diagonal([1, 0]), SymMatrix.zeros(2))
    assert K == ((0, 1),)


def test_inertia_examples():
    assert inertia(SymMatrix.diagonal([1, -1])).as_tuple() == (1, 1, 0)
    assert inertia(SymMatrix.from_rows([[0, 2], [2, 0]])).as_tuple() == (1, 1, 0)
    assert inertia(SymMatrix.from_rows([[1, 1], [1, 1]])).as_tuple() == (1, 0, 1)
    assert inertia(SymMatrix.zeros(3)).as_tuple() == (0, 0, 3)
    assert inertia(SymMatrix.identity(2)).pd


def test_congruence_diagonalizes():
    S = SymMatrix.from_rows([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    c = ldl_congruence(S)
    cols = c.columns
    for i in range(3):
        for j in range(3):
            value = S.bilinear(cols[i], cols[j])
            if i != j:
                assert value == 0
            else:
                assert value == c.pivots[i]


def test_sylvester_law():
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        S = random_symmetric(rng, n)
        C = rng.integers(-3, 4, (n, n))
        while round(np.linalg.det(C)) == 0:
            C = rng.integers(-3, 4, (n, n))
        CS = [[sum(Fraction(int(C[k, i])) * S[k, l] * int(C[l, j])
                   for k in range(n) for l in range(n)) for j in range(n)] for i in range(n)]
        assert inertia(SymMatrix.from_rows(CS)) == inertia(S)


def test_kernel_spans_kernel():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        v = rng.integers(-3, 4, (n, 2))
        # rank <= 2, so kernels are common
        S = SymMatrix.from_rows((v @ np.diag([1, -1]) @ v.T).tolist())
        K = kernel_basis(S)
        for k in K:
            assert all(x == 0 for x in S.apply(k))
        assert rank([list(r) for r in S.rows]) + len(K) == n


def test_restrict_form():
    S = SymMatrix.diagonal([1, -1])
    assert restrict_form(S, [(1, 0)]) == SymMatrix.diagonal([1])
    assert restrict_form(S, [(0, 1)]) == SymMatrix.diagonal([-1])


def test_restrict_form_interlacing():
    rng = np.random.default_rng(9)
    for _ in range(50):
        S = random_symmetric(rng, 4)
        W = hyperplane_basis(tuple(Fraction(int(x)) for x in rng.integers(1, 4, 4)))
        full, part = inertia(S), inertia(restrict_form(S, W))
        assert part.n_plus <= full.n_plus
        assert part.n_minus <= full.n_minus


def test_solve_linear():
    S = SymMatrix.diagonal([1, 0])
    assert solve_linear(S, (1, 0)) == (1, 0)
    assert solve_linear(S, (0, 1)) is None


def test_solve_linear_min_norm():
    S = SymMatrix.from_rows([[1, 1], [1, 1]])
    x = solve_linear(S, (2, 2))
    assert x == (1, 1)
    assert solve_linear(S, (1, 2)) is None


def test_solve_linear_random():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        S = random_symmetric(rng, n)
        v = tuple(Fraction(int(x)) for x in rng.integers(-5, 6, n))
        x = solve_linear(S, v)
        if x is None:
            rows = [list(r) for r in S.rows]
            assert rank([r + [b] for r, b in zip(rows, v)]) > rank(rows)
        else:
            assert S.apply(x) == v
            for k in kernel_basis(S):
                assert sum(a * b for a, b in zip(x, k)) == 0


def test_span_contains():
    assert span_contains([(1, 1)], (2, 2))
    assert not span_contains([(1, 1)], (1, 2))
    assert span_contains([], (0, 0))


def test_minimize():
    q = QuadraticFunction.build([[1, 0], [0, 2]], [2, -4], 1)
    low = minimize(q)
    assert low.bounded
    assert low.argmin == (-1, 1)
    assert low.value == 1 - 1 - 2


def test_minimize_unbounded():
    q = QuadraticFunction.build([[1, 0], [0, 0]], [0, 1], 0)
    low = minimize(q)
    assert low.value is None
    x0, v = low.ray
    assert q(tuple(a + 10 * b for a, b in zip(x0, v))) < q(x0)
    assert maximize(QuadraticFunction.build([[-1, 0], [0, -1]], [0, 0], 3)).value == 3


def test_restrict_function():
    q = QuadraticFunction.build([[1, 0], [0, -1]], [1, 1], 2)
    r = restrict_function(q, (1, 1), [(1, 0)])
    for y in (Fraction(-2), Fraction(0), Fraction(3, 2)):
        assert r((y,)) == q((1 + y, 1))


def test_exact_sqrt():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(Fraction(2)) is None
    assert exact_sqrt(Fraction(-1)) is None


def test_isotropic_and_negative_direction():
    S = SymMatrix.diagonal([1, -1])
    v = isotropic_vector(S)
    assert v is not None and any(x != 0 for x in v) and S.quad(v) == 0
    u = negative_direction(S)
    assert S.quad(u) < 0
    assert negative_direction(SymMatrix.identity(2)) is None
    assert isotropic_vector(SymMatrix.identity(2)) is None
