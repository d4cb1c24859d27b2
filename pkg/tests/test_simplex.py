import random
from fractions import Fraction as F

import pytest

from refclass.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, linprog_exact

scipy_optimize = pytest.importorskip("scipy.optimize")


def test_small_known():
    # max x + y  s.t. x + 2y <= 4, 3x + y <= 6
    res = linprog_exact([1, 1], [[1, 2], [3, 1]], [4, 6], maximize=True)
    assert res.status == OPTIMAL
    assert res.value == F(14, 5)
    assert res.x == (F(8, 5), F(6, 5))


def test_infeasible():
    assert linprog_exact([1], [[1]], [-1]).status == INFEASIBLE


def test_unbounded():
    assert linprog_exact([1], [[-1]], [0], maximize=True).status == UNBOUNDED


def test_redundant_equalities():
    res = linprog_exact([1, 2], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    assert res.status == OPTIMAL and res.value == 1


@pytest.mark.parametrize("seed", range(150))
def test_against_highs(seed):
    rng = random.Random(seed)
    n, m = rng.randint(2, 6), rng.randint(1, 5)
    A = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(0, 10) for _ in range(m)]
    A.append([1] * n)
    b.append(rng.randint(1, 9))  # keeps the problem bounded
    c = [rng.randint(-5, 5) for _ in range(n)]
    ours = linprog_exact(c, A, b)
    ref = scipy_optimize.linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
    assert ours.status == OPTIMAL and ref.status == 0
    assert abs(float(ours.value) - ref.fun) < 1e-7
    for row, rhs in zip(A, b):
        assert sum(a * x for a, x in zip(row, ours.x)) <= rhs
