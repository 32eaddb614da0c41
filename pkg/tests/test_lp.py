import random
from fractions import Fraction

import pytest
from scipy.optimize import linprog as sp_linprog

from conelab.lp import feasible_point, linprog


def test_simple_optimum():
    # max x + y with x + 2y <= 4, 3x + y <= 6
    res = linprog([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert res.status == "optimal"
    assert res.value == Fraction(-14, 5)
    assert res.x == [Fraction(8, 5), Fraction(6, 5)]


def test_infeasible_and_unbounded():
    assert linprog([0], A_ub=[[1], [-1]], b_ub=[-1, -1]).status == "infeasible"
    assert linprog([-1], A_ub=[[-1]], b_ub=[0]).status == "unbounded"


def test_free_variables():
    res = linprog([1], A_ub=[[-1]], b_ub=[3], nonneg=[False])
    assert res.status == "optimal" and res.x == [-3]


def test_feasible_point():
    x = feasible_point(A_ub=[[1, 1]], b_ub=[1], A_eq=[[1, -1]], b_eq=[0])
    assert x is not None and x[0] == x[1] and x[0] + x[1] <= 1


@pytest.mark.parametrize("seed", range(60))
def test_matches_scipy(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 4), rng.randint(1, 5)
    c = [rng.randint(-3, 3) for _ in range(n)]
    A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(-2, 5) for _ in range(m)]
    ours = linprog(c, A_ub=A, b_ub=b)
    ref = sp_linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert ours.status == status
    if status == "optimal":
        assert float(ours.value) == pytest.approx(ref.fun, abs=1e-7)
        assert all(sum(a * x for a, x in zip(row, ours.x)) <= bi for row, bi in zip(A, b))
