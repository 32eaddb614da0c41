from fractions import Fraction as F
from itertools import product

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from conelab import exact as ex

small = st.integers(-4, 4)


def matrices(n, m=None):
    m = n if m is None else m
    return st.lists(st.lists(small, min_size=m, max_size=m), min_size=n, max_size=n)


def test_rank_and_nullspace():
    A = ex.mat([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert ex.rank(A) == 2
    ns = ex.nullspace(A, 3)
    assert len(ns) == 1
    assert ex.matvec(A, ns[0]) == [0, 0, 0]


@given(matrices(3, 4))
def test_rank_matches_numpy(A):
    assert ex.rank(ex.mat(A)) == np.linalg.matrix_rank(np.array(A, dtype=float))


@given(matrices(3))
def test_solve_and_inverse(A):
    M = ex.mat(A)
    if ex.det(M) == 0:
        return
    inv = ex.inverse(M)
    assert ex.matmul(M, inv) == ex.eye(3)
    b = ex.vec([1, -2, 3])
    assert ex.matvec(M, ex.solve(M, b)) == b


@given(matrices(3))
def test_det_matches_numpy(A):
    assert abs(float(ex.det(ex.mat(A))) - np.linalg.det(np.array(A, dtype=float))) < 1e-6


@given(matrices(3))
def test_psd_check_against_eigenvalues(A):
    M = ex.symmetrize(ex.mat(A))
    ok, y = ex.psd_check(M)
    eig = np.linalg.eigvalsh(np.array(M, dtype=float))
    assert ok == (eig.min() > -1e-9)
    if not ok:
        assert ex.quad(M, y) < 0


def test_positive_definite_minors():
    assert ex.is_positive_definite(ex.mat([[2, 1], [1, 2]]))
    assert not ex.is_positive_definite(ex.mat([[1, 2], [2, 1]]))


def test_same_span_and_intersect():
    a = [ex.vec([1, 0, 0]), ex.vec([0, 1, 0])]
    b = [ex.vec([1, 1, 0]), ex.vec([1, -1, 0])]
    assert ex.same_span(a, b)
    c = [ex.vec([0, 1, 1])]
    meet = ex.intersect(a, [ex.vec([0, 1, 0]), ex.vec([0, 0, 1])], 3)
    assert len(meet) == 1 and ex.in_span(ex.vec([0, 1, 0]), meet)
    assert not ex.in_span(c[0], a)


def test_min_norm_solution():
    A = ex.mat([[1, 1]])
    x = ex.solve_min_norm(A, [2])
    assert x == [1, 1]


def test_parse_and_format():
    v = ex.parse_vec("1, -1/2 ,3")
    assert v == [F(1), F(-1, 2), F(3)]
    assert ex.fmt_vec(v) == ["1", "-1/2", "3"]
    assert ex.primitive([F(2, 3), F(4, 3)]) == [1, 2]


def test_psd_witness_on_grid():
    for a, b, c in product(range(-2, 3), repeat=3):
        M = ex.mat([[a, b], [b, c]])
        ok, y = ex.psd_check(M)
        closed = a >= 0 and c >= 0 and a * c - b * b >= 0
        assert ok == closed
