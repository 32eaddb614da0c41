"""Exact rational linear algebra on plain lists of ``Fraction``.

Matrices are lists of rows.  Vectors are lists (or tuples) of Fractions.
Everything here is small-dimensional; clarity wins over speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = list
Matrix = list

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def vec(values: Iterable) -> list[Fraction]:
    return [Q(v) for v in values]


def mat(rows: Iterable[Iterable]) -> list[list[Fraction]]:
    return [[Q(v) for v in row] for row in rows]


def zeros(m: int, n: int) -> list[list[Fraction]]:
    return [[ZERO] * n for _ in range(m)]


def eye(n: int) -> list[list[Fraction]]:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = ONE
    return out


def unit(n: int, i: int) -> list[Fraction]:
    v = [ZERO] * n
    v[i] = ONE
    return v


def transpose(A: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B) -> list[list[Fraction]]:
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in Bt] for row in A]


def matvec(A, v) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in A]


def dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def madd(A, B) -> list[list[Fraction]]:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def msub(A, B) -> list[list[Fraction]]:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mscale(c, A) -> list[list[Fraction]]:
    c = Q(c)
    return [[c * a for a in row] for row in A]


def vadd(u, v) -> list[Fraction]:
    return [a + b for a, b in zip(u, v)]


def vsub(u, v) -> list[Fraction]:
    return [a - b for a, b in zip(u, v)]


def vscale(c, v) -> list[Fraction]:
    c = Q(c)
    return [c * a for a in v]


def is_zero_vec(v) -> bool:
    return all(a == 0 for a in v)


def is_zero_mat(A) -> bool:
    return all(a == 0 for row in A for a in row)


def bilinear(u, M, v) -> Fraction:
    """u^T M v."""
    return dot(u, matvec(M, v))


def symmetrize(M) -> list[list[Fraction]]:
    n = len(M)
    return [[(M[i][j] + M[j][i]) / 2 for j in range(n)] for i in range(n)]


def rref(A) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = [list(row) for row in A]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        pv = R[r][c]
        if pv != 1:
            R[r] = [a / pv for a in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A) -> int:
    return len(rref(A)[1]) if A and A[0] else 0


def nullspace(A, n: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}; ``n`` is the column count when A has no rows."""
    if not A:
        return [unit(n, i) for i in range(n or 0)]
    ncols = len(A[0])
    R, piv = rref(A)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        x = [ZERO] * ncols
        x[fc] = ONE
        for row, pc in zip(R, piv):
            x[pc] = -row[fc]
        basis.append(x)
    return basis


def row_basis(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """A reduced basis for the span of ``vectors`` (rows of an rref)."""
    vs = [list(v) for v in vectors if not is_zero_vec(v)]
    if not vs:
        return []
    R, piv = rref(vs)
    return [R[i] for i in range(len(piv))]


def span_dim(vectors) -> int:
    return len(row_basis(vectors))


def in_span(v, basis) -> bool:
    if is_zero_vec(v):
        return True
    if not basis:
        return False
    return span_dim(list(basis) + [v]) == span_dim(basis)


def same_span(a, b) -> bool:
    ra, rb = row_basis(a), row_basis(b)
    return ra == rb


def complement_coords(basis, n: int) -> list[list[Fraction]]:
    """Standard unit vectors completing ``basis`` to a basis of Q^n."""
    out = []
    cur = row_basis(basis)
    for i in range(n):
        e = unit(n, i)
        if not in_span(e, cur):
            out.append(e)
            cur = row_basis(cur + [e])
    return out


def intersect(a, b, n: int) -> list[list[Fraction]]:
    """Basis of span(a) ∩ span(b) inside Q^n."""
    if not a or not b:
        return []
    # x = sum s_i a_i = sum t_j b_j
    cols = [list(v) for v in a] + [vscale(-1, v) for v in b]
    M = transpose(cols)
    sols = nullspace(M, len(cols))
    out = []
    for s in sols:
        x = [ZERO] * n
        for coef, v in zip(s[: len(a)], a):
            if coef:
                x = vadd(x, vscale(coef, v))
        out.append(x)
    return row_basis(out)


def solve(A, b) -> list[Fraction] | None:
    """One solution of A x = b (free variables set to zero), or None."""
    m = len(A)
    if m == 0:
        return None if not is_zero_vec(b) else []
    n = len(A[0])
    aug = [list(A[i]) + [Q(b[i])] for i in range(m)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [ZERO] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return x


def solve_min_norm(A, b) -> list[Fraction] | None:
    """The least Euclidean-norm solution of A x = b, exactly."""
    if solve(A, b) is None:
        return None
    if not A:
        return []
    w = solve(matmul(A, transpose(A)), b)
    return matvec(transpose(A), w)


def inverse(A) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(A[i]) + unit(n, i) for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def det(A) -> Fraction:
    M = [list(r) for r in A]
    n = len(M)
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def leading_minors(M) -> list[Fraction]:
    return [det([row[:k] for row in M[:k]]) for k in range(1, len(M) + 1)]


def is_positive_definite(M) -> bool:
    """Sylvester's criterion on the symmetric part of M."""
    S = symmetrize(M)
    return all(d > 0 for d in leading_minors(S))


def psd_check(M) -> tuple[bool, list[Fraction] | None]:
    """Decide whether the symmetric part of M is positive semidefinite.

    Returns ``(True, None)`` or ``(False, y)`` with ``y^T M y < 0``.
    Symmetric Gaussian elimination; the congruence is tracked so the
    witness is expressed in the original coordinates.
    """
    n = len(M)
    S = [list(r) for r in symmetrize(M)]
    T = eye(n)  # current S equals T M T^T
    for k in range(n):
        if S[k][k] < 0:
            return False, list(T[k])
        if S[k][k] == 0:
            j = next((j for j in range(k + 1, n) if S[k][j] != 0), None)
            if j is None:
                continue
            # (t e_k + e_j)^T S (t e_k + e_j) = 2 t S_kj + S_jj
            t = -(S[j][j] + 1) / (2 * S[k][j])
            w = [t * a + b for a, b in zip(T[k], T[j])]
            return False, w
        p = S[k][k]
        for i in range(k + 1, n):
            if S[i][k]:
                f = S[i][k] / p
                S[i] = [a - f * b for a, b in zip(S[i], S[k])]
                T[i] = [a - f * b for a, b in zip(T[i], T[k])]
        # the matching column operations only clear row k
        for i in range(k + 1, n):
            S[k][i] = ZERO
    return True, None


def quad(M, y) -> Fraction:
    return bilinear(y, M, y)


def primitive(v) -> list[Fraction]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    from math import gcd

    if is_zero_vec(v):
        return list(v)
    den = 1
    for a in v:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    return [Fraction(a // g) for a in ints]


def fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_vec(v) -> list[str]:
    return [fmt(Q(a)) for a in v]


def parse_vec(text: str) -> list[Fraction]:
    return [Q(t) for t in text.split(",") if t.strip()]
