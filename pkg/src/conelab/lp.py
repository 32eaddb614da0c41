"""A small exact two-phase simplex method (Bland's rule, Fractions)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import ZERO, Q


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(T, r, c):
    pv = T[r][c]
    if pv != 1:
        T[r] = [a / pv for a in T[r]]
    row = T[r]
    for i in range(len(T)):
        if i != r:
            f = T[i][c]
            if f:
                T[i] = [a - f * b if b else a for a, b in zip(T[i], row)]


def _run(T, basis, allowed):
    """Minimise the objective stored in the last row of T."""
    m = len(T) - 1
    z = T[m]
    while True:
        z = T[m]
        enter = next((j for j in allowed if z[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded"
        _pivot(T, leave, enter)
        basis[leave] = enter


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nonneg: Sequence[bool] | None = None,
) -> LPResult:
    """Minimise ``c.x`` subject to ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    ``nonneg[j]`` says whether x_j >= 0 (default: every variable); other
    variables are free.
    """
    n = len(c)
    if nonneg is None:
        nonneg = [True] * n
    # column layout: for each variable a "+" column, and a "-" column if free
    cols: list[tuple[int, int]] = []
    for j in range(n):
        cols.append((j, 1))
        if not nonneg[j]:
            cols.append((j, -1))
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    kinds: list[str] = []
    for a, b in zip(A_ub, b_ub):
        rows.append([Q(a[j]) * s for j, s in cols])
        rhs.append(Q(b))
        kinds.append("ub")
    for a, b in zip(A_eq, b_eq):
        rows.append([Q(a[j]) * s for j, s in cols])
        rhs.append(Q(b))
        kinds.append("eq")
    m = len(rows)
    nslack = kinds.count("ub")
    nstruct = len(cols)
    ntot = nstruct + nslack + m  # structural, slack, artificial
    T: list[list[Fraction]] = []
    k = 0
    for i in range(m):
        row = rows[i] + [ZERO] * (nslack + m) + [rhs[i]]
        if kinds[i] == "ub":
            row[nstruct + k] = Fraction(1)
            k += 1
        if row[-1] < 0:
            row = [-a for a in row]
        row[nstruct + nslack + i] = Fraction(1)
        T.append(row)
    basis = [nstruct + nslack + i for i in range(m)]
    # phase one objective: sum of artificials, expressed in reduced form
    z = [ZERO] * (ntot + 1)
    for i in range(m):
        z = [a - b for a, b in zip(z, T[i])]
    for i in range(m):
        z[nstruct + nslack + i] = ZERO
    T.append(z)
    real = list(range(nstruct + nslack))
    _run(T, basis, real)
    if T[m][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis
    art0 = nstruct + nslack
    drop = []
    for i in range(m):
        if basis[i] >= art0:
            j = next((j for j in real if T[i][j] != 0), None)
            if j is None:
                drop.append(i)
            else:
                _pivot(T, i, j)
                basis[i] = j
    keep = [i for i in range(m) if i not in drop]
    T = [T[i][:art0] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    cost = [Q(c[j]) * s for j, s in cols] + [ZERO] * nslack + [ZERO]
    z = list(cost)
    for i, bi in enumerate(basis):
        cb = cost[bi]
        if cb:
            z = [a - cb * b for a, b in zip(z, T[i])]
    T.append(z)
    status = _run(T, basis, real)
    if status == "unbounded":
        return LPResult("unbounded")
    vals = [ZERO] * (nstruct + nslack)
    for i, bi in enumerate(basis):
        vals[bi] = T[i][-1]
    x = [ZERO] * n
    for (j, s), v in zip(cols, vals[:nstruct]):
        x[j] += s * v
    value = sum((Q(c[j]) * x[j] for j in range(n)), ZERO)
    return LPResult("optimal", x, value)


def feasible_point(A_ub=(), b_ub=(), A_eq=(), b_eq=(), n=None, nonneg=None) -> list[Fraction] | None:
    """Any point of the polyhedron, or None when it is empty."""
    if n is None:
        n = len((list(A_ub) or list(A_eq))[0])
    res = linprog([0] * n, A_ub, b_ub, A_eq, b_eq, nonneg)
    return res.x if res.status == "optimal" else None
