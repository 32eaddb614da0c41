"""Finitely generated convex cones and convex sets, decided with exact LPs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact as ex
from .algebra import ConelabError
from .exact import ZERO, Q
from .lp import linprog

DEFAULT_DUAL_BUDGET = 12


class BudgetExceeded(ConelabError):
    pass


class ConeNotPointed(ConelabError):
    pass


@dataclass
class GenCone:
    """cone(generators) inside Q^dim; the zero vector is never stored."""

    dim: int
    generators: list = field(default_factory=list)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            v = ex.vec(g)
            if len(v) != self.dim:
                raise ValueError("generator has the wrong length")
            if not ex.is_zero_vec(v):
                gens.append(v)
        self.generators = gens

    def contains(self, v) -> bool:
        return membership(self, v) is not None

    def reduced(self) -> "GenCone":
        """Same cone with generators lying in the cone of the others removed."""
        seen = []
        for g in self.generators:
            p = ex.primitive(g)
            if p not in seen:
                seen.append(p)
        gens = list(seen)
        i = 0
        while i < len(gens):
            rest = gens[:i] + gens[i + 1 :]
            if rest and membership(GenCone(self.dim, rest), gens[i]) is not None:
                gens = rest
            else:
                i += 1
        return GenCone(self.dim, gens)

    def __neg__(self) -> "GenCone":
        return GenCone(self.dim, [ex.vscale(-1, g) for g in self.generators])

    def __add__(self, other: "GenCone") -> "GenCone":
        return GenCone(self.dim, self.generators + other.generators)


@dataclass
class ConvexBody:
    """conv(points) + cone(rays)."""

    dim: int
    points: list
    rays: list = field(default_factory=list)

    def __post_init__(self):
        self.points = [ex.vec(p) for p in self.points]
        self.rays = [ex.vec(r) for r in self.rays if not ex.is_zero_vec(ex.vec(r))]
        if not self.points:
            raise ValueError("a convex body needs at least one point")


@dataclass
class ConeCertificate:
    """Replayable evidence for a pointedness decision.

    Pointed: ``functional`` f with f(g) > 0 for every generator g.
    Not pointed: nonnegative ``combination`` of the generators summing to
    zero, and ``vector`` v with v and -v both in the cone.
    """

    pointed: bool
    functional: list | None = None
    combination: list | None = None
    vector: list | None = None

    def replay(self, cone: GenCone) -> bool:
        if self.pointed:
            f = self.functional
            return all(ex.dot(f, g) > 0 for g in cone.generators)
        lam = self.combination
        if any(a < 0 for a in lam) or all(a == 0 for a in lam):
            return False
        total = [ZERO] * cone.dim
        for a, g in zip(lam, cone.generators):
            total = ex.vadd(total, ex.vscale(a, g))
        return ex.is_zero_vec(total) and not ex.is_zero_vec(self.vector)


def membership(cone: GenCone, v) -> list | None:
    """Nonnegative coefficients expressing v in the cone, or None."""
    v = ex.vec(v)
    if ex.is_zero_vec(v):
        return [ZERO] * len(cone.generators)
    if not cone.generators:
        return None
    A = ex.transpose(cone.generators)
    res = linprog([0] * len(cone.generators), A_eq=A, b_eq=v)
    return res.x if res.status == "optimal" else None


def is_pointed_cone(cone: GenCone) -> ConeCertificate:
    gens = cone.generators
    if not gens:
        return ConeCertificate(True, functional=[ZERO] * cone.dim)
    d = cone.dim
    res = linprog([0] * d, A_ub=[ex.vscale(-1, g) for g in gens], b_ub=[-1] * len(gens), nonneg=[False] * d)
    if res.status == "optimal":
        return ConeCertificate(True, functional=res.x)
    A = ex.transpose(gens) + [[1] * len(gens)]
    res = linprog([0] * len(gens), A_eq=A, b_eq=[0] * d + [1])
    lam = res.x
    k = next(i for i, a in enumerate(lam) if a > 0)
    return ConeCertificate(False, combination=lam, vector=ex.vscale(lam[k], gens[k]))


def lineality_basis(cone: GenCone) -> list:
    """Basis of the largest linear subspace contained in the cone."""
    inside = [g for g in cone.generators if cone.contains(ex.vscale(-1, g))]
    return ex.row_basis(inside)


def edge(cone: GenCone) -> GenCone:
    basis = lineality_basis(cone)
    return GenCone(cone.dim, basis + [ex.vscale(-1, b) for b in basis])


def recession_cone(body: ConvexBody) -> GenCone:
    return GenCone(body.dim, body.rays)


def cone_of_body(body: ConvexBody) -> GenCone:
    """Closed cone generated by the body."""
    return GenCone(body.dim, body.points + body.rays)


def body_contains_zero(body: ConvexBody) -> bool:
    k, r = len(body.points), len(body.rays)
    A = ex.transpose(body.points + body.rays) + [[1] * k + [0] * r]
    res = linprog([0] * (k + r), A_eq=A, b_eq=[0] * body.dim + [1])
    return res.status == "optimal"


def cone_of_shifted(x, cone: GenCone) -> bool:
    """Pointedness of the closed cone generated by x + C, for pointed C."""
    if not is_pointed_cone(cone).pointed:
        raise ConeNotPointed("the cone C must be pointed")
    x = ex.vec(x)
    if ex.is_zero_vec(x):
        return True
    return not cone.contains(ex.vscale(-1, x))


def pointedness_from_limit(body: ConvexBody) -> bool:
    """Is the cone generated by the body pointed?

    Sufficient test first: a pointed recession cone together with 0 not in
    the body.  Otherwise the generated cone is checked directly.
    """
    if is_pointed_cone(recession_cone(body)).pointed and not body_contains_zero(body):
        return True
    return is_pointed_cone(cone_of_body(body)).pointed


def cones_equal(a: GenCone, b: GenCone) -> bool:
    return all(b.contains(g) for g in a.generators) and all(a.contains(g) for g in b.generators)


# ---------------------------------------------------------------------------
# duals by Fourier-Motzkin elimination


def _implied(target, ineqs, eqs) -> bool:
    """Is ``target >= 0`` implied by the ``ineqs >= 0`` and ``eqs = 0``?"""
    if not ineqs and not eqs:
        return ex.is_zero_vec(target)
    cols = list(ineqs) + list(eqs)
    A = ex.transpose(cols)
    nonneg = [True] * len(ineqs) + [False] * len(eqs)
    res = linprog([0] * len(cols), A_eq=A, b_eq=target, nonneg=nonneg)
    return res.status == "optimal"


def _dedupe(ineqs):
    uniq = []
    for a in ineqs:
        p = ex.primitive(a)
        if not ex.is_zero_vec(p) and p not in uniq:
            uniq.append(p)
    return uniq


def _prune(ineqs, eqs):
    uniq = _dedupe(ineqs)
    i = 0
    while i < len(uniq):
        rest = uniq[:i] + uniq[i + 1 :]
        if _implied(uniq[i], rest, eqs):
            uniq = rest
        else:
            i += 1
    return uniq


def halfspaces(cone: GenCone, budget: int = DEFAULT_DUAL_BUDGET) -> tuple[list, list]:
    """Inequalities a.y >= 0 and equalities e.y = 0 cutting out the cone."""
    d, m = cone.dim, len(cone.generators)
    if d > budget:
        raise BudgetExceeded(f"ambient dimension {d} exceeds the dual budget {budget}")
    n = d + m
    # y - G^T lam = 0 and lam >= 0
    eqs = []
    for j in range(d):
        row = [ZERO] * n
        row[j] = Fraction(1)
        for i, g in enumerate(cone.generators):
            row[d + i] = -g[j]
        eqs.append(row)
    ineqs = [ex.unit(n, d + i) for i in range(m)]
    for var in range(d, n):
        piv = next((e for e in eqs if e[var] != 0), None)
        if piv is not None:
            eqs = [e for e in eqs if e is not piv]
            p = piv[var]
            eqs = [ex.vsub(e, ex.vscale(e[var] / p, piv)) if e[var] else e for e in eqs]
            ineqs = [ex.vsub(a, ex.vscale(a[var] / p, piv)) if a[var] else a for a in ineqs]
            eqs = [e for e in eqs if not ex.is_zero_vec(e)]
            ineqs = _dedupe(ineqs)
            continue
        pos = [a for a in ineqs if a[var] > 0]
        neg = [a for a in ineqs if a[var] < 0]
        new = [a for a in ineqs if a[var] == 0]
        for a in pos:
            for b in neg:
                new.append(ex.vadd(ex.vscale(-b[var], a), ex.vscale(a[var], b)))
        ineqs = _prune(new, eqs) if len(new) > 2 * d else _dedupe(new)
    eqs = ex.row_basis([e[:d] for e in eqs])
    ineqs = _prune([a[:d] for a in ineqs], eqs)
    return ineqs, eqs


def dual_cone(cone: GenCone, budget: int = DEFAULT_DUAL_BUDGET) -> GenCone:
    """{f : f(g) >= 0 for all g in the cone}, as a generated cone."""
    ineqs, eqs = halfspaces(cone, budget)
    return GenCone(cone.dim, ineqs + eqs + [ex.vscale(-1, e) for e in eqs])
