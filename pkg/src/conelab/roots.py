"""Roots of a compactly embedded Cartan subalgebra t.

Eigenvalues are located in floating point and snapped to rationals; every
later step (real root spaces, root values, classification, coroots, the
cones C_alpha) is exact.  For a root alpha the stored ``values`` satisfy
alpha(t_j) = i * values[j] on the chosen basis t_j of t, so that for real
x in t we have i alpha(x) = -values . x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from . import exact as ex
from .algebra import ConelabError, LieAlgebra
from .convex import GenCone, dual_cone
from .exact import ZERO
from .lp import linprog
from .quadcone import QuadraticCone

TOL = 1e-9
MAX_DEN = 1000


class NonCompactCartan(ConelabError):
    pass


class TolFailure(ConelabError):
    pass


@dataclass
class Root:
    values: tuple  # alpha(t_j) = i * values[j]
    kind: str  # "compact" | "noncompact" | "solvable"
    multiplicity: int  # complex dimension of the root space
    real_space: list  # rational basis of g ∩ (g^alpha + g^-alpha)
    t0: list  # element of t (g-coordinates) with alpha(t0) = i r, r > 0
    r: Fraction
    coroot: list | None = None  # -i alpha^vee in t-coordinates (semisimple roots)

    def i_alpha(self, x_t) -> Fraction:
        """i alpha(x) for x in t given in t-coordinates."""
        return -ex.dot(self.values, x_t)

    @property
    def semisimple(self) -> bool:
        return self.kind != "solvable"

    @property
    def noncompact(self) -> bool:
        return self.kind != "compact"

    def negative(self) -> "Root":
        return Root(
            tuple(-a for a in self.values),
            self.kind,
            self.multiplicity,
            self.real_space,
            self.t0,
            -self.r,
            None if self.coroot is None else ex.vscale(-1, self.coroot),
        )

    def label(self) -> str:
        return "(" + ",".join(ex.fmt(a) for a in self.values) + ")"


@dataclass
class CartanData:
    algebra: LieAlgebra
    t_basis: list  # coordinate vectors in g
    roots: list = field(default_factory=list)
    dz: int = 0  # leading z-block of g (Spindler algebras), 0 otherwise

    @property
    def rank(self) -> int:
        return len(self.t_basis)

    def to_t(self, x) -> list:
        """t-coordinates of an element of t given in g-coordinates."""
        sol = ex.solve(ex.transpose(self.t_basis), x)
        if sol is None:
            raise ValueError("element does not lie in t")
        return sol

    def from_t(self, c) -> list:
        out = [ZERO] * self.algebra.dim
        for a, v in zip(c, self.t_basis):
            if a:
                out = ex.vadd(out, ex.vscale(a, v))
        return out

    def root(self, values) -> Root:
        values = tuple(ex.vec(values))
        for r in self.roots:
            if r.values == values:
                return r
        raise KeyError(values)


@dataclass
class PositiveSystem:
    roots: list  # the positive roots
    y: list  # t-coordinates of y with i alpha(y) > 0 on positive roots (x0 = i y)
    adapted: bool = False


def _candidates(k: int):
    primes = [1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    yield [Fraction(primes[j % len(primes)]) for j in range(k)]
    yield [Fraction(primes[j % len(primes)] ** 2 + j) for j in range(k)]
    for R in range(2, 9):
        for c in product(range(1, R + 1), repeat=k):
            if max(c) == R:
                yield [Fraction(a) for a in c]


def root_decomposition(algebra: LieAlgebra, t_basis, dz: int = 0) -> CartanData:
    """Root decomposition of g_C with respect to the abelian subalgebra t."""
    g = algebra
    T = [ex.vec(t) for t in t_basis]
    for a, b in combinations(T, 2):
        if not ex.is_zero_vec(g.bracket_coords(a, b)):
            raise ValueError("t is not abelian")
    ads = [g.ad_matrix(t) for t in T]
    rows = [r for A in ads for r in A]
    cent = ex.nullspace(rows, g.dim) if rows else [ex.unit(g.dim, i) for i in range(g.dim)]
    if not ex.same_span(cent, T):
        raise ValueError("t is not maximal abelian: its centraliser is larger than t")
    last_err = None
    for tries, c in enumerate(_candidates(len(T))):
        if tries > 300:
            break
        A = ex.zeros(g.dim, g.dim)
        for cj, Aj in zip(c, ads):
            A = ex.madd(A, ex.mscale(cj, Aj))
        ev = np.linalg.eigvals(np.array([[float(a) for a in row] for row in A]))
        scale = max(1.0, float(np.max(np.abs(ev))) if len(ev) else 1.0)
        if np.any(np.abs(ev.real) > TOL * scale * 1e3):
            raise NonCompactCartan("ad t has eigenvalues off the imaginary axis")
        rs = []
        for val in ev.imag:
            if val > TOL * scale:
                snapped = Fraction(float(val)).limit_denominator(MAX_DEN)
                if abs(float(snapped) - val) > 1e-6 * scale:
                    raise TolFailure(f"eigenvalue {val} does not snap to a rational")
                if snapped not in rs:
                    rs.append(snapped)
        t0 = ex.zeros(1, g.dim)[0]
        for cj, tj in zip(c, T):
            t0 = ex.vadd(t0, ex.vscale(cj, tj))
        A2 = ex.matmul(A, A)
        total = len(T)
        roots: list[Root] = []
        ok = True
        for r in sorted(rs):
            K = ex.nullspace([[A2[i][j] + (r * r if i == j else 0) for j in range(g.dim)] for i in range(g.dim)], g.dim)
            if not K or len(K) % 2:
                ok = False
                break
            u = K[0]
            Au = ex.matvec(A, u)
            kk = next(i for i, a in enumerate(Au) if a)
            w = []
            for Aj in ads:
                wj = r * ex.matvec(Aj, u)[kk] / Au[kk]
                for v in K:
                    if ex.vscale(wj / r, ex.matvec(A, v)) != ex.matvec(Aj, v):
                        ok = False
                w.append(wj)
            if not ok:
                break
            total += len(K)
            roots.append(_make_root(g, T, K, t0, r, tuple(w)))
        if ok and total == g.dim:
            cd = CartanData(g, T, [], dz)
            for rt in roots:
                cd.roots.extend([rt, rt.negative()])
            return cd
        last_err = "root spaces do not exhaust g"
    raise TolFailure(last_err or "could not separate the roots")


def _make_root(g, T, K, t0, r, w) -> Root:
    basis_t = ex.transpose(T)

    def P(u):
        return g.bracket_coords(u, g.bracket_coords(t0, u))

    tests = list(K) + [ex.vadd(a, b) for a, b in combinations(K, 2)]
    kind, coroot = "solvable", None
    for u in tests:
        p = P(u)
        pt = ex.solve(basis_t, p)
        if pt is None:
            raise TolFailure("bracket of root vectors leaves t")
        s = ex.dot(w, pt)
        if s != 0:
            kind = "compact" if s > 0 else "noncompact"
            coroot = ex.vscale(Fraction(-2) / s, pt)
            break
    return Root(w, kind, len(K) // 2, K, t0, r, coroot)


def cartan_of(obj) -> CartanData:
    """Root data for a catalog object (Spindler algebra or simple algebra)."""
    from .spindler import SpindlerAlgebra

    if isinstance(obj, SpindlerAlgebra):
        return root_decomposition(obj.algebra, obj.cartan_elements(), dz=obj.dz)
    return root_decomposition(obj, obj.meta["cartan"])


def classify_root(cd: CartanData, root: Root) -> str:
    return root.kind


def c_alpha_forms(cd: CartanData, root: Root) -> list:
    """Gram matrices (one per z-coordinate) of u -> sign(r) [u, [t0, u]] on the
    real root space; their value cone is C_alpha."""
    if root.kind != "solvable":
        raise ValueError("C_alpha is computed for solvable roots")
    g = cd.algebra
    K = root.real_space
    sign = 1 if root.r > 0 else -1
    forms = []
    for k in range(cd.dz):
        G = ex.zeros(len(K), len(K))
        for a, ua in enumerate(K):
            for b, ub in enumerate(K):
                G[a][b] = g.bracket_coords(ua, g.bracket_coords(root.t0, ub))[k] * sign
        forms.append(ex.symmetrize(G))
    return forms


def c_alpha(cd: CartanData, root: Root, budget: int | None = None) -> tuple[GenCone, bool]:
    """C_alpha = cone{ i[z, z*] : z in g^alpha } for a solvable root, in z-coordinates.

    With u running over the real root space and alpha(t0) = i r,
    i[z, z*] is a positive multiple of [u, [t0, u]] when r > 0.
    Returns a generated cone and whether it is certified equal to C_alpha
    (round cones, e.g. from roots of multiplicity > 1, are approximated
    from inside).
    """
    qc = QuadraticCone(c_alpha_forms(cd, root), out_dim=cd.dz)
    return qc.polyhedral() if budget is None else qc.polyhedral(budget)


def _pairs(cd: CartanData) -> list:
    return [r for r in cd.roots if r.r > 0]


def _chamber_lp(constraints, k):
    """Find y with n.y >= 1 for every n in constraints."""
    if not constraints:
        return [ZERO] * k
    res = linprog([0] * k, A_ub=[ex.vscale(-1, n) for n in constraints], b_ub=[-1] * len(constraints), nonneg=[False] * k)
    return res.x if res.status == "optimal" else None


def positive_systems(cd: CartanData) -> list[PositiveSystem]:
    """All positive systems cut out by some y in t, i.e. the chambers of the
    root hyperplane arrangement; enumerated by extending sign patterns."""
    pairs = _pairs(cd)
    k = cd.rank
    partial = [([], [])]  # (chosen roots, constraint normals)
    for rt in pairs:
        nxt = []
        for chosen, cons in partial:
            for cand in (rt, rt.negative()):
                normal = [-a for a in cand.values]  # i alpha(y) = -values . y
                newcons = cons + [normal]
                if _chamber_lp(newcons, k) is not None:
                    nxt.append((chosen + [cand], newcons))
        partial = nxt
    out = []
    for chosen, cons in partial:
        y = _chamber_lp(cons, k)
        ps = PositiveSystem(chosen, y)
        ps.adapted = is_adapted(cd, ps)
        out.append(ps)
    return out


def is_adapted(cd: CartanData, ps: PositiveSystem) -> bool:
    """Does some y defining the system satisfy i beta(y) > i alpha(y) for all
    positive noncompact beta and compact alpha?"""
    compact = [r for r in cd.roots if r.kind == "compact"]
    cons = [[-a for a in r.values] for r in ps.roots]
    for b in ps.roots:
        if b.kind == "compact":
            continue
        for a in compact:
            cons.append([-(bv - av) for bv, av in zip(b.values, a.values)])
    y = _chamber_lp(cons, cd.rank)
    if y is not None:
        ps.y = y
        return True
    return False


@dataclass
class MinMax:
    c_min: GenCone  # in t-coordinates
    c_max: GenCone  # in t-coordinates
    c_max_normals: list  # i alpha for alpha in the noncompact positive roots
    exact: bool


def c_min_max(cd: CartanData, ps: PositiveSystem) -> MinMax:
    """C_min: cone of C_alpha (solvable) and -i alpha^vee (semisimple noncompact)
    over positive roots.  C_max: {x in t : i alpha(x) >= 0, alpha noncompact positive}."""
    gens, exact = [], True
    for rt in ps.roots:
        if rt.kind == "solvable":
            cone, ok = c_alpha(cd, rt)
            exact = exact and ok
            for gz in cone.generators:
                gens.append(cd.to_t(list(gz) + [ZERO] * (cd.algebra.dim - cd.dz)))
        elif rt.kind == "noncompact":
            gens.append(rt.coroot)
    normals = [[-a for a in rt.values] for rt in ps.roots if rt.kind != "compact"]
    cmax = dual_cone(GenCone(cd.rank, normals))
    return MinMax(GenCone(cd.rank, gens).reduced(), cmax, normals, exact)


def weyl_reflections(cd: CartanData, limit: int = 5000) -> list:
    """The group generated by reflections in compact roots, as t-matrices."""
    gens = []
    n = cd.rank
    for rt in cd.roots:
        if rt.kind == "compact" and rt.r > 0:
            # s(x) = x + (values . x) * coroot, coroot = -i alpha^vee
            M = ex.eye(n)
            for i in range(n):
                for j in range(n):
                    M[i][j] += rt.coroot[i] * rt.values[j]
            gens.append(M)
    group = [ex.eye(n)]
    seen = {_key(group[0])}
    frontier = list(group)
    while frontier:
        nxt = []
        for M in frontier:
            for S in gens:
                P = ex.matmul(S, M)
                k = _key(P)
                if k not in seen:
                    seen.add(k)
                    group.append(P)
                    nxt.append(P)
                    if len(group) > limit:
                        raise ConelabError("Weyl group exceeds the enumeration limit")
        frontier = nxt
    return group


def _key(M):
    return tuple(tuple(r) for r in M)
