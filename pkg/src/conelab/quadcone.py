"""Closed convex cones generated by the values of a vector-valued quadratic
form, possibly together with finitely many extra generators.

    C = closure cone{ q(y) : y in R^k } + cone(extra),   q(y)_j = y^T Q_j y.

Such cones are usually not polyhedral, so decisions are made by a
cutting-plane loop: a finite sample cone is refined until either an exact
certificate is found or the budget runs out (UNDECIDED).

Certificates:

* pointed: a functional f with sum_j f_j Q_j positive semidefinite, whose
  null space equals the common null space of the Q_j, and f > 0 on extra
  generators.  Then f is positive on C minus 0.
* not pointed: a nonnegative combination of values summing to zero, or a
  vector k with q(k) = 0 and a w with the polarisation d = B(k, w) nonzero;
  then q(s k + w) = 2 s d + q(w), so both d and -d lie in C.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from . import exact as ex
from .convex import BudgetExceeded, GenCone, dual_cone, is_pointed_cone, membership
from .exact import ZERO
from .lp import linprog

POINTED = "POINTED"
NOT_POINTED = "NOT_POINTED"
UNDECIDED = "UNDECIDED"

DEFAULT_BUDGET = 40
POLYHEDRAL_ROUNDS = 8


def block_sum(*form_lists) -> list:
    """Forms on the direct sum of the variable spaces: the value cone of the
    result is the sum of the value cones of the pieces."""
    pieces = [[ex.mat(Q) for Q in forms] for forms in form_lists if forms]
    if not pieces:
        return []
    d = len(pieces[0])
    if any(len(p) != d for p in pieces):
        raise ValueError("all pieces need the same number of output coordinates")
    sizes = [len(p[0]) for p in pieces]
    n = sum(sizes)
    out = []
    for k in range(d):
        M = ex.zeros(n, n)
        o = 0
        for p, s in zip(pieces, sizes):
            for i in range(s):
                for j in range(s):
                    M[o + i][o + j] = p[k][i][j]
            o += s
        out.append(M)
    return out


@dataclass
class PointednessVerdict:
    status: str
    certificate: dict = field(default_factory=dict)

    @property
    def pointed(self) -> bool | None:
        return {POINTED: True, NOT_POINTED: False}.get(self.status)


class QuadraticCone:
    def __init__(self, forms, extra=(), out_dim: int | None = None):
        self.forms = [ex.mat(Q) for Q in forms]
        self.k = len(self.forms[0]) if self.forms else 0
        self.out_dim = out_dim if out_dim is not None else len(self.forms)
        self.extra = [ex.vec(g) for g in extra if not ex.is_zero_vec(ex.vec(g))]

    def value(self, y) -> list[Fraction]:
        return [ex.quad(Q, y) for Q in self.forms]

    def polar(self, u, w) -> list[Fraction]:
        return [ex.bilinear(u, Q, w) for Q in self.forms]

    def combined(self, f) -> list:
        M = ex.zeros(self.k, self.k)
        for c, Q in zip(f, self.forms):
            if c:
                M = ex.madd(M, ex.mscale(c, Q))
        return M

    def radical(self) -> list:
        rows = [r for Q in self.forms for r in Q]
        return ex.nullspace(rows, self.k) if rows else [ex.unit(self.k, i) for i in range(self.k)]

    # sampling -------------------------------------------------------------
    def sample_points(self, seed: int | None = None, extra_random: int = 0) -> list:
        k = self.k
        pts = [ex.unit(k, i) for i in range(k)]
        for i, j in combinations(range(k), 2):
            pts.append(ex.vadd(ex.unit(k, i), ex.unit(k, j)))
            pts.append(ex.vsub(ex.unit(k, i), ex.unit(k, j)))
        if k <= 3:
            grid = product(range(-2, 3), repeat=k)
        elif k <= 4:
            grid = product(range(-1, 2), repeat=k)
        else:
            grid = ()
        for t in grid:
            if any(t):
                pts.append([Fraction(a) for a in t])
        if extra_random:
            rng = random.Random(seed)
            for _ in range(extra_random):
                pts.append([Fraction(rng.randint(-3, 3)) for _ in range(k)])
        return pts

    def _initial(self, seed=None) -> tuple[list, list]:
        vals, ys = [], []
        seen = set()
        for y in self.sample_points(seed):
            v = self.value(y)
            if ex.is_zero_vec(v):
                continue
            key = tuple(ex.primitive(v))
            if key in seen:
                continue
            seen.add(key)
            vals.append(v)
            ys.append(y)
        return vals, ys

    # helpers --------------------------------------------------------------
    def _margin_functional(self, gens):
        """Maximise t with f.g >= t |g|_1 for all g and |f_j| <= 1."""
        d = self.out_dim
        A_ub, b_ub = [], []
        for g in gens:
            norm = sum(abs(a) for a in g)
            A_ub.append([-a for a in g] + [norm])
            b_ub.append(0)
        for j in range(d):
            row = [ZERO] * (d + 1)
            row[j] = Fraction(1)
            A_ub.append(row)
            b_ub.append(1)
            row = [ZERO] * (d + 1)
            row[j] = Fraction(-1)
            A_ub.append(row)
            b_ub.append(1)
        c = [0] * d + [-1]
        res = linprog(c, A_ub, b_ub, nonneg=[False] * d + [True])
        return res.x[:d], res.x[d]

    def _combination_witness(self, vals, ys):
        gens = vals + self.extra
        cert = is_pointed_cone(GenCone(self.out_dim, gens))
        terms = []
        for lam, idx in zip(cert.combination, range(len(gens))):
            if lam:
                if idx < len(vals):
                    terms.append({"coef": lam, "y": ys[idx]})
                else:
                    terms.append({"coef": lam, "extra": idx - len(vals)})
        return {"kind": "combination", "terms": terms}

    @staticmethod
    def _roundings(f) -> list:
        """f followed by nearby functionals with small denominators.  The
        margin optimum can converge to a boundary functional without ever
        reaching it; rounding lands on it exactly."""
        out = [ex.primitive(f)]
        for den in (1, 2, 3, 4, 6, 8, 12, 16, 32, 64):
            g = [Fraction(a).limit_denominator(den) for a in f]
            if ex.is_zero_vec(g):
                continue
            g = ex.primitive(g)
            if g not in out:
                out.append(g)
        return out

    def _from_psd(self, f, M, rad, vals, ys):
        """f o q >= 0.  Returns a verdict, True after adding new samples, or
        False when f teaches nothing new."""
        null = ex.nullspace(M, self.k) if self.k else []
        if ex.same_span(null, rad) and all(ex.dot(f, g) > 0 for g in self.extra):
            return PointednessVerdict(POINTED, {"kind": "functional", "f": f})
        for kv in null:
            if not ex.is_zero_vec(self.value(kv)):
                continue
            for Q in self.forms:
                w = ex.matvec(Q, kv)
                d = self.polar(kv, w)
                if not ex.is_zero_vec(d):
                    return PointednessVerdict(NOT_POINTED, {"kind": "line", "k": kv, "w": w, "direction": d})
        added = False
        for kv in null:
            qk = self.value(kv)
            if not ex.is_zero_vec(qk) and tuple(ex.primitive(qk)) not in {tuple(ex.primitive(v)) for v in vals}:
                vals.append(qk)
                ys.append(kv)
                added = True
        return added

    # decisions ------------------------------------------------------------
    def decide_pointed(self, budget: int = DEFAULT_BUDGET, seed: int | None = None) -> PointednessVerdict:
        vals, ys = self._initial(seed)
        rad = self.radical()
        for _ in range(budget):
            gens = vals + self.extra
            if not gens:
                return PointednessVerdict(POINTED, {"kind": "functional", "f": [ZERO] * self.out_dim})
            f, t = self._margin_functional(gens)
            if t <= 0:
                return PointednessVerdict(NOT_POINTED, self._combination_witness(vals, ys))
            witness, progressed = None, False
            for cand in self._roundings(f):
                M = self.combined(cand)
                ok, y = ex.psd_check(M)
                if not ok:
                    if witness is None:
                        witness = y
                    continue
                outcome = self._from_psd(cand, M, rad, vals, ys)
                if isinstance(outcome, PointednessVerdict):
                    return outcome
                if outcome:
                    progressed = True
                    break
            if progressed:
                continue
            if witness is None:
                break
            vals.append(self.value(witness))
            ys.append(witness)
        return PointednessVerdict(UNDECIDED, {"kind": "budget", "rounds": budget})

    def contains(self, target, budget: int = DEFAULT_BUDGET, seed: int | None = None) -> tuple[bool | None, dict]:
        """Is target in C?  Returns (answer, certificate); answer None means undecided."""
        target = ex.vec(target)
        if ex.is_zero_vec(target):
            return True, {"kind": "zero"}
        vals, ys = self._initial(seed)
        d = self.out_dim
        for _ in range(budget):
            gens = vals + self.extra
            lam = membership(GenCone(d, gens), target) if gens else None
            if lam is not None:
                terms = []
                for c, idx in zip(lam, range(len(gens))):
                    if c:
                        terms.append({"coef": c, "y": ys[idx]} if idx < len(vals) else {"coef": c, "extra": idx - len(vals)})
                return True, {"kind": "combination", "terms": terms}
            # separating functional: f.g >= 0 on samples, f.target <= -1
            A_ub = [[-a for a in g] for g in gens] + [target]
            b_ub = [0] * len(gens) + [-1]
            res = linprog([0] * d, A_ub, b_ub, nonneg=[False] * d)
            f = ex.primitive(res.x)
            ok, y = ex.psd_check(self.combined(f))
            if ok:
                return False, {"kind": "separator", "f": f}
            vals.append(self.value(y))
            ys.append(y)
        return None, {"kind": "budget", "rounds": budget}

    def polyhedral(self, budget: int = POLYHEDRAL_ROUNDS, seed: int | None = None) -> tuple[GenCone, bool]:
        """A finitely generated inner approximation and whether it is exact.

        Exactness is certified by checking f o q >= 0 for every generator f
        of the dual of the approximation.  Round cones never certify; the
        approximation is then returned with exact = False.
        """
        vals, _ = self._initial(seed)
        d = self.out_dim
        for _ in range(budget):
            cone = GenCone(d, vals + self.extra).reduced()
            try:
                duals = dual_cone(cone).generators
            except BudgetExceeded:
                return cone, False
            bad = None
            for f in duals:
                ok, y = ex.psd_check(self.combined(f))
                if not ok:
                    bad = y
                    break
            if bad is None:
                return cone, True
            vals.append(self.value(bad))
        return GenCone(d, vals + self.extra).reduced(), False


def replay(cone: QuadraticCone, verdict: PointednessVerdict) -> bool:
    """Re-check a certificate from scratch with exact arithmetic."""
    cert = verdict.certificate
    kind = cert.get("kind")
    if verdict.status == POINTED and kind == "functional":
        f = cert["f"]
        if not cone.forms:
            return all(ex.dot(f, g) > 0 for g in cone.extra)
        M = cone.combined(f)
        ok, _ = ex.psd_check(M)
        return (
            ok
            and ex.same_span(ex.nullspace(M, cone.k), cone.radical())
            and all(ex.dot(f, g) > 0 for g in cone.extra)
        )
    if verdict.status == NOT_POINTED and kind == "combination":
        total = [ZERO] * cone.out_dim
        nonzero = False
        for term in cert["terms"]:
            v = cone.value(term["y"]) if "y" in term else cone.extra[term["extra"]]
            if term["coef"] < 0:
                return False
            if term["coef"] and not ex.is_zero_vec(v):
                nonzero = True
            total = ex.vadd(total, ex.vscale(term["coef"], v))
        return nonzero and ex.is_zero_vec(total)
    if verdict.status == NOT_POINTED and kind == "line":
        return ex.is_zero_vec(cone.value(cert["k"])) and cone.polar(cert["k"], cert["w"]) == cert["direction"] and not ex.is_zero_vec(cert["direction"])
    return False
