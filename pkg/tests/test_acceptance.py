"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines are printed even without -s) or directly with
``python tests/test_acceptance.py``.
"""

import math
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))

from conelab import catalog
from conelab import exact as ex
from conelab.affine import (
    JM_RANGE,
    SpectrumOutOfRange,
    build_D,
    check_decomposition,
    euler_exists,
    jm_triple,
    zero_part_generated,
)
from conelab.algebra import exp_ad, is_ad_nilpotent
from conelab.convex import (
    ConvexBody,
    GenCone,
    cone_of_shifted,
    cones_equal,
    dual_cone,
    is_pointed_cone,
    pointedness_from_limit,
)
from conelab.pointedness import (
    NOT_POINTED,
    POINTED,
    co_pointed,
    cx_pointed,
    extension_obstruction,
    hamiltonian_of,
    reductive_co,
    scalar_semibounded,
)
from conelab.quadcone import QuadraticCone, replay
from conelab.roots import c_alpha, cartan_of
from conelab.spindler import Reduction, SpindlerAlgebra, check_admissibility, conj_formula, reduce_to_zl

from oracles import grid_range, lp_body_contains_zero, lp_member, lp_pointed, random_vectors

# pinned limits
ROOT_TOL = 1e-9
TIME_COUNTEREXAMPLE = 5.0
TIME_JACOBI = 30.0
TIME_JM = 10.0
TIME_CONVEX = 30.0
JACOBI_SAMPLES = 200
SL2_SAMPLES = 50
CONJUGATES = 20
CONVEX_INSTANCES = 500
DOUBLE_DUALS = 200
REDUCTION_SAMPLES = 200
COVARIANCE_SAMPLES = 1000


class Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failures = []
        self.notes = []
        self.start = time.perf_counter()

    def check(self, ok, message):
        if not ok:
            self.failures.append(message)
        return ok

    def note(self, message):
        self.notes.append(message)

    @property
    def elapsed(self):
        return time.perf_counter() - self.start

    def line(self):
        status = "PASS" if not self.failures else "FAIL"
        text = f"{status} criterion {self.number}: {self.title} ({self.elapsed:.2f}s)"
        for f in self.failures[:5]:
            text += f"\n    failed: {f}"
        for n in self.notes:
            text += f"\n    note: {n}"
        return text


def snapped(values):
    return tuple(round(float(v)) if abs(float(v) - round(float(v))) < ROOT_TOL else float(v) for v in values)


def primitive_set(cone):
    return sorted(tuple(ex.primitive(g)) for g in cone.reduced().generators)


# 1 -------------------------------------------------------------------------


def criterion_1():
    c = Criterion(1, "counterexample end-to-end")
    g = catalog.counterexample()
    cd = cartan_of(g)
    got = sorted(snapped(r.values[g.dz:]) for r in cd.roots)
    want = sorted([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)])
    c.check(got == want, f"roots {got}")
    cone, exact = c_alpha(cd, cd.root((0, 0, 1, 0)))
    c.check(exact and primitive_set(cone) == [(1, 0)], f"C_e1 = {primitive_set(cone)}")
    cone, exact = c_alpha(cd, cd.root((0, 0, 1, 1)))
    c.check(exact and primitive_set(cone) == [(0, 1), (1, 0)], f"C_e1+e2 = {primitive_set(cone)}")
    x = g.element(l=[1, -1])
    v = cx_pointed(g, x)
    c.check(v.status == POINTED, f"cx_pointed {v.status}")
    c.check(v.certificate.get("kind") == "functional", "certificate is not a functional")
    red = g.algebra.element(v.certificate["reduced"])
    qc = QuadraticCone(g.quadratic_forms(g.split(red)[2]), out_dim=g.dz)
    c.check(replay(qc, v), "certificate does not replay")
    rep = extension_obstruction(g, x)
    c.check(rep.status == "OBSTRUCTED", f"obstruction {rep.status}")
    c.check(len(rep.systems) == 6 and all(s.status == NOT_POINTED for _, s in rep.systems), "not all systems obstructed")
    c.check(c.elapsed < TIME_COUNTEREXAMPLE, f"took {c.elapsed:.2f}s")
    return c


# 2 -------------------------------------------------------------------------


def corollary_cx(sb, a, b, c):
    nil = (a, b, c) != (0, 0, 0) and a * a + b * c == 0
    plus = sb.inf is not None and (not nil or sb.inf >= 0)
    minus = sb.sup is not None and (not nil or sb.sup <= 0)
    return plus or minus


def random_jacobi_element(g, rng):
    def r():
        return F(rng.randint(-3, 3), rng.randint(1, 2))

    a, b, cc = r(), r(), r()
    mode = rng.random()
    if mode < 0.25:
        s, t = F(rng.randint(-2, 2)), F(rng.randint(-2, 2))
        a, b, cc = s * t, t * t, -s * s
    elif mode < 0.35:
        a = b = cc = F(0)
    q, p = (r() if rng.random() < 0.5 else F(0) for _ in range(2))
    return g.element(z=[r()], v=[q, p], l=[a, b, cc]), (a, b, cc)


def criterion_2():
    c = Criterion(2, "Jacobi corollary on hsp_2")
    g = catalog.jacobi(1)
    rng = random.Random(2024)
    for i in range(JACOBI_SAMPLES):
        x, (a, b, cc) = random_jacobi_element(g, rng)
        c0, b0, Q0 = hamiltonian_of(g, x).compose([1])
        sb = scalar_semibounded(c0, b0, Q0)
        # the float grid oracle needs integer coefficients; the range type is scale invariant
        den = math.lcm(*(v.denominator for v in [c0] + list(b0) + [e for row in Q0 for e in row]))
        below, above, near = grid_range(c0 * den, [u * den for u in b0], [[e * den for e in row] for row in Q0])
        c.check((sb.bounded_below, sb.bounded_above) == (below, above), f"sample {i}: exact {sb.kind} vs grid {(below, above)}")
        if sb.inf is not None:
            c.check(near >= float(sb.inf * den) - 1e-6, f"sample {i}: grid below exact infimum")
        co = co_pointed(g, x)
        c.check((co.status == POINTED) == sb.semibounded, f"sample {i}: co {co.status} vs {sb.kind}")
        cx = cx_pointed(g, x)
        c.check((cx.status == POINTED) == corollary_cx(sb, a, b, cc), f"sample {i}: cx {cx.status}")
    c.check(c.elapsed < TIME_JACOBI, f"took {c.elapsed:.2f}s")
    return c


# 3 -------------------------------------------------------------------------


def criterion_3():
    c = Criterion(3, "sl2 Hamiltonian identity")
    g = catalog.jacobi(1)
    rng = random.Random(3)
    for i in range(SL2_SAMPLES):
        a, b, cc = (F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3))
        if i % 5 == 0:
            s, t = F(rng.randint(-3, 3)), F(rng.randint(-3, 3))
            a, b, cc = s * t, t * t, -s * s
        H = hamiltonian_of(g, g.element(l=[a, b, cc]))
        want = {k: v for k, v in {(0, 2): b, (2, 0): -cc, (1, 1): 2 * a}.items() if v}
        c.check(H.form_polynomial(0) == want, f"({a},{b},{cc}): {H.form_polynomial(0)}")
        sb = scalar_semibounded(*H.compose([1]))
        nonneg = sb.inf is not None and sb.inf >= 0
        c.check(nonneg == (b >= 0 and -cc >= 0 and a * a <= -b * cc), f"({a},{b},{cc}): nonnegativity")
    return c


# 4 -------------------------------------------------------------------------

SP4_TYPES = {
    "B11": {"B11": 1},
    "-B11": {"B11": -1},
    "B11+B22": {"B11": 1, "B22": 1},
    "B11-B22": {"B11": 1, "B22": -1},
    "A12+B22": {"A12": 1, "B22": 1},
}
SL2_TYPES = {"e": {"e": 1}, "-e": {"e": -1}, "f": {"f": 1}}


def named(g, combo):
    v = [F(0)] * g.dim
    for name, k in combo.items():
        v[g.names.index(name)] = F(k)
    return g.element(v)


def criterion_4():
    c = Criterion(4, "JM triples and derivations")
    cases = [
        ("sl2", SL2_TYPES, ["e", "f"]),
        ("sp4", SP4_TYPES, ["A12", "A21", "B11", "B12", "B22", "C11", "C12", "C22"]),
    ]
    rng = random.Random(4)
    out_of_range = set()
    for name, types, nil_names in cases:
        s = catalog.get(name)
        gs = catalog.as_spindler(s)
        for kind, combo in types.items():
            base = named(s, combo)
            xs = [base]
            for _ in range(CONJUGATES):
                x = base
                for _ in range(2):
                    x = exp_ad(named(s, {rng.choice(nil_names): rng.choice([-1, 1, 2])}), x)
                xs.append(x)
            in_domain = reductive_co(s, base).status == POINTED
            for x in xs:
                c.check(is_ad_nilpotent(x), f"{name} {kind}: conjugate not nilpotent")
                c.check(jm_triple(s, x).check(), f"{name} {kind}: triple relations")
                xg = gs.element(l=list(x.coords))
                try:
                    D = build_D(gs, xg)
                    spec = D.spectrum
                except SpectrumOutOfRange as err:
                    D, spec = err.derivation, err.spectrum
                c.check(D.apply(list(xg.coords)) == list(xg.coords), f"{name} {kind}: Dx != x")
                in_range = spec is not None and set(spec) <= JM_RANGE
                c.check(in_range or not in_domain, f"{name} {kind}: spectrum {spec}")
                if not in_range:
                    out_of_range.add(f"{name} {kind}")
            if not in_domain:
                c.note(f"{name} {kind}: co(x) is not pointed, so the spectrum bound is not required")
    for case in sorted(out_of_range):
        c.note(f"{case}: SpectrumOutOfRange raised")
    g = catalog.jacobi(1)
    D = build_D(g, g.element(z=[1], l=[0, 1, 0]))
    c.check(set(D.spectrum) == {F(-1), F(0), F(1)}, f"hsp_2 z+e spectrum {D.spectrum}")
    c.check(c.elapsed < TIME_JM, f"took {c.elapsed:.2f}s")
    return c


# 5 -------------------------------------------------------------------------


def criterion_5():
    c = Criterion(5, "Euler derivations")
    g = catalog.jacobi(1)
    x = g.element(z=[1], l=[0, 1, 0])
    rep = euler_exists(g, x)
    c.check(rep.status == "YES", f"hsp_2: {rep.status}")
    if rep.derivation is not None:
        c.check(zero_part_generated(rep.derivation), "hsp_2: g_0 != [g_1, g_-1]")

    g = catalog.get("gl2_module")
    x = g.element(z=[1, 0, 0], l=[0, 0, 1, 0])
    h = [0, F(1, 2), 0, 0]
    V1 = [ex.unit(6, 0), ex.unit(6, 1)]
    V2 = [ex.unit(6, 2), ex.unit(6, 3)]
    chk = check_decomposition(g, x, h, V1, V2)
    wit = chk.witness.get("beta_outside_pm")
    c.check(wit is not None, "V1/V2: no beta_0 witness")
    if wit is not None:
        c.check(ex.primitive(wit["vector"]) == [0, 0, 1], f"V1/V2: witness {wit['vector']}")
        c.check(g.beta_of(wit["u"], wit["w"]) == wit["vector"], "V1/V2: witness does not replay")
    c.check(chk.derivation is not None and not zero_part_generated(chk.derivation), "V1/V2: g_0 generated")
    if chk.c:
        c.note("V1/V2: the direct-sum condition holds; the emitted failure is beta(V_h, V_h) not inside z_1 + z_-1")
    chk = check_decomposition(g, x, h, V1 + V2, [])
    ov = chk.witness.get("overlap")
    c.check(not chk.c and ov is not None and ex.primitive(ov["vector"]) in ([0, 0, 1], [0, 0, -1]), "V1+V2/0: no overlap witness")

    for name in ("heisenberg1", "oscillator1"):
        gs = catalog.get(name)
        for xz in (1, -1):
            rep = euler_exists(gs, gs.element(z=[xz]))
            c.check(rep.status == "NO" and rep.complete, f"{name}: {rep.status}")
    return c


# 6 -------------------------------------------------------------------------


def criterion_6():
    c = Criterion(6, "convexity property suite")
    rng = random.Random(6)
    for i in range(CONVEX_INSTANCES):
        d = rng.randint(1, 4)
        gens = random_vectors(rng, rng.randint(1, 5), d)
        C = GenCone(d, gens)
        cert = is_pointed_cone(C)
        c.check(cert.replay(C) and cert.pointed == lp_pointed(gens, d), f"instance {i}: is_pointed_cone")
        x = [rng.randint(-3, 3) for _ in range(d)]
        if cert.pointed:
            want = not any(x) or not lp_member(gens, [-a for a in x])
            c.check(cone_of_shifted(x, C) == want, f"instance {i}: cone_of_shifted")
        pts = random_vectors(rng, rng.randint(1, 3), d)
        rays = random_vectors(rng, rng.randint(0, 2), d)
        body = ConvexBody(d, pts, rays)
        want = lp_pointed(pts + rays, d)
        c.check(pointedness_from_limit(body) == want, f"instance {i}: pointedness_from_limit")
        if lp_body_contains_zero(pts, rays, d):
            c.check(not want, f"instance {i}: oracle inconsistency")
    for i in range(DOUBLE_DUALS):
        d = rng.randint(2, 6)
        C = GenCone(d, random_vectors(rng, rng.randint(1, d + 2), d))
        c.check(cones_equal(dual_cone(dual_cone(C)), C), f"double dual {i}")
    c.check(c.elapsed < TIME_CONVEX, f"took {c.elapsed:.2f}s")
    return c


# 7 -------------------------------------------------------------------------


def criterion_7():
    c = Criterion(7, "reduction and covariance")
    algebras = [catalog.get(n) for n in ("jacobi1", "jacobi2", "counterexample")]
    rng = random.Random(7)

    def rand_vec(n):
        return [F(rng.randint(-2, 2), rng.choice([1, 1, 2])) for _ in range(n)]

    for i in range(REDUCTION_SAMPLES):
        g = algebras[i % len(algebras)]
        x = g.algebra.element(rand_vec(g.dim))
        red = reduce_to_zl(g, x)
        if isinstance(red, Reduction):
            ok = ex.is_zero_vec(g.split(red.reduced)[1]) and conj_formula(g, red.conjugator, x) == red.reduced
            c.check(ok, f"{g.name} sample {i}: reduction")
        else:
            H = hamiltonian_of(g, x)
            h0, h1, h2 = (H.value(ex.vscale(t, red.v0)) for t in (0, 1, 2))
            affine = ex.vsub(ex.vsub(h2, h1), ex.vsub(h1, h0)) == [0] * g.dz
            c.check(affine and not ex.is_zero_vec(ex.vsub(h1, h0)), f"{g.name} sample {i}: affine line")
    for i in range(COVARIANCE_SAMPLES):
        g = algebras[i % len(algebras)]
        x = g.algebra.element(rand_vec(g.dim))
        v, w = rand_vec(g.dV), rand_vec(g.dV)
        lhs = hamiltonian_of(g, conj_formula(g, w, x)).value(v)
        c.check(lhs == hamiltonian_of(g, x).value(ex.vadd(v, w)), f"{g.name} covariance {i}")
    return c


# 8 -------------------------------------------------------------------------


def criterion_8():
    c = Criterion(8, "structural invariants of the catalog")
    for name in catalog.names():
        obj = catalog.get(name)
        alg = obj.algebra if isinstance(obj, SpindlerAlgebra) else obj
        try:
            alg.check_jacobi()
        except Exception as err:  # noqa: BLE001 - any failure is reported
            c.check(False, f"{name}: Jacobi identity: {err}")
        if isinstance(obj, SpindlerAlgebra):
            for B in obj.data.beta:
                c.check(ex.madd(B, ex.transpose(B)) == ex.zeros(obj.dV, obj.dV), f"{name}: beta not skew")
                for R in obj.data.rho:
                    inv = ex.madd(ex.matmul(B, R), ex.matmul(ex.transpose(R), B))
                    c.check(ex.is_zero_mat(inv), f"{name}: beta not invariant")
            if obj.data.meta.get("admissible"):
                rep = check_admissibility(obj)
                c.check(bool(rep), f"{name}: {rep.failures}")
    return c


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("crit", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(crit, capsys):
    result = crit()
    with capsys.disabled():
        print("\n" + result.line())
    assert not result.failures, result.line()


if __name__ == "__main__":
    bad = 0
    for crit in CRITERIA:
        result = crit()
        print(result.line(), flush=True)
        bad += bool(result.failures)
    sys.exit(1 if bad else 0)
