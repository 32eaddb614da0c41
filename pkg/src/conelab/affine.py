"""Affine pairs (x, D): derivations D with D x = x built from sl2-triples,
invariance of cones under the canonical grading, module splittings and the
construction of Euler derivations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import exact as ex
from .algebra import ConelabError, Element, LieAlgebra, NotNilpotent, is_ad_nilpotent, jordan_decomposition
from .convex import GenCone, membership
from .exact import ZERO
from .spindler import Derivation, SpindlerAlgebra, canonical_derivation, levi_split, rational_spectrum

HALF = Fraction(1, 2)
JM_RANGE = {Fraction(0), HALF, -HALF, Fraction(1), Fraction(-1)}
EULER_RANGE = {Fraction(0), Fraction(1), Fraction(-1)}


class NoTriple(ConelabError):
    pass


class NotReduced(ConelabError):
    pass


class NotEuler(ConelabError):
    pass


class NoCandidates(ConelabError):
    pass


class SpectrumOutOfRange(ConelabError):
    def __init__(self, message, derivation=None, spectrum=None):
        super().__init__(message)
        self.derivation = derivation
        self.spectrum = spectrum


# ---------------------------------------------------------------------------
# sl2-triples


@dataclass
class Sl2Triple:
    """(h, e, f) with [h, e] = 2e, [h, f] = -2f, [e, f] = h."""

    h: Element
    e: Element
    f: Element

    @property
    def half_h(self) -> Element:
        return self.h * HALF

    def check(self) -> bool:
        g = self.h.algebra
        br = g.bracket_coords
        return (
            br(self.h.coords, self.e.coords) == ex.vscale(2, self.e.coords)
            and br(self.h.coords, self.f.coords) == ex.vscale(-2, self.f.coords)
            and br(self.e.coords, self.f.coords) == list(self.h.coords)
        )


def _levi_basis(g: LieAlgebra, within) -> list:
    if within is not None:
        return [ex.vec(b) for b in within]
    levi = g.meta.get("levi")
    if levi is None:
        return [ex.unit(g.dim, i) for i in range(g.dim)]
    return [ex.vec(b) for b in levi]


def jm_triple(g: LieAlgebra, x: Element, within=None) -> Sl2Triple:
    """Complete a nilpotent x to an sl2-triple inside the subalgebra spanned
    by ``within`` (default: the declared Levi part, else all of g).

    h is sought in [x, s] with [h, x] = 2x; then f solves the two linear
    equations [x, f] = h and [h, f] = -2f."""
    if x.is_zero():
        raise NoTriple("x = 0 has no sl2-triple")
    if not is_ad_nilpotent(x):
        raise NoTriple("x is not ad-nilpotent")
    S = _levi_basis(g, within)
    if not S:
        raise NoTriple("empty Levi part")
    xc = list(x.coords)
    adx = g.ad_matrix(xc)
    # h = ad x (S c), need [h, x] = -ad x (h) = 2x
    cols = [ex.matvec(adx, s) for s in S]  # [x, s_i]
    A = ex.transpose([ex.vscale(-1, ex.matvec(adx, c)) for c in cols])
    c = ex.solve(A, ex.vscale(2, xc))
    if c is None:
        raise NoTriple("no h with [h, x] = 2x in the Levi part")
    h = [ZERO] * g.dim
    for a, col in zip(c, cols):
        h = ex.vadd(h, ex.vscale(a, col))
    adh = g.ad_matrix(h)
    # f = S d: [x, f] = h, [h, f] + 2f = 0
    rows_a = ex.transpose([ex.matvec(adx, s) for s in S])
    rows_b = ex.transpose([ex.vadd(ex.matvec(adh, s), ex.vscale(2, s)) for s in S])
    d = ex.solve(rows_a + rows_b, h + [ZERO] * g.dim)
    if d is None:
        raise NoTriple("no f completing the triple")
    f = [ZERO] * g.dim
    for a, s in zip(d, S):
        f = ex.vadd(f, ex.vscale(a, s))
    t = Sl2Triple(g.element(h), x, g.element(f))
    if not t.check():
        raise NoTriple("triple relations failed")
    return t


@dataclass
class LimitCheck:
    holds: bool
    h: Element | None
    semisimple: Element
    nilpotent: Element


def jordan_limit_check(g: LieAlgebra, x: Element, within=None) -> LimitCheck:
    """Find h commuting with x_s and with [h, x_n] = 2 x_n, so that
    e^{t ad h} x = x_s + e^{2t} x_n; the orbit closure then contains x_s."""
    js = jordan_decomposition(x)
    xs, xn = js.semisimple, js.nilpotent
    if xn.is_zero():
        return LimitCheck(True, g.zero(), xs, xn)
    # JM inside the centralizer of x_s
    S = _levi_basis(g, within)
    ads = g.ad_matrix(list(xs.coords))
    cent = ex.nullspace(ex.transpose([ex.matvec(ads, s) for s in S]), len(S))
    basis = ex.row_basis([_comb(cv, S, g.dim) for cv in cent])
    t = jm_triple(g, xn, within=basis)
    h = t.h
    ok = g.bracket_coords(h.coords, xs.coords) == [ZERO] * g.dim and g.bracket_coords(
        h.coords, xn.coords
    ) == ex.vscale(2, xn.coords)
    return LimitCheck(ok, h, xs, xn)


def _comb(coefs, basis, n):
    out = [ZERO] * n
    for a, b in zip(coefs, basis):
        if a:
            out = ex.vadd(out, ex.vscale(a, b))
    return out


# ---------------------------------------------------------------------------
# derivations


def spectrum_info(M) -> tuple[dict | None, bool]:
    """(rational spectrum or None, diagonalizable over Q)."""
    spec = rational_spectrum(M)
    return spec, spec is not None


def is_euler_matrix(M) -> bool:
    """Diagonalizable with spectrum in {-1, 0, 1}: M (M - I)(M + I) = 0."""
    n = len(M)
    if n == 0:
        return True
    I = ex.eye(n)
    P = ex.matmul(ex.matmul(M, ex.msub(M, I)), ex.madd(M, I))
    return ex.is_zero_mat(P)


def _ad_l_in_g(g: SpindlerAlgebra, hl) -> list:
    return g.algebra.ad_matrix([ZERO] * (g.dz + g.dV) + list(hl))


def build_D(g: SpindlerAlgebra, x: Element, within=None) -> Derivation:
    """D = D_can + ad h_s with h_s half the neutral element of a JM triple of
    x_l, so that D x = x.  Raises SpectrumOutOfRange if Spec(D) leaves
    {0, +-1/2, +-1}, which can only happen when co(x) is not pointed."""
    xz, xV, xl = g.split(x)
    if not ex.is_zero_vec(xV):
        raise NotReduced("x has a V-component; reduce it to z + l first")
    xl_el = g.l.element(xl)
    if not is_ad_nilpotent(xl_el):
        raise NotNilpotent("x_l is not ad-nilpotent")
    M = [row[:] for row in canonical_derivation(g).matrix]
    hs = [ZERO] * g.dl
    if not ex.is_zero_vec(xl):
        try:
            triple = jm_triple(g.l, xl_el, within=within if within is not None else levi_split(g)[0])
        except NoTriple as e:
            raise NotNilpotent(f"x_l has no sl2-triple in the Levi part: {e}") from e
        hs = list(triple.half_h.coords)
        M = ex.madd(M, _ad_l_in_g(g, hs))
    D = Derivation(g.algebra, M)
    if ex.matvec(M, x.coords) != list(x.coords):
        raise ConelabError("D x != x")  # cannot happen for a valid triple
    spec = rational_spectrum(M)
    D.is_euler = is_euler_matrix(M)
    D.h_s = hs
    D.spectrum = spec
    if spec is None or not set(spec) <= JM_RANGE:
        raise SpectrumOutOfRange("Spec(D) is not contained in {0, +-1/2, +-1}", D, spec)
    return D


# ---------------------------------------------------------------------------
# invariance under the canonical grading


@dataclass
class InvarianceReport:
    status: bool | None
    exact: bool
    failures: list = field(default_factory=list)


def dcan_invariance(g: SpindlerAlgebra, generators, samples: int = 1) -> InvarianceReport:
    """Is the cone W generated by ``generators`` (vectors in z + l, read as
    the trace of W on z + l) invariant under e^{R D_can}?

    Equivalent check: p_z(w) and p_l(w) lie in W for each generator.  When all
    generators lie in z + t_l the cone is polyhedral and the answer is exact;
    otherwise generators are closed under a few e^{ad v} samples and a
    non-membership is only reported as undecided."""
    gens = [ex.vec(w) for w in generators]
    if not gens:
        return InvarianceReport(True, True)
    for w in gens:
        _, wV, _ = g.split(w)
        if not ex.is_zero_vec(wV):
            raise NotReduced("generators must lie in z + l")
    t_span = g.cartan_elements()
    exact = all(ex.in_span(w, t_span) for w in gens)
    pool = list(gens)
    if not exact:
        from .spindler import conj_formula

        for w in gens:
            for i in range(g.dV):
                for s in range(1, samples + 1):
                    for sign in (1, -1):
                        v = ex.vscale(sign * s, ex.unit(g.dV, i))
                        pool.append(list(conj_formula(g, v, g.algebra.element(w)).coords))
    cone = GenCone(g.dim, pool)
    failures = []
    for w in gens:
        wz, _, wl = g.split(w)
        for label, p in (("z", wz + [ZERO] * (g.dV + g.dl)), ("l", [ZERO] * (g.dz + g.dV) + wl)):
            if membership(cone, p) is None:
                failures.append({"generator": w, "projection": label, "vector": p})
    if not failures:
        return InvarianceReport(True, exact)
    return InvarianceReport(False if exact else None, exact, failures)


# ---------------------------------------------------------------------------
# module splitting


@dataclass
class ModuleSplit:
    V_eff: list
    V_fix: list
    V_h_plus: list
    V_h_minus: list
    V_h_zero: list
    orthogonal: bool
    involution: bool


def _l_euler(l: LieAlgebra, h) -> bool:
    return is_euler_matrix(l.ad_matrix(ex.vec(h)))


def module_split(g: SpindlerAlgebra, s_basis, h) -> ModuleSplit:
    """V_eff = span(s.V), V_fix = common kernel of s, and the eigenspaces of
    an Euler element h of s.  Euler-ness is checked for ad h on l."""
    h = ex.vec(h)
    if not _l_euler(g.l, h):
        raise NotEuler("ad h is not diagonalizable with spectrum in {-1, 0, 1}")
    n = g.dV
    reps = [g.rho_of(ex.vec(b)) for b in s_basis]
    cols = [ex.matvec(R, ex.unit(n, i)) for R in reps for i in range(n)]
    V_eff = ex.row_basis(cols) if cols else []
    V_fix = ex.nullspace([r for R in reps for r in R], n) if reps else [ex.unit(n, i) for i in range(n)]
    H = g.rho_of(h)
    plus = ex.nullspace(ex.msub(H, ex.mscale(HALF, ex.eye(n))), n)
    minus = ex.nullspace(ex.madd(H, ex.mscale(HALF, ex.eye(n))), n)
    zero = ex.nullspace(H, n)
    orth = True
    wit = g.data.witness
    if wit is not None and V_eff and V_fix:
        omega = ex.zeros(n, n)
        for a, B in zip(wit.f, g.data.beta):
            omega = ex.madd(omega, ex.mscale(a, B))
        orth = all(ex.bilinear(u, omega, w) == 0 for u in V_eff for w in V_fix)
    H2 = ex.mscale(2, H)
    inv = all(ex.matvec(H2, ex.matvec(H2, v)) == v for v in V_eff)
    return ModuleSplit(V_eff, V_fix, plus, minus, zero, orth, inv)


# ---------------------------------------------------------------------------
# Euler derivations


@dataclass
class DecompositionCheck:
    h: list
    plus: list  # basis of V_h^+
    minus: list  # basis of V_h^-
    a: bool
    b: bool
    c: bool
    covers_z: bool
    witness: dict = field(default_factory=dict)
    derivation: Derivation | None = None

    @property
    def ok(self) -> bool:
        return self.a and self.b and self.c and self.covers_z and self.derivation is not None


@dataclass
class EulerReport:
    status: str  # "YES" | "NO"
    derivation: Derivation | None
    attempts: list
    complete: bool  # False if decompositions were restricted to coordinate blocks with multiplicity


def _bracket_span(g: SpindlerAlgebra, A, B) -> list:
    vals = [g.beta_of(u, w) for u in A for w in B]
    return ex.row_basis(vals) if vals else []


def _split_levi(g: SpindlerAlgebra, xl) -> list:
    """Component of x_l in the Levi part, along the declared center of l."""
    levi, center = levi_split(g)
    basis = levi + center
    if not levi:
        return [ZERO] * g.dl
    c = ex.solve(ex.transpose(basis), ex.vec(xl))
    if c is None:
        raise ConelabError("Levi and center do not span l")
    return _comb(c[: len(levi)], levi, g.dl)


def _block_matrix(bases_vals, n):
    """Matrix acting by scalar val on span(basis) for each (basis, val)."""
    P = [v for basis, _ in bases_vals for v in basis]
    diag = [val for basis, val in bases_vals for _ in basis]
    if len(P) != n or ex.rank(P) != n:
        return None
    Pc = ex.transpose(P)
    Dm = ex.zeros(n, n)
    for i, d in enumerate(diag):
        Dm[i][i] = d
    return ex.matmul(ex.matmul(Pc, Dm), ex.inverse(Pc))


def check_decomposition(g: SpindlerAlgebra, x: Element, h, plus, minus) -> DecompositionCheck:
    """Test conditions (a), (b), (c) for h and V_h = plus + minus and build D."""
    h = ex.vec(h)
    xz, xV, xl = g.split(x)
    n = g.dV
    H = g.rho_of(h)
    zero = ex.nullspace(H, n)
    xs = _split_levi(g, xl)
    a = g.l.bracket_coords(h, xs) == xs
    zp = _bracket_span(g, plus, plus)
    zm = _bracket_span(g, minus, minus)
    z0 = ex.row_basis(_bracket_span(g, plus, minus) + _bracket_span(g, zero, zero))
    b = ex.in_span(xz, zp) if not ex.is_zero_vec(xz) else True
    b = b and (ex.in_span(xV, plus) if not ex.is_zero_vec(xV) else True)
    parts = [("[V+,V+]", zp), ("[V-,V-]", zm), ("[V+,V-]+[V0,V0]", z0)]
    allv = zp + zm + z0
    c = ex.rank(allv) == len(allv) if allv else True
    witness = {}
    if not c:
        # nonzero vector lying in one part and in the sum of the others
        ns = ex.nullspace(ex.transpose(allv), len(allv))[0]
        i = next(k for k, a_ in enumerate(ns) if a_)
        bounds, o = [], 0
        for name, basis in parts:
            bounds.append((name, o, o + len(basis)))
            o += len(basis)
        name, lo, hi = next(p for p in bounds if p[1] <= i < p[2])
        vec_ = _comb(ns[lo:hi], allv[lo:hi], g.dz)
        others = [p[0] for p in bounds if p[0] != name and any(ns[p[1] : p[2]])]
        witness["overlap"] = {"space": name, "with": others, "vector": vec_}
    # beta(V_h, V_h) inside z_1 + z_-1?  If not, g_0(D) is not generated by
    # [g_1(D), g_-1(D)] for the resulting D.
    pm = zp + zm
    for u in plus + minus:
        for w in plus + minus:
            val = g.beta_of(u, w)
            if not ex.is_zero_vec(val) and not (pm and ex.in_span(val, pm)):
                witness["beta_outside_pm"] = {"u": u, "w": w, "vector": val}
                break
        if "beta_outside_pm" in witness:
            break
    covers = ex.rank(allv) == g.dz if c else False
    if c and not covers:
        witness["z_not_covered"] = True
    D = None
    if a and b and c and covers:
        Dz = _block_matrix([(zp, Fraction(1)), (zm, Fraction(-1)), (z0, ZERO)], g.dz) if g.dz else []
        DV = _block_matrix([(plus, HALF), (minus, -HALF), (zero, ZERO)], n) if n else []
        if (g.dz and Dz is None) or (n and DV is None):
            witness["not_a_decomposition"] = True
        else:
            M = _ad_l_in_g(g, h)
            for i in range(g.dz):
                for j in range(g.dz):
                    M[i][j] += Dz[i][j]
            for i in range(n):
                for j in range(n):
                    M[g.dz + i][g.dz + j] += DV[i][j]
            D = Derivation(g.algebra, M)
            D.is_euler = is_euler_matrix(M)
            D.h = h
            witness["derivation"] = D.is_derivation()
            witness["fixes_x"] = ex.matvec(M, x.coords) == list(x.coords)
            witness["nonzero"] = not ex.is_zero_mat(M)
            if not (witness["derivation"] and witness["fixes_x"] and D.is_euler and witness["nonzero"]):
                D = None
    return DecompositionCheck(h, plus, minus, a, b, c, covers, witness, D)


def _coordinate_blocks(g: SpindlerAlgebra) -> list:
    """Connected components of V-coordinates under the l-action."""
    n = g.dV
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for R in g.data.rho:
        for i in range(n):
            for j in range(n):
                if R[i][j]:
                    parent[find(i)] = find(j)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def euler_candidates(g: SpindlerAlgebra, x: Element) -> list:
    """Euler elements h of l with h in [l, l] and [h, x_s] = x_s."""
    derived = g.l.derived()
    if not derived:
        return [[ZERO] * g.dl]
    out = []
    xs = _split_levi(g, g.split(x)[2])
    if not ex.is_zero_vec(xs):
        try:
            t = jm_triple(g.l, g.l.element(xs), within=levi_split(g)[0])
            out.append(list(t.half_h.coords))
        except NoTriple:
            pass
    for h in g.l.meta.get("euler", []):
        out.append(ex.vec(h))
    good = []
    for h in out:
        if _l_euler(g.l, h) and ex.in_span(h, derived) and h not in good:
            good.append(h)
    return good


def euler_exists(g: SpindlerAlgebra, x: Element, h_candidates=None) -> EulerReport:
    """Search for an Euler derivation D with D x = x.

    For every candidate h and every split of the coordinate-aligned
    l-submodules of V_h = [h, V] into V_h^+ and V_h^-, the three conditions
    are checked and D is assembled on success."""
    if h_candidates is None:
        cands = euler_candidates(g, x)
    else:
        cands = [ex.vec(h) for h in h_candidates]
    if not cands:
        raise NoCandidates("no Euler element candidates")
    blocks = _coordinate_blocks(g)
    n = g.dV
    attempts = []
    complete = True
    for h in cands:
        if not _l_euler(g.l, h):
            attempts.append({"h": h, "error": "not an Euler element of l"})
            continue
        H = g.rho_of(h)
        image = ex.row_basis(ex.transpose(H)) if n else []
        in_vh = []
        for blk in blocks:
            vs = [ex.unit(n, i) for i in blk]
            if all(ex.in_span(v, image) for v in vs):
                in_vh.append(blk)
        units = [ex.unit(n, i) for blk in in_vh for i in blk]
        if not ex.same_span(units, image):
            complete = False
            splits = [(image, [])]
        else:
            splits = []
            for signs in product((1, -1), repeat=len(in_vh)):
                plus = [ex.unit(n, i) for blk, s in zip(in_vh, signs) if s > 0 for i in blk]
                minus = [ex.unit(n, i) for blk, s in zip(in_vh, signs) if s < 0 for i in blk]
                splits.append((plus, minus))
        for plus, minus in splits:
            chk = check_decomposition(g, x, h, plus, minus)
            attempts.append(chk)
            if chk.ok:
                return EulerReport("YES", chk.derivation, attempts, complete)
    return EulerReport("NO", None, attempts, complete)


def graded_pieces(D: Derivation) -> dict:
    """Eigenspaces g_lambda(D) for rational eigenvalues."""
    spec = rational_spectrum(D.matrix)
    if spec is None:
        raise ConelabError("D is not diagonalizable over Q")
    n = len(D.matrix)
    return {lam: ex.nullspace(ex.msub(D.matrix, ex.mscale(lam, ex.eye(n))), n) for lam in spec}


def zero_part_generated(D: Derivation) -> bool:
    """g_0(D) = [g_1(D), g_{-1}(D)]."""
    pieces = graded_pieces(D)
    g = D.algebra
    g0 = pieces.get(Fraction(0), [])
    g1 = pieces.get(Fraction(1), [])
    gm = pieces.get(Fraction(-1), [])
    br = [g.bracket_coords(a, b) for a in g1 for b in gm]
    br = [v for v in br if not ex.is_zero_vec(v)]
    return ex.same_span(ex.row_basis(br) if br else [], g0)


# ---------------------------------------------------------------------------
# affine pairs


@dataclass
class AffinePair:
    x: Element
    D: Derivation
    cone_ref: list | None = None  # generators in z + l


def verify_affine_pair(p: AffinePair, g: SpindlerAlgebra | None = None) -> dict:
    xc = list(p.x.coords)
    Dx = p.D.apply(xc)
    residual = ex.vsub(Dx, xc)
    report = {
        "Dx=x": ex.is_zero_vec(residual),
        "residual": residual,
        "nilpotent": is_ad_nilpotent(p.x),
        "derivation": p.D.is_derivation(),
    }
    if p.cone_ref is not None and g is not None:
        report["invariance"] = dcan_invariance(g, p.cone_ref).status
    report["ok"] = all(report[k] for k in ("Dx=x", "nilpotent", "derivation")) and report.get("invariance", True) is not False
    return report


def gl2_span(g: SpindlerAlgebra, x: Element) -> list:
    """Basis {x_z, h, x_l, f} of the subalgebra isomorphic to gl2 built from a
    JM triple of x_l and the central part x_z (x_z nonzero, x_l nonzero)."""
    xz, _, xl = g.split(x)
    t = jm_triple(g.l, g.l.element(xl), within=levi_split(g)[0])
    pad = [ZERO] * (g.dz + g.dV)
    basis = [xz + [ZERO] * (g.dV + g.dl), pad + list(t.h.coords), pad + list(xl), pad + list(t.f.coords)]
    if not g.algebra.subalgebra_brackets_closed(basis):
        raise ConelabError("span is not a subalgebra")
    return basis


def radical_basis(g: SpindlerAlgebra) -> list:
    """z + V + (radical of l), using the declared Levi split of l."""
    pad = g.dz + g.dV
    out = [ex.unit(g.dim, i) for i in range(pad)]
    levi, center = levi_split(g)
    if not levi:
        out += [ex.unit(g.dim, pad + i) for i in range(g.dl)]
    else:
        out += [[ZERO] * pad + c for c in center]
    return out
