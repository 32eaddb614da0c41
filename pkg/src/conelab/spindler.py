"""Algebras g = z + V + l built from an l-module V and an invariant
skew-symmetric map beta: V x V -> z.

Basis order of the assembled algebra: z-block, then V-block, then l-block.
The bracket is

    [(z, v, x), (z', v', x')] = (beta(v, v'), x.v' - x'.v, [x, x']).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import exact as ex
from .algebra import ConelabError, Element, LieAlgebra, LinearMap, MalformedInput
from .exact import ZERO, Q


class InvalidAction(ConelabError):
    pass


class InvalidBeta(ConelabError):
    pass


@dataclass
class AdmissibilityWitness:
    """A functional f on z and x in l with v -> f(beta(x.v, v)) positive definite."""

    f: list
    x: list

    def __post_init__(self):
        self.f = ex.vec(self.f)
        self.x = ex.vec(self.x)

    @classmethod
    def coerce(cls, w) -> "AdmissibilityWitness":
        return w if isinstance(w, cls) else cls(w["f"], w["x"])

    def form(self, g: "SpindlerAlgebra") -> list:
        return hamiltonian_form(g, self.f, self.x)

    def holds(self, g: "SpindlerAlgebra") -> bool:
        return ex.is_positive_definite(self.form(g)) if g.dV else True


@dataclass
class SpindlerData:
    l: LieAlgebra
    dim_V: int
    dim_z: int
    rho: list  # one dim_V x dim_V matrix per basis element of l
    beta: list  # one skew dim_V x dim_V matrix per coordinate of z
    cartan: list = field(default_factory=list)  # basis of t_l, in l-coordinates
    witness: AdmissibilityWitness | None = None  # dicts {"f", "x"} are accepted
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rho = [ex.mat(m) for m in self.rho]
        self.beta = [ex.mat(m) for m in self.beta]
        self.cartan = [ex.vec(c) for c in self.cartan]
        if self.witness is not None:
            self.witness = AdmissibilityWitness.coerce(self.witness)


@dataclass
class Derivation(LinearMap):
    """A derivation; ``is_euler`` is filled in by the constructor that made it."""

    is_euler: bool | None = None


def rational_spectrum(M) -> dict | None:
    """Eigenvalues with multiplicities when M is diagonalizable over Q."""
    from .algebra import _charpoly

    n = len(M)
    if n == 0:
        return {}
    p = _charpoly(M)
    roots = p.ground_roots()
    spec = {}
    total = 0
    for r in roots:
        lam = Fraction(int(r.p), int(r.q))
        shifted = [[M[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        k = n - ex.rank(shifted)
        spec[lam] = k
        total += k
    return spec if total == n else None


class SpindlerAlgebra:
    def __init__(self, data: SpindlerData, algebra: LieAlgebra):
        self.data = data
        self.algebra = algebra
        self.l = data.l
        self.dz, self.dV, self.dl = data.dim_z, data.dim_V, data.l.dim
        self.dim = algebra.dim
        self.name = data.meta.get("name", "spindler")

    # coordinates ----------------------------------------------------------
    def element(self, z=None, v=None, l=None) -> Element:
        z = ex.vec(z) if z is not None else [ZERO] * self.dz
        v = ex.vec(v) if v is not None else [ZERO] * self.dV
        l = ex.vec(l) if l is not None else [ZERO] * self.dl
        if (len(z), len(v), len(l)) != (self.dz, self.dV, self.dl):
            raise MalformedInput("block lengths do not match the algebra")
        return self.algebra.element(z + v + l)

    def split(self, x) -> tuple[list, list, list]:
        c = list(x.coords if isinstance(x, Element) else x)
        a, b = self.dz, self.dz + self.dV
        return c[:a], c[a:b], c[b:]

    def projection(self, block: str) -> LinearMap:
        lo, hi = {"z": (0, self.dz), "V": (self.dz, self.dz + self.dV), "l": (self.dz + self.dV, self.dim)}[block]
        M = ex.zeros(self.dim, self.dim)
        for i in range(lo, hi):
            M[i][i] = Fraction(1)
        return LinearMap(self.algebra, M)

    def rho_of(self, xl) -> list:
        M = ex.zeros(self.dV, self.dV)
        for a, R in zip(xl, self.data.rho):
            if a:
                M = [[m + a * r for m, r in zip(rm, rr)] for rm, rr in zip(M, R)]
        return M

    def beta_of(self, u, w) -> list:
        return [ex.bilinear(u, B, w) for B in self.data.beta]

    def quadratic_forms(self, xl) -> list:
        """Gram matrices Q_k with y^T Q_k y = beta_k(x_l.y, y) = [y, [y, x_l]]_k."""
        R = self.rho_of(xl)
        return [ex.symmetrize(ex.matmul(ex.transpose(R), B)) for B in self.data.beta]

    def cartan_elements(self) -> list:
        """Basis of t = z + t_l as coordinate vectors in g."""
        out = [ex.unit(self.dim, i) for i in range(self.dz)]
        for c in self.data.cartan:
            out.append([ZERO] * (self.dz + self.dV) + list(c))
        return out

    def __repr__(self) -> str:
        return f"SpindlerAlgebra({self.name}, dim_z={self.dz}, dim_V={self.dV}, dim_l={self.dl})"


def build(data: SpindlerData) -> SpindlerAlgebra:
    l, n, m = data.l, data.dim_V, data.dim_z
    if len(data.rho) != l.dim or any(len(R) != n or any(len(r) != n for r in R) for R in data.rho):
        raise InvalidAction("rho must give one dim_V x dim_V matrix per basis element of l")
    if len(data.beta) != m or any(len(B) != n or any(len(r) != n for r in B) for B in data.beta):
        raise InvalidBeta("beta must give one dim_V x dim_V matrix per coordinate of z")
    for i in range(l.dim):
        for j in range(i + 1, l.dim):
            lhs = ex.zeros(n, n)
            for k, c in enumerate(l.structure(i, j)):
                if c:
                    lhs = ex.madd(lhs, ex.mscale(c, data.rho[k]))
            Ri, Rj = data.rho[i], data.rho[j]
            rhs = ex.msub(ex.matmul(Ri, Rj), ex.matmul(Rj, Ri))
            if lhs != rhs:
                raise InvalidAction(f"rho is not a homomorphism on ({l.names[i]}, {l.names[j]})")
    for k, B in enumerate(data.beta):
        if ex.madd(B, ex.transpose(B)) != ex.zeros(n, n):
            raise InvalidBeta(f"beta component {k} is not skew-symmetric")
        for i, R in enumerate(data.rho):
            if not ex.is_zero_mat(ex.madd(ex.matmul(B, R), ex.matmul(ex.transpose(R), B))):
                raise InvalidBeta(f"beta component {k} is not invariant under {l.names[i]}")
    names_z = data.meta.get("z_names") or [f"z{i + 1}" if m > 1 else "z" for i in range(m)]
    names_V = data.meta.get("V_names") or [f"v{i + 1}" for i in range(n)]
    names = list(names_z) + list(names_V)
    for nm in l.names:
        names.append(nm if nm not in names else nm + "_l")
    oz, ol = 0, m + n
    br: dict = {}
    for a in range(n):
        for b in range(a + 1, n):
            coeffs = {oz + k: data.beta[k][a][b] for k in range(m) if data.beta[k][a][b]}
            if coeffs:
                br[(m + a, m + b)] = coeffs
    for i in range(l.dim):
        R = data.rho[i]
        for b in range(n):
            coeffs = {m + a: R[a][b] for a in range(n) if R[a][b]}
            if coeffs:
                # [v_b, x_i] = -x_i . v_b
                br[(m + b, ol + i)] = {k: -c for k, c in coeffs.items()}
        for j in range(i + 1, l.dim):
            coeffs = {ol + k: c for k, c in enumerate(l.structure(i, j)) if c}
            if coeffs:
                br[(ol + i, ol + j)] = coeffs
    g = LieAlgebra(names, br, check=False, meta={"spindler": True})
    return SpindlerAlgebra(data, g)


def levi_split(g: SpindlerAlgebra) -> tuple[list, list]:
    """(Levi basis, center basis) of l in l-coordinates.

    Uses the declared split when present; otherwise requires
    l = z(l) + [l, l] (reductive) and returns ([l, l], z(l))."""
    levi = g.data.meta.get("levi", g.l.meta.get("levi"))
    if levi is not None:
        return [ex.vec(b) for b in levi], [ex.vec(b) for b in g.data.meta.get("l_center", [])]
    if g.dl == 0:
        return [], []
    der, cen = g.l.derived(), g.l.center()
    if ex.span_dim(der + cen) == g.dl and len(der) + len(cen) == g.dl:
        return der, cen
    if not der:
        return [], [ex.unit(g.dl, i) for i in range(g.dl)]
    raise ConelabError("l is not reductive and no Levi split is declared")


def canonical_derivation(g: SpindlerAlgebra) -> Derivation:
    """Identity on z, one half on V, zero on l."""
    M = ex.zeros(g.dim, g.dim)
    for i in range(g.dz):
        M[i][i] = Fraction(1)
    for i in range(g.dz, g.dz + g.dV):
        M[i][i] = Fraction(1, 2)
    return Derivation(g.algebra, M, is_euler=False)


def conj_formula(g: SpindlerAlgebra, y, x: Element) -> Element:
    """e^{ad y} x for y in V, in closed form."""
    y = ex.vec(y)
    xz, xV, xl = g.split(x)
    R = g.rho_of(xl)
    Ry = ex.matvec(R, y)
    # [y, x_V] + (1/2)[y, [y, x_l]] with [y, x_l] = -x_l.y
    z = ex.vadd(xz, g.beta_of(y, xV))
    z = ex.vadd(z, ex.vscale(Fraction(1, 2), g.beta_of(Ry, y)))
    v = ex.vsub(xV, Ry)
    return g.element(z, v, xl)


@dataclass
class VSplit:
    fixed: list  # basis of V_{x,0} = ker(x_l on V)
    image: list  # basis of V_x = x_l.V
    orthogonal: bool  # V_x equals the beta-orthogonal space of V_{x,0}


def v_fixed_and_image(g: SpindlerAlgebra, xl) -> VSplit:
    R = g.rho_of(ex.vec(xl))
    fixed = ex.nullspace(R, g.dV)
    image = ex.row_basis(ex.transpose(R)) if g.dV else []
    # beta-orthogonal of fixed: {v : beta_k(f, v) = 0 for all k, f}
    rows = [ex.matvec(ex.transpose(B), f) for B in g.data.beta for f in fixed]
    orth = ex.nullspace(rows, g.dV) if rows else [ex.unit(g.dV, i) for i in range(g.dV)]
    return VSplit(fixed, image, ex.same_span(orth, image))


@dataclass
class Reduction:
    reduced: Element
    conjugator: list  # y in V with e^{ad y} x = reduced


@dataclass
class Obstruction:
    """x_V is not in x_l.V; along t -> e^{ad t v0} x the z-part moves on an
    affine line with nonzero direction beta(v0, x_V)."""

    x: Element
    v0: list
    direction: list


def reduce_to_zl(g: SpindlerAlgebra, x: Element) -> Reduction | Obstruction:
    xz, xV, xl = g.split(x)
    R = g.rho_of(xl)
    if g.dV == 0 or ex.is_zero_vec(xV):
        return Reduction(x, [ZERO] * g.dV)
    y = ex.solve_min_norm(R, xV)
    if y is not None:
        red = conj_formula(g, y, x)
        return Reduction(red, y)
    for v0 in ex.nullspace(R, g.dV):
        d = g.beta_of(v0, xV)
        if not ex.is_zero_vec(d):
            return Obstruction(x, v0, d)
    raise ConelabError("beta is degenerate on the fixed vectors of x_l; the algebra is not admissible")


def v_ideals(g: SpindlerAlgebra) -> list:
    """Largest l-invariant subspace of V that brackets to zero with V."""
    rows = [B[i] for B in g.data.beta for i in range(g.dV)]
    U = ex.nullspace(rows, g.dV) if rows else [ex.unit(g.dV, i) for i in range(g.dV)]
    while U:
        ann = ex.nullspace(U, g.dV)  # functionals vanishing on U
        cons = list(ann)
        for R in g.data.rho:
            cons += [ex.matvec(ex.transpose(R), w) for w in ann]
        nxt = ex.nullspace(cons, g.dV) if cons else U
        if len(nxt) == len(U):
            return U
        U = nxt
    return []


@dataclass
class AdmissibilityReport:
    items: dict  # letter -> (ok, message)

    def __bool__(self) -> bool:
        return all(ok for ok, _ in self.items.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, (ok, _) in self.items.items() if not ok]


def hamiltonian_form(g: SpindlerAlgebra, f, xl) -> list:
    """Gram matrix of v -> f(beta(x_l.v, v))."""
    Qs = g.quadratic_forms(xl)
    M = ex.zeros(g.dV, g.dV)
    for c, Qk in zip(ex.vec(f), Qs):
        if c:
            M = ex.madd(M, ex.mscale(c, Qk))
    return M


def check_admissibility(g: SpindlerAlgebra, witness=None) -> AdmissibilityReport:
    """Check the structural conditions (a)-(e) that can be decided exactly.

    (a) z is the centre; (b) l is declared reductive; (c) any declared
    centre/Levi split of l is orthogonal for the trace form; (d) t_l has no
    nonzero fixed vectors in V; (e) the witness Hamiltonian is positive definite.
    """
    items = {}
    centre = g.algebra.center()
    zblock = [ex.unit(g.dim, i) for i in range(g.dz)]
    items["a"] = (ex.same_span(centre, zblock), "centre of g equals z")
    red = g.data.meta.get("l_reductive", True)
    items["b"] = (bool(red), "l declared reductive")
    ok_c = True
    lc, lv = g.data.meta.get("l_center"), g.data.meta.get("levi")
    if lc and lv:
        ok_c = all(_rep_trace(g, a, b) == 0 for a in lc for b in lv)
    items["c"] = (ok_c, "declared centre of l is trace-orthogonal to the Levi part on V")
    rows = [r for c in g.data.cartan for r in g.rho_of(c)]
    fixed = ex.nullspace(rows, g.dV) if rows else [ex.unit(g.dV, i) for i in range(g.dV)]
    items["d"] = (not fixed or g.dV == 0, "no nonzero t_l-fixed vectors in V")
    w = witness if witness is not None else g.data.witness
    if w is None:
        items["e"] = (False, "no witness (f, x) supplied")
    else:
        items["e"] = (AdmissibilityWitness.coerce(w).holds(g), "f(beta(x.v, v)) is positive definite")
    return AdmissibilityReport(items)


def _rep_trace(g: SpindlerAlgebra, a, b) -> Fraction:
    A, B = g.rho_of(a), g.rho_of(b)
    return sum((ex.dot(A[i], [B[k][i] for k in range(g.dV)]) for i in range(g.dV)), ZERO)


# ---------------------------------------------------------------------------
# JSON


def _fmt_mat(M):
    return [ex.fmt_vec(r) for r in M]


def to_json(g: SpindlerAlgebra) -> dict:
    d = g.data
    out = {
        "l": d.l.to_json(),
        "dim_V": d.dim_V,
        "dim_z": d.dim_z,
        "rho": [_fmt_mat(R) for R in d.rho],
        "beta": [_fmt_mat(B) for B in d.beta],
        "cartan": [ex.fmt_vec(c) for c in d.cartan],
    }
    if d.witness is not None:
        out["witness"] = {"f": ex.fmt_vec(d.witness.f), "x": ex.fmt_vec(d.witness.x)}
    out["name"] = g.name
    extra = {k: [ex.fmt_vec(v) for v in d.meta[k]] for k in ("levi", "l_center") if k in d.meta}
    if extra:
        out["meta"] = extra
    return out


def _file_meta(meta: dict) -> dict:
    return {k: [ex.vec(v) for v in meta[k]] for k in ("levi", "l_center") if k in meta}


def from_json(data: dict | str, base: Path | None = None) -> SpindlerAlgebra:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        ldata = data["l"]
        if isinstance(ldata, str):
            path = Path(ldata)
            if base is not None and not path.is_absolute():
                path = base / path
            ldata = json.loads(path.read_text())
        l = LieAlgebra.from_json(ldata)
        cartan = []
        for c in data.get("cartan", []):
            cartan.append(ex.unit(l.dim, int(c)) if isinstance(c, int) else ex.vec(c))
        sd = SpindlerData(
            l=l,
            dim_V=int(data["dim_V"]),
            dim_z=int(data["dim_z"]),
            rho=data["rho"],
            beta=data["beta"],
            cartan=cartan,
            witness=data.get("witness"),
            meta=dict(_file_meta(data.get("meta", {})), name=data.get("name", "spindler")),
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
        if isinstance(err, MalformedInput):
            raise
        raise MalformedInput(f"malformed Spindler file: {err}") from err
    return build(sd)
