"""Pointedness of the cones co(x) = conv(Inn(g)x) and C_x = its closed
convex cone, for admissible algebras g = z + V + l and for reductive
algebras built from compact ideals and sp(2n, R) ideals.

For x = x_z + x_V + x_l the z-valued Hamiltonian is

    H_x(v) = p_z(e^{ad v} x) = x_z + [v, x_V] + 1/2 [v, [v, x_l]],

and C_{x,z} is the closed cone generated by the values [y, [y, x_l]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import exact as ex
from .algebra import ConelabError, Element, LieAlgebra, is_ad_nilpotent, jordan_decomposition
from .exact import ZERO
from .quadcone import (
    DEFAULT_BUDGET,
    NOT_POINTED,
    POINTED,
    UNDECIDED,
    PointednessVerdict,
    QuadraticCone,
    block_sum,
)
from .spindler import Obstruction, SpindlerAlgebra, reduce_to_zl

__all__ = [
    "PointednessVerdict",
    "ZHamiltonian",
    "Semibounded",
    "hamiltonian_of",
    "scalar_semibounded",
    "cxz_cone",
    "co_pointed",
    "cx_pointed",
    "reductive_co",
    "reductive_cx",
    "extension_obstruction",
    "POINTED",
    "NOT_POINTED",
    "UNDECIDED",
]


class UnsupportedSimpleIdeal(ConelabError):
    pass


class UnsupportedAlgebra(ConelabError):
    pass


@dataclass
class ZHamiltonian:
    """H(v) = constant + linear v + 1/2 (v^T Q_k v)_k.

    ``linear[k]`` is the row vector of v -> [v, x_V]_k and ``quadratic[k]``
    is the Gram matrix of v -> [v, [v, x_l]]_k = beta_k(x_l.v, v).
    """

    constant: list
    linear: list
    quadratic: list

    def value(self, v) -> list:
        v = ex.vec(v)
        return [
            c + ex.dot(L, v) + ex.quad(Qk, v) / 2
            for c, L, Qk in zip(self.constant, self.linear, self.quadratic)
        ]

    def compose(self, f) -> tuple:
        """Scalar Hamiltonian f o H as (constant, linear, Gram matrix)."""
        f = ex.vec(f)
        n = len(self.quadratic[0]) if self.quadratic else 0
        c = ex.dot(f, self.constant)
        lin = [ZERO] * n
        Q = ex.zeros(n, n)
        for a, L, Qk in zip(f, self.linear, self.quadratic):
            if a:
                lin = ex.vadd(lin, ex.vscale(a, L))
                Q = ex.madd(Q, ex.mscale(a, Qk))
        return c, lin, Q

    def form_polynomial(self, k: int = 0) -> dict:
        """Coefficients of y^T Q_k y as {exponent tuple: coefficient}."""
        Qk = self.quadratic[k]
        n = len(Qk)
        out = {}
        for i in range(n):
            for j in range(i, n):
                c = Qk[i][j] if i == j else 2 * Qk[i][j]
                if c:
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    out[tuple(e)] = c
        return out


def hamiltonian_of(g: SpindlerAlgebra, x: Element) -> ZHamiltonian:
    xz, xV, xl = g.split(x)
    lin = [ex.matvec(B, xV) for B in g.data.beta]
    return ZHamiltonian(list(xz), lin, g.quadratic_forms(xl))


@dataclass
class Semibounded:
    kind: str  # "below" | "above" | "both-directions-unbounded" | "constant"
    inf: Fraction | None  # None when unbounded below
    sup: Fraction | None

    @property
    def bounded_below(self) -> bool:
        return self.inf is not None

    @property
    def bounded_above(self) -> bool:
        return self.sup is not None

    @property
    def semibounded(self) -> bool:
        return self.kind != "both-directions-unbounded"


def _infimum(c, b, Q):
    """inf of c + b.v + 1/2 v^T Q v, or None when unbounded below."""
    ok, _ = ex.psd_check(Q)
    if not ok:
        return None
    if not Q:
        return c if ex.is_zero_vec(b) else None
    vstar = ex.solve(Q, ex.vscale(-1, b))
    if vstar is None:
        return None
    return c + ex.dot(b, vstar) / 2


def scalar_semibounded(c, b, Q) -> Semibounded:
    """Exact range analysis of v -> c + b.v + 1/2 v^T Q v."""
    c, b, Q = ex.Q(c), ex.vec(b), ex.mat(Q)
    lo = _infimum(c, b, Q)
    neg = _infimum(-c, ex.vscale(-1, b), ex.mscale(-1, Q))
    hi = None if neg is None else -neg
    if lo is not None and hi is not None:
        kind = "constant"
    elif lo is not None:
        kind = "below"
    elif hi is not None:
        kind = "above"
    else:
        kind = "both-directions-unbounded"
    return Semibounded(kind, lo, hi)


@dataclass
class CxzCone:
    quadratic: QuadraticCone
    cone: object  # GenCone approximation (inner)
    exact: bool


def cxz_cone(g: SpindlerAlgebra, x: Element, budget: int = DEFAULT_BUDGET) -> CxzCone:
    _, _, xl = g.split(x)
    qc = QuadraticCone(g.quadratic_forms(xl), out_dim=g.dz)
    cone, exact = qc.polyhedral(budget)
    return CxzCone(qc, cone, exact)


def _require_faithful(g: SpindlerAlgebra):
    rows = [ [a for row in R for a in row] for R in g.data.rho]
    if g.dV and g.dl and ex.rank(ex.transpose(rows)) < g.dl:
        raise UnsupportedAlgebra("l acts non-faithfully on V; split off the kernel first")


def co_pointed(g: SpindlerAlgebra, x: Element, budget: int = DEFAULT_BUDGET, seed: int | None = None) -> PointednessVerdict:
    """Is co(x) pointed?  Equivalent to pointedness of co_z(x), decided via the
    reduction to z + l and the cone C_{x,z}."""
    _require_faithful(g)
    red = reduce_to_zl(g, x)
    if isinstance(red, Obstruction):
        return PointednessVerdict(
            NOT_POINTED,
            {"kind": "affine_line", "v0": red.v0, "direction": red.direction},
        )
    _, _, xl = g.split(red.reduced)
    qc = QuadraticCone(g.quadratic_forms(xl), out_dim=g.dz)
    v = qc.decide_pointed(budget, seed)
    v.certificate = dict(v.certificate)
    v.certificate["reduced"] = list(red.reduced.coords)
    v.certificate["conjugator"] = red.conjugator
    return v


def cx_pointed(g: SpindlerAlgebra, x: Element, budget: int = DEFAULT_BUDGET, seed: int | None = None) -> PointednessVerdict:
    """Is C_x pointed?  co(x) must be pointed, and when x_l is nilpotent the
    reduced z-part must satisfy (x_z + C_{x,z}) ∩ -C_{x,z} ⊆ {0}."""
    co = co_pointed(g, x, budget, seed)
    if co.status != POINTED:
        return co
    xl_el = g.element(l=g.split(x)[2])
    if not is_ad_nilpotent(xl_el):
        cert = dict(co.certificate)
        cert["x_l_nilpotent"] = False
        return PointednessVerdict(POINTED, cert)
    reduced = co.certificate["reduced"]
    xz, _, xl = g.split(reduced)
    cert = dict(co.certificate)
    cert["x_l_nilpotent"] = True
    if ex.is_zero_vec(xz):
        return PointednessVerdict(POINTED, cert)
    qc = QuadraticCone(g.quadratic_forms(xl), out_dim=g.dz)
    inside, mcert = qc.contains(ex.vscale(-1, xz), budget, seed)
    if inside is None:
        return PointednessVerdict(UNDECIDED, {"kind": "budget", "stage": "membership of -x_z"})
    if inside:
        cert = {"kind": "shift_meets_negative", "x_z": xz, "membership": mcert, "reduced": reduced}
        return PointednessVerdict(NOT_POINTED, cert)
    cert["separator"] = mcert["f"] if "f" in mcert else None
    return PointednessVerdict(POINTED, cert)


# ---------------------------------------------------------------------------
# reductive algebras


def _ideals(g: LieAlgebra) -> list:
    ideals = g.meta.get("ideals")
    if not ideals:
        raise UnsupportedSimpleIdeal("no ideal decomposition declared for this algebra")
    covered = sorted(i for idl in ideals for i in idl["basis"])
    if covered != list(range(g.dim)):
        raise UnsupportedSimpleIdeal("declared ideals do not cover the basis")
    for idl in ideals:
        if idl["kind"] not in ("sp", "compact", "center"):
            raise UnsupportedSimpleIdeal(f"unsupported ideal kind {idl['kind']!r}")
    return ideals


def _sp_form(idl, x) -> list:
    """Gram matrix of v -> omega(X v, v) for the component X of x."""
    reps = idl["rep"]
    n = len(reps[0])
    X = ex.zeros(n, n)
    for i, R in zip(idl["basis"], reps):
        if x[i]:
            X = ex.madd(X, ex.mscale(x[i], R))
    return ex.symmetrize(ex.matmul(ex.transpose(X), idl["omega"]))


def _semidefinite(M):
    ok_p, wp = ex.psd_check(M)
    ok_n, wn = ex.psd_check(ex.mscale(-1, M))
    return ok_p, ok_n, wp, wn


def reductive_co(g: LieAlgebra, x: Element) -> PointednessVerdict:
    """co(x) is pointed iff every sp-component of x lies in W_max or -W_max,
    i.e. its Hamiltonian form is semidefinite; compact parts never obstruct."""
    cert = {"kind": "ideals", "components": []}
    status = POINTED
    for idl in _ideals(g):
        if idl["kind"] != "sp":
            cert["components"].append({"kind": idl["kind"], "ok": True})
            continue
        M = _sp_form(idl, x.coords)
        psd, nsd, wp, wn = _semidefinite(M)
        entry = {"kind": "sp", "form": M, "psd": psd, "nsd": nsd}
        if not (psd or nsd):
            # wp has negative value, wn has positive value
            entry["negative_at"], entry["positive_at"] = wp, wn
            status = NOT_POINTED
        cert["components"].append(entry)
    return PointednessVerdict(status, cert)


def _component(idl, x):
    out = [ZERO] * len(x)
    for i in idl["basis"]:
        out[i] = x[i]
    return out


def reductive_cx(g: LieAlgebra, x: Element) -> PointednessVerdict:
    """C_x is pointed iff C_{x_p} is pointed and, when x_p is nilpotent and
    x_k is nonzero, x_k has a nonzero central component."""
    ideals = _ideals(g)
    xp = [ZERO] * g.dim
    xk = [ZERO] * g.dim
    xc = [ZERO] * g.dim
    for idl in ideals:
        comp = _component(idl, x.coords)
        if idl["kind"] == "sp":
            xp = ex.vadd(xp, comp)
        else:
            xk = ex.vadd(xk, comp)
            if idl["kind"] == "center":
                xc = ex.vadd(xc, comp)
    co = reductive_co(g, g.element(xp))
    cert = dict(co.certificate)
    cert["x_p"], cert["x_k"] = xp, xk
    try:
        js = jordan_decomposition(x)
        cert["jordan"] = {"semisimple": list(js.semisimple.coords), "nilpotent": list(js.nilpotent.coords)}
    except ConelabError:
        pass
    if co.status != POINTED:
        return PointednessVerdict(NOT_POINTED, cert)
    nil = is_ad_nilpotent(g.element(xp))
    cert["x_p_nilpotent"] = nil
    if nil and not ex.is_zero_vec(xk) and ex.is_zero_vec(xc):
        cert["kind"] = "compact_part_in_derived"
        return PointednessVerdict(NOT_POINTED, cert)
    return PointednessVerdict(POINTED, cert)


# ---------------------------------------------------------------------------
# extension obstruction


@dataclass
class ObstructionReport:
    status: str  # "OBSTRUCTED" | "NO_OBSTRUCTION" | "UNDECIDED"
    systems: list = field(default_factory=list)  # (positive roots, verdict) per adapted system
    viable: object = None  # a positive system for which the sum is pointed


def extension_obstruction(g: SpindlerAlgebra, x: Element, budget: int = DEFAULT_BUDGET) -> ObstructionReport:
    """Can C_{x,z} + C_{min,z} be pointed for some adapted positive system?

    If not, no pointed generating invariant cone contains x."""
    from .roots import c_alpha_forms, cartan_of, positive_systems

    _, xV, xl = g.split(x)
    if not ex.is_zero_vec(xV):
        raise ValueError("x must be reduced to z + l first")
    cd = cartan_of(g)
    forms = g.quadratic_forms(xl)
    results = []
    viable = None
    undecided = False
    for ps in positive_systems(cd):
        if not ps.adapted:
            continue
        # C_{x,z} + C_{min,z}: value cone of the block sum of the forms
        pieces = [forms] + [c_alpha_forms(cd, rt) for rt in ps.roots if rt.kind == "solvable"]
        v = QuadraticCone(block_sum(*pieces), out_dim=g.dz).decide_pointed(budget)
        results.append((ps, v))
        if v.status == POINTED and viable is None:
            viable = ps
        if v.status == UNDECIDED:
            undecided = True
    if viable is not None:
        status = "NO_OBSTRUCTION"
    elif undecided:
        status = "UNDECIDED"
    else:
        status = "OBSTRUCTED"
    return ObstructionReport(status, results, viable)
