"""Worked examples: Jacobi algebras, a solvable counterexample, a gl(2)
module example, an oscillator algebra, and a few simple algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable

from . import exact as ex
from .algebra import ConelabError, LieAlgebra, MalformedInput
from .spindler import AdmissibilityWitness, SpindlerAlgebra, SpindlerData, build

MAX_JACOBI_N = 4


class UnknownName(MalformedInput):
    pass


class MetadataError(ConelabError):
    pass


def _E(n, i, j):
    M = ex.zeros(n, n)
    M[i][j] = Fraction(1)
    return M


def _block(A, B, C, D):
    top = [ra + rb for ra, rb in zip(A, B)]
    bot = [rc + rd for rc, rd in zip(C, D)]
    return top + bot


def symplectic_form(n: int) -> list:
    """J = [[0, I], [-I, 0]], so omega(u, w) = u^T J w = sum q_i p'_i - p_i q'_i."""
    Z, I = ex.zeros(n, n), ex.eye(n)
    return _block(Z, I, ex.mscale(-1, I), Z)


def sp_basis(n: int) -> tuple[list[str], list]:
    """Basis of sp(2n, R): blocks [[A, B], [C, -A^T]] with B, C symmetric."""
    Z = ex.zeros(n, n)
    names, mats = [], []
    if n == 1:
        return ["h", "e", "f"], [ex.mat([[1, 0], [0, -1]]), ex.mat([[0, 1], [0, 0]]), ex.mat([[0, 0], [1, 0]])]
    for i in range(n):
        for j in range(n):
            A = _E(n, i, j)
            names.append(f"A{i + 1}{j + 1}")
            mats.append(_block(A, Z, Z, ex.mscale(-1, ex.transpose(A))))
    for i, j in combinations_with_replacement(range(n), 2):
        S = _E(n, i, j) if i == j else ex.madd(_E(n, i, j), _E(n, j, i))
        names.append(f"B{i + 1}{j + 1}")
        mats.append(_block(Z, S, Z, Z))
    for i, j in combinations_with_replacement(range(n), 2):
        S = _E(n, i, j) if i == j else ex.madd(_E(n, i, j), _E(n, j, i))
        names.append(f"C{i + 1}{j + 1}")
        mats.append(_block(Z, Z, S, Z))
    return names, mats


def sp_algebra(n: int) -> LieAlgebra:
    names, mats = sp_basis(n)
    g = LieAlgebra.from_matrices(names, mats, check=(n <= 2))
    rot = sp_compact_cartan(n, g)
    g.meta.update(
        {
            "name": "sl2" if n == 1 else f"sp{2 * n}",
            "cartan": rot,
            "ideals": [{"kind": "sp", "basis": list(range(g.dim)), "rep": mats, "omega": symplectic_form(n)}],
            "levi": [ex.unit(g.dim, i) for i in range(g.dim)],
            "euler": [sp_euler(n)],
        }
    )
    return g


def sp_euler(n: int) -> list:
    """Half the grading element diag(I, -I); ad of it has spectrum {-1, 0, 1}."""
    names, _ = sp_basis(n)
    v = [Fraction(0)] * len(names)
    if n == 1:
        v[0] = Fraction(1, 2)
    else:
        for i in range(n):
            v[names.index(f"A{i + 1}{i + 1}")] = Fraction(1, 2)
    return v


def sp_compact_cartan(n: int, g: LieAlgebra | None = None) -> list:
    """Rotations t_i = C_ii - B_ii, acting as [[0, -E_ii], [E_ii, 0]]."""
    names, _ = sp_basis(n)
    out = []
    for i in range(n):
        v = [Fraction(0)] * len(names)
        if n == 1:
            v[names.index("f")], v[names.index("e")] = Fraction(1), Fraction(-1)
        else:
            v[names.index(f"C{i + 1}{i + 1}")] = Fraction(1)
            v[names.index(f"B{i + 1}{i + 1}")] = Fraction(-1)
        out.append(v)
    return out


def su2() -> LieAlgebra:
    br = {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}}
    g = LieAlgebra(["u1", "u2", "u3"], br)
    g.meta.update({"name": "su2", "cartan": [ex.unit(3, 2)], "ideals": [{"kind": "compact", "basis": [0, 1, 2]}]})
    return g


def simple(name: str) -> LieAlgebra:
    table = {"sl2": lambda: sp_algebra(1), "sp4": lambda: sp_algebra(2), "sp6": lambda: sp_algebra(3), "su2": su2}
    if name not in table:
        raise UnknownName(f"unknown simple algebra {name!r}")
    return table[name]()


def jacobi(n: int) -> SpindlerAlgebra:
    """sp(2n, R) acting on R^{2n}, z = R, beta = the symplectic form."""
    if not 1 <= n <= MAX_JACOBI_N:
        raise UnknownName(f"jacobi({n}) is supported for 1 <= n <= {MAX_JACOBI_N}")
    l = sp_algebra(n)
    _, mats = sp_basis(n)
    J = symplectic_form(n)
    cartan = sp_compact_cartan(n)
    x = [Fraction(0)] * l.dim
    for t in cartan:
        x = ex.vsub(x, t)
    data = SpindlerData(
        l=l,
        dim_V=2 * n,
        dim_z=1,
        rho=mats,
        beta=[J],
        cartan=cartan,
        witness={"f": [1], "x": x},
        meta={
            "name": f"jacobi{n}",
            "V_names": [f"q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)],
            "levi": [ex.unit(l.dim, i) for i in range(l.dim)],
            "admissible": True,
        },
    )
    return build(data)


def _rot(scale):
    return ex.mat([[0, -scale], [scale, 0]])


def _blockdiag(blocks):
    n = sum(len(b) for b in blocks)
    M = ex.zeros(n, n)
    o = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, a in enumerate(row):
                M[o + i][o + j] = Fraction(a)
        o += len(b)
    return M


def counterexample() -> SpindlerAlgebra:
    """l = R^2 acting on V = C + C + C^2 with weights e1, e2, e1+e2 (times i),
    z = R^2.  Complex coordinates are stored as (Re, Im) pairs; the complex
    structure is multiplication by i, i.e. (a, b) -> (-b, a)."""
    l = LieAlgebra.abelian(["x1", "x2"])
    Z2 = ex.zeros(2, 2)
    rho1 = _blockdiag([_rot(1), Z2, _rot(1), _rot(1)])
    rho2 = _blockdiag([Z2, _rot(1), _rot(1), _rot(1)])
    w = ex.mat([[0, 1], [-1, 0]])  # Im(conj(a) b) on one complex coordinate
    beta1 = _blockdiag([w, Z2, w, Z2])
    beta2 = _blockdiag([Z2, w, Z2, w])
    data = SpindlerData(
        l=l,
        dim_V=8,
        dim_z=2,
        rho=[rho1, rho2],
        beta=[beta1, beta2],
        cartan=[[1, 0], [0, 1]],
        witness={"f": [1, 1], "x": [-1, -1]},
        meta={
            "name": "counterexample",
            "V_names": ["a1", "b1", "a2", "b2", "a3", "b3", "a4", "b4"],
            "complex_structure": _blockdiag([_rot(1)] * 4),
            "levi": [],
            "admissible": True,
        },
    )
    return build(data)


def gl2_module_example() -> SpindlerAlgebra:
    """l = R c + sl2 on V = V1 + V2 + V3 (three copies of R^2), z = R^3.

    sl2 acts on V1 and V2 by the defining representation, c rotates V3.
    beta = (beta_+, beta_-, beta_0) with
        beta_+ = v1 w2 - v2 w1,  beta_- = v3 w4 - v4 w3,
        beta_0 = v1 w4 - v2 w3 + v3 w2 - v4 w1 + v5 w6 - v6 w5.
    """
    br = {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}
    l = LieAlgebra(["c", "h", "e", "f"], br, meta={"euler": [[0, Fraction(1, 2), 0, 0]]})
    h2, e2, f2 = ex.mat([[1, 0], [0, -1]]), ex.mat([[0, 1], [0, 0]]), ex.mat([[0, 0], [1, 0]])
    Z2 = ex.zeros(2, 2)
    rho_c = _blockdiag([Z2, Z2, ex.mat([[0, 1], [-1, 0]])])
    rho = [rho_c] + [_blockdiag([m, m, Z2]) for m in (h2, e2, f2)]
    bp = ex.zeros(6, 6)
    bp[0][1], bp[1][0] = Fraction(1), Fraction(-1)
    bm = ex.zeros(6, 6)
    bm[2][3], bm[3][2] = Fraction(1), Fraction(-1)
    b0 = ex.zeros(6, 6)
    for (i, j), c in {(0, 3): 1, (1, 2): -1, (2, 1): 1, (3, 0): -1, (4, 5): 1, (5, 4): -1}.items():
        b0[i][j] = Fraction(c)
    data = SpindlerData(
        l=l,
        dim_V=6,
        dim_z=3,
        rho=rho,
        beta=[bp, bm, b0],
        cartan=[[1, 0, 0, 0], [0, 0, 1, -1]],
        witness={"f": [2, 2, 1], "x": [1, 0, 1, -1]},
        meta={
            "name": "gl2_module",
            "z_names": ["zp", "zm", "z0"],
            "levi": [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            "l_center": [[1, 0, 0, 0]],
            "admissible": True,
            "blocks": {"V1": [0, 1], "V2": [2, 3], "V3": [4, 5]},
        },
    )
    return build(data)


def oscillator(n: int = 1) -> SpindlerAlgebra:
    """Heisenberg algebra of R^{2n} extended by one rotation t (solvable)."""
    l = LieAlgebra.abelian(["t"])
    Z, I = ex.zeros(n, n), ex.eye(n)
    rot = _block(Z, ex.mscale(-1, I), I, Z)
    data = SpindlerData(
        l=l,
        dim_V=2 * n,
        dim_z=1,
        rho=[rot],
        beta=[symplectic_form(n)],
        cartan=[[1]],
        witness={"f": [1], "x": [-1]},
        meta={
            "name": f"oscillator{n}",
            "V_names": [f"q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)],
            "levi": [],
            "admissible": True,
        },
    )
    return build(data)


def heisenberg(n: int = 1) -> SpindlerAlgebra:
    """The Heisenberg algebra itself (l = 0); not admissible."""
    l = LieAlgebra([], {})
    data = SpindlerData(
        l=l,
        dim_V=2 * n,
        dim_z=1,
        rho=[],
        beta=[symplectic_form(n)],
        meta={
            "name": f"heisenberg{n}",
            "V_names": [f"q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)],
            "levi": [],
            "admissible": False,
        },
    )
    return build(data)


def as_spindler(l: LieAlgebra) -> SpindlerAlgebra:
    """View l as the algebra with V = 0 and z = 0."""
    data = SpindlerData(
        l=l,
        dim_V=0,
        dim_z=0,
        rho=[[] for _ in range(l.dim)],
        beta=[],
        cartan=l.meta.get("cartan", []),
        meta={"name": l.meta.get("name", "l"), "levi": l.meta.get("levi", [])},
    )
    return build(data)


def _commuting(alg: LieAlgebra, elements) -> bool:
    return all(
        ex.is_zero_vec(alg.bracket_coords(ex.vec(a), ex.vec(b))) for a in elements for b in elements
    )


def validate_metadata(obj) -> None:
    """Re-check declared metadata: commuting Cartan basis, positive
    definite witness, and a Levi/centre split spanning l."""
    if isinstance(obj, SpindlerAlgebra):
        if not _commuting(obj.l, obj.data.cartan):
            raise MetadataError("declared Cartan basis does not commute")
        if obj.data.witness is not None and not AdmissibilityWitness.coerce(obj.data.witness).holds(obj):
            raise MetadataError("witness Hamiltonian is not positive definite")
        levi, centre = obj.data.meta.get("levi"), obj.data.meta.get("l_center")
        if levi and centre is not None and ex.rank([ex.vec(v) for v in levi + centre]) != obj.dl:
            raise MetadataError("declared Levi part and centre do not span l")
    else:
        if not _commuting(obj, obj.meta.get("cartan", [])):
            raise MetadataError("declared Cartan basis does not commute")


@dataclass
class CatalogEntry:
    name: str
    kind: str  # "spindler" | "simple"
    builder: Callable
    params: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)  # block dimensions checked at load

    def load(self, validate: bool = True):
        obj = self.builder(**self.params)
        if validate:
            validate_metadata(obj)
            dims = {"dim": obj.dim}
            if isinstance(obj, SpindlerAlgebra):
                dims.update(dim_z=obj.dz, dim_V=obj.dV, dim_l=obj.dl)
            for k, v in self.expected.items():
                if dims.get(k) != v:
                    raise MetadataError(f"{self.name}: {k} is {dims.get(k)}, expected {v}")
        return obj


def _spindler_dims(z, V, l):
    return {"dim_z": z, "dim_V": V, "dim_l": l, "dim": z + V + l}


ENTRIES = {
    e.name: e
    for e in [
        *(
            CatalogEntry(f"jacobi{n}", "spindler", jacobi, {"n": n}, _spindler_dims(1, 2 * n, n * (2 * n + 1)))
            for n in range(1, MAX_JACOBI_N + 1)
        ),
        CatalogEntry("counterexample", "spindler", counterexample, expected=_spindler_dims(2, 8, 2)),
        CatalogEntry("gl2_module", "spindler", gl2_module_example, expected=_spindler_dims(3, 6, 4)),
        CatalogEntry("oscillator1", "spindler", oscillator, {"n": 1}, _spindler_dims(1, 2, 1)),
        CatalogEntry("heisenberg1", "spindler", heisenberg, {"n": 1}, _spindler_dims(1, 2, 0)),
        CatalogEntry("sl2", "simple", simple, {"name": "sl2"}, {"dim": 3}),
        CatalogEntry("sp4", "simple", simple, {"name": "sp4"}, {"dim": 10}),
        CatalogEntry("sp6", "simple", simple, {"name": "sp6"}, {"dim": 21}),
        CatalogEntry("su2", "simple", simple, {"name": "su2"}, {"dim": 3}),
    ]
}


def names() -> list[str]:
    return list(ENTRIES)


def get(name: str):
    if name not in ENTRIES:
        raise UnknownName(f"unknown catalog entry {name!r}")
    return ENTRIES[name].load()
