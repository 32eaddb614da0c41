"""Finite-dimensional real Lie algebras with rational structure constants."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import exact as ex
from .exact import ZERO, Q


class ConelabError(Exception):
    """Base class for every error raised by this package."""


class MalformedInput(ConelabError, ValueError):
    pass


class JacobiFailure(ConelabError):
    def __init__(self, triple):
        super().__init__(f"Jacobi identity fails on basis triple {triple}")
        self.triple = triple


class NotNilpotent(ConelabError):
    pass


class NotPullbackable(ConelabError):
    pass


class LieAlgebra:
    """Structure constants on a named basis.

    ``brackets[(i, j)]`` is the list of ``(k, c)`` pairs with
    ``[b_i, b_j] = sum c b_k``; both orders are stored.
    """

    def __init__(self, names: Sequence[str], brackets: dict, *, check: bool = True, meta: dict | None = None):
        self.names = list(names)
        self.dim = len(self.names)
        if len(set(self.names)) != self.dim:
            raise MalformedInput("basis names must be distinct")
        self._sc: dict[tuple[int, int], list[tuple[int, Fraction]]] = {}
        for (i, j), coeffs in brackets.items():
            if i == j:
                if any(Q(c) for c in dict(coeffs).values()):
                    raise MalformedInput(f"[b{i}, b{i}] must vanish")
                continue
            items = [(int(k), Q(c)) for k, c in dict(coeffs).items() if Q(c) != 0]
            if not all(0 <= k < self.dim for k, _ in items) or not (0 <= i < self.dim and 0 <= j < self.dim):
                raise MalformedInput("bracket index out of range")
            if (j, i) in self._sc:
                other = dict(self._sc[(j, i)])
                if {k: -c for k, c in items} != other:
                    raise MalformedInput(f"brackets ({i},{j}) and ({j},{i}) are not antisymmetric")
            if items:
                self._sc[(i, j)] = sorted(items)
                self._sc[(j, i)] = sorted((k, -c) for k, c in items)
        self.meta = dict(meta or {})
        self._ad_basis: list[list[list[Fraction]]] | None = None
        if check:
            self.check_jacobi()

    # construction helpers -------------------------------------------------
    @classmethod
    def from_matrices(cls, names: Sequence[str], mats: Sequence[Sequence[Sequence]], **kw) -> "LieAlgebra":
        """Linear Lie algebra spanned by the given matrices (commutator bracket)."""
        mats = [ex.mat(m) for m in mats]
        flat = [[a for row in m for a in row] for m in mats]
        # coordinates are read off on a set of independent entries
        _, rows = ex.rref(flat)
        if len(rows) != len(mats):
            raise MalformedInput("matrices are linearly dependent")
        inv = ex.inverse([[v[r] for r in rows] for v in flat])  # row-vector convention
        br = {}
        for i, j in combinations(range(len(mats)), 2):
            c = ex.msub(ex.matmul(mats[i], mats[j]), ex.matmul(mats[j], mats[i]))
            cf = [a for row in c for a in row]
            coords = [ex.dot([cf[r] for r in rows], [inv[t][k] for t in range(len(rows))]) for k in range(len(mats))]
            recon = [ZERO] * len(cf)
            for a, v in zip(coords, flat):
                if a:
                    recon = [x + a * y for x, y in zip(recon, v)]
            if recon != cf:
                raise MalformedInput("matrices do not span a Lie algebra")
            br[(i, j)] = {k: v for k, v in enumerate(coords) if v}
        meta = dict(kw.pop("meta", {}) or {})
        meta.setdefault("matrices", mats)
        return cls(names, br, meta=meta, **kw)

    @classmethod
    def abelian(cls, names: Sequence[str]) -> "LieAlgebra":
        return cls(names, {})

    # elements -------------------------------------------------------------
    def element(self, coords: Iterable) -> "Element":
        c = tuple(Q(a) for a in coords)
        if len(c) != self.dim:
            raise MalformedInput(f"expected {self.dim} coordinates, got {len(c)}")
        return Element(self, c)

    def zero(self) -> "Element":
        return Element(self, (ZERO,) * self.dim)

    def basis_element(self, i: int | str) -> "Element":
        if isinstance(i, str):
            i = self.names.index(i)
        return Element(self, tuple(ex.unit(self.dim, i)))

    def basis(self) -> list["Element"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def parse(self, text: str) -> "Element":
        """Read ``"1,-1/2,0"`` or a combination of basis names like ``"e+2*z"``."""
        text = text.strip()
        if any(ch.isalpha() for ch in text):
            return self.element(_parse_combination(text, self.names))
        return self.element(ex.parse_vec(text))

    # bracket and friends --------------------------------------------------
    def bracket_coords(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
        out = [ZERO] * self.dim
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in xs:
            for j, b in ys:
                terms = self._sc.get((i, j))
                if terms:
                    ab = a * b
                    for k, c in terms:
                        out[k] += ab * c
        return out

    def structure(self, i: int, j: int) -> list[Fraction]:
        out = [ZERO] * self.dim
        for k, c in self._sc.get((i, j), ()):
            out[k] = c
        return out

    def ad_basis(self) -> list[list[list[Fraction]]]:
        if self._ad_basis is None:
            mats = []
            for i in range(self.dim):
                cols = [self.structure(i, j) for j in range(self.dim)]
                mats.append(ex.transpose(cols))
            self._ad_basis = mats
        return self._ad_basis

    def ad_matrix(self, x: Sequence[Fraction]) -> list[list[Fraction]]:
        """Matrix of ad x; column j holds the coordinates of [x, b_j]."""
        M = ex.zeros(self.dim, self.dim)
        for a, A in zip(x, self.ad_basis()):
            if a:
                M = [[m + a * b for m, b in zip(rm, rb)] for rm, rb in zip(M, A)]
        return M

    def check_jacobi(self) -> None:
        n = self.dim
        for i, j, k in combinations(range(n), 3):
            e = [ex.unit(n, t) for t in (i, j, k)]
            s = ex.vadd(
                ex.vadd(
                    self.bracket_coords(e[0], self.structure(j, k)),
                    self.bracket_coords(e[1], self.structure(k, i)),
                ),
                self.bracket_coords(e[2], self.structure(i, j)),
            )
            if not ex.is_zero_vec(s):
                raise JacobiFailure((self.names[i], self.names[j], self.names[k]))

    def center(self) -> list[list[Fraction]]:
        flat = [[a for row in A for a in row] for A in self.ad_basis()]
        return ex.nullspace(ex.transpose(flat), self.dim)

    def derived(self) -> list[list[Fraction]]:
        vecs = [self.structure(i, j) for i, j in combinations(range(self.dim), 2)]
        return ex.row_basis(vecs)

    def is_abelian(self) -> bool:
        return not self._sc

    def subalgebra_brackets_closed(self, basis) -> bool:
        for u, v in combinations(basis, 2):
            if not ex.in_span(self.bracket_coords(u, v), basis):
                return False
        return True

    # serialization --------------------------------------------------------
    def to_json(self) -> dict:
        br = []
        for (i, j), terms in sorted(self._sc.items()):
            if i < j:
                br.append({"i": i, "j": j, "coeffs": {str(k): ex.fmt(c) for k, c in terms}})
        return {"dim": self.dim, "basis": list(self.names), "brackets": br}

    @classmethod
    def from_json(cls, data: dict | str) -> "LieAlgebra":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            dim = int(data["dim"])
            names = list(data.get("basis") or [f"b{i}" for i in range(dim)])
            if len(names) != dim:
                raise MalformedInput("basis length does not match dim")
            br = {}
            for entry in data.get("brackets", []):
                i, j = int(entry["i"]), int(entry["j"])
                if i >= j:
                    raise MalformedInput("bracket entries must have i < j")
                br[(i, j)] = {int(k): Q(v) for k, v in entry["coeffs"].items()}
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
            if isinstance(err, MalformedInput):
                raise
            raise MalformedInput(f"malformed algebra file: {err}") from err
        return cls(names, br)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, basis={self.names})"


def _parse_combination(text: str, names: Sequence[str]) -> list[Fraction]:
    import re

    coords = [ZERO] * len(names)
    s = text.replace(" ", "")
    if not s.startswith(("+", "-")):
        s = "+" + s
    token = re.compile(r"([+-])(?:([0-9/]+)\*?)?([A-Za-z_][A-Za-z0-9_]*)")
    pos = 0
    for m in token.finditer(s):
        if m.start() != pos:
            raise MalformedInput(f"cannot parse {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coef = Q(m.group(2)) if m.group(2) else Fraction(1)
        name = m.group(3)
        if name not in names:
            raise MalformedInput(f"unknown basis element {name!r}")
        coords[names.index(name)] += sign * coef
    if pos != len(s):
        raise MalformedInput(f"cannot parse {text!r}")
    return coords


@dataclass(frozen=True)
class Element:
    algebra: LieAlgebra = field(repr=False, compare=False)
    coords: tuple

    def __add__(self, other: "Element") -> "Element":
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, c) -> "Element":
        c = Q(c)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def __str__(self) -> str:
        parts = []
        for name, a in zip(self.algebra.names, self.coords):
            if a:
                parts.append(f"{ex.fmt(a)}*{name}")
        return " + ".join(parts) if parts else "0"


@dataclass
class LinearMap:
    """A linear endomorphism of an algebra in the basis of that algebra."""

    algebra: LieAlgebra = field(repr=False)
    matrix: list

    def __call__(self, x: Element) -> Element:
        return self.algebra.element(ex.matvec(self.matrix, x.coords))

    def apply(self, coords) -> list[Fraction]:
        return ex.matvec(self.matrix, coords)

    def is_derivation(self) -> bool:
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                ei, ej = ex.unit(g.dim, i), ex.unit(g.dim, j)
                lhs = self.apply(g.structure(i, j))
                rhs = ex.vadd(
                    g.bracket_coords(self.apply(ei), ej),
                    g.bracket_coords(ei, self.apply(ej)),
                )
                if lhs != rhs:
                    return False
        return True


@dataclass
class JordanSplit:
    semisimple: Element
    nilpotent: Element


def bracket(x: Element, y: Element) -> Element:
    g = x.algebra
    return g.element(g.bracket_coords(x.coords, y.coords))


def ad(x: Element) -> LinearMap:
    return LinearMap(x.algebra, x.algebra.ad_matrix(x.coords))


def exp_ad(y: Element, x: Element, order_bound: int | None = None) -> Element:
    """e^{ad y} x as a terminating series.

    Raises NotNilpotent if the ``order_bound``-th term is still nonzero.
    """
    g = y.algebra
    bound = order_bound if order_bound is not None else g.dim + 1
    total = list(x.coords)
    term = list(x.coords)
    k = 0
    while True:
        k += 1
        term = [a / k for a in g.bracket_coords(y.coords, term)]
        if ex.is_zero_vec(term):
            return g.element(total)
        if k >= bound:
            raise NotNilpotent("the exponential series of ad y does not terminate")
        total = ex.vadd(total, term)


def killing_form(x: Element, y: Element, *, convention: str) -> Fraction:
    """Killing form; ``convention`` is ``"trace"`` for tr(ad x ad y) or
    ``"negative"`` for -tr(ad x ad y).  There is deliberately no default."""
    if convention not in ("trace", "negative"):
        raise ValueError("convention must be 'trace' or 'negative'")
    g = x.algebra
    A, B = g.ad_matrix(x.coords), g.ad_matrix(y.coords)
    tr = sum((ex.dot(A[i], [B[k][i] for k in range(g.dim)]) for i in range(g.dim)), ZERO)
    return tr if convention == "trace" else -tr


def _mat_pow_nilpotent(A) -> bool:
    n = len(A)
    P = [list(r) for r in A]
    for _ in range(n):
        if ex.is_zero_mat(P):
            return True
        P = ex.matmul(P, A)
    return ex.is_zero_mat(P)


def is_ad_nilpotent(x: Element) -> bool:
    return _mat_pow_nilpotent(x.algebra.ad_matrix(x.coords))


def _charpoly(A):
    from sympy import Poly, QQ, symbols
    from sympy.polys.matrices import DomainMatrix

    t = symbols("t")
    dm = DomainMatrix([[QQ(a.numerator, a.denominator) for a in row] for row in A], (len(A), len(A)), QQ)
    coeffs = dm.charpoly()
    return Poly(list(coeffs), t, domain=QQ)


def _poly_at(p, A):
    n = len(A)
    out = ex.zeros(n, n)
    for c in p.all_coeffs():
        out = ex.matmul(out, A)
        c = Fraction(int(c.numerator), int(c.denominator))
        if c:
            for i in range(n):
                out[i][i] += c
    return out


def semisimple_part_matrix(A) -> list[list[Fraction]]:
    """Semisimple part of a rational matrix via Newton iteration on the
    square-free part of its characteristic polynomial."""
    if _mat_pow_nilpotent(A):
        return ex.zeros(len(A), len(A))
    r = _charpoly(A).sqf_part()
    dr = r.diff()
    S = [list(row) for row in A]
    for _ in range(len(A) + 2):
        rS = _poly_at(r, S)
        if ex.is_zero_mat(rS):
            return S
        S = ex.msub(S, ex.matmul(rS, ex.inverse(_poly_at(dr, S))))
    raise ConelabError("Newton iteration for the semisimple part did not converge")


def jordan_decomposition(x: Element) -> JordanSplit:
    """Split x = x_s + x_n with ad x_s semisimple, ad x_n nilpotent, commuting.

    When the centre is nonzero the split is fixed by requiring x_n in the
    derived algebra, which needs g = centre + derived algebra as a direct sum.
    """
    g = x.algebra
    A = g.ad_matrix(x.coords)
    S = semisimple_part_matrix(A)
    N = ex.msub(A, S)
    flat = [[a for row in B for a in row] for B in g.ad_basis()]
    M = ex.transpose(flat)
    xn = ex.solve(M, [a for row in N for a in row])
    if xn is None:
        raise NotPullbackable("the nilpotent part of ad x is not inner")
    centre = g.center()
    if centre:
        der = g.derived()
        if len(der) + len(centre) != g.dim or ex.intersect(der, centre, g.dim):
            raise NotPullbackable("centre and derived algebra do not split g; the Jordan split is ambiguous")
        # project xn onto the derived algebra along the centre
        basis = der + centre
        coeffs = ex.solve(ex.transpose(basis), xn)
        xn = [ZERO] * g.dim
        for c, v in zip(coeffs[: len(der)], der):
            xn = ex.vadd(xn, ex.vscale(c, v))
    xs = ex.vsub(list(x.coords), xn)
    return JordanSplit(g.element(xs), g.element(xn))


def direct_sum(a: LieAlgebra, b: LieAlgebra, names: Sequence[str] | None = None) -> LieAlgebra:
    n = a.dim
    br = {}
    for (i, j), terms in a._sc.items():
        if i < j:
            br[(i, j)] = dict(terms)
    for (i, j), terms in b._sc.items():
        if i < j:
            br[(i + n, j + n)] = {k + n: c for k, c in terms}
    if names is None:
        names = list(a.names) + [nm if nm not in a.names else nm + "'" for nm in b.names]
    return LieAlgebra(names, br, check=False)
