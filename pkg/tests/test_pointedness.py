from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conelab import catalog
from conelab import exact as ex
from conelab.algebra import LieAlgebra
from conelab.pointedness import (
    NOT_POINTED,
    POINTED,
    UnsupportedAlgebra,
    UnsupportedSimpleIdeal,
    co_pointed,
    cx_pointed,
    cxz_cone,
    extension_obstruction,
    hamiltonian_of,
    reductive_co,
    reductive_cx,
    scalar_semibounded,
)
from conelab.quadcone import QuadraticCone, replay
from conelab.spindler import SpindlerData, build

from oracles import grid_range, seeded

small = st.integers(-3, 3)


@pytest.fixture(scope="module")
def jac1():
    return catalog.jacobi(1)


@pytest.fixture(scope="module")
def cex():
    return catalog.counterexample()


def jacobi_element(g, z=0, q=0, p=0, a=0, b=0, c=0):
    return g.element(z=[z], v=[q, p], l=[a, b, c])


def is_nilpotent_sl2(a, b, c):
    return a * a + b * c == 0


def corollary_cx(sb, a, b, c):
    """C_x pointed iff x or -x has H bounded below and, for nonzero
    nilpotent x_l, H >= 0."""
    nil = (a, b, c) != (0, 0, 0) and is_nilpotent_sl2(a, b, c)
    plus = sb.inf is not None and (not nil or sb.inf >= 0)
    minus = sb.sup is not None and (not nil or sb.sup <= 0)
    return plus or minus


# hamiltonian_of ------------------------------------------------------------


@given(small, small, small)
def test_sl2_hamiltonian_identity(a, b, c):
    g = catalog.jacobi(1)
    H = hamiltonian_of(g, jacobi_element(g, a=a, b=b, c=c))
    expected = {k: v for k, v in {(0, 2): b, (2, 0): -c, (1, 1): 2 * a}.items() if v}
    assert H.form_polynomial(0) == expected


@given(small, small, small)
def test_sl2_nonnegativity_closed_form(a, b, c):
    g = catalog.jacobi(1)
    H = hamiltonian_of(g, jacobi_element(g, a=a, b=b, c=c))
    sb = scalar_semibounded(*H.compose([1]))
    nonneg = sb.inf is not None and sb.inf >= 0
    assert nonneg == (b >= 0 and -c >= 0 and a * a <= -b * c)


def test_hamiltonian_of_central_and_vector_parts(jac1):
    H = hamiltonian_of(jac1, jacobi_element(jac1, z=F(5, 2)))
    assert H.value([7, -3]) == [F(5, 2)]
    H = hamiltonian_of(jac1, jacobi_element(jac1, q=1, p=2))
    for v in ([1, 0], [0, 1], [3, -2]):
        assert H.value(v) == jac1.beta_of(v, [1, 2])


def test_hamiltonian_value_matches_conjugation(jac1):
    from conelab.spindler import conj_formula

    rng = seeded(3)
    for _ in range(20):
        x = jac1.algebra.element([F(rng.randint(-3, 3)) for _ in range(6)])
        v = [F(rng.randint(-3, 3)) for _ in range(2)]
        z_part = jac1.split(conj_formula(jac1, v, x))[0]
        assert hamiltonian_of(jac1, x).value(v) == z_part


def test_rotation_gives_sum_of_squares(jac1):
    H = hamiltonian_of(jac1, jacobi_element(jac1, b=1, c=-1))
    assert H.form_polynomial(0) == {(2, 0): 1, (0, 2): 1}


# scalar_semibounded --------------------------------------------------------


def test_semibounded_examples():
    sb = scalar_semibounded(0, [0, 0], [[2, 0], [0, 2]])
    assert sb.kind == "below" and sb.inf == 0
    sb = scalar_semibounded(0, [0, 1], [[2, 0], [0, 0]])
    assert sb.kind == "both-directions-unbounded"
    sb = scalar_semibounded(3, [0, 0], [[0, 0], [0, 0]])
    assert sb.kind == "constant" and sb.inf == sb.sup == 3
    sb = scalar_semibounded(1, [2, 0], [[-2, 0], [0, 0]])
    assert sb.kind == "above" and sb.sup == 2
    sb = scalar_semibounded(0, [0, 0], [[0, 1], [1, 0]])
    assert not sb.semibounded


@given(st.integers(-4, 4), small, small, small, small, small)
def test_semibounded_infimum_is_attained(c, b1, b2, q11, q12, q22):
    Q = [[q11, q12], [q12, q22]]
    sb = scalar_semibounded(c, [b1, b2], Q)
    if sb.inf is None:
        return
    # the minimiser solves Q v = -b
    v = ex.solve(ex.mat(Q), [F(-b1), F(-b2)])
    val = c + b1 * v[0] + b2 * v[1] + ex.quad(ex.mat(Q), v) / 2
    assert val == sb.inf


# co_pointed / cx_pointed ---------------------------------------------------


def test_jacobi_examples(jac1):
    assert co_pointed(jac1, jacobi_element(jac1, b=1, c=-1)).status == POINTED
    assert co_pointed(jac1, jacobi_element(jac1, a=1)).status == NOT_POINTED
    assert co_pointed(jac1, jacobi_element(jac1, z=4)).status == POINTED
    e_pos = jacobi_element(jac1, z=1, b=1)
    e_neg = jacobi_element(jac1, z=-1, b=1)
    assert cx_pointed(jac1, e_pos).status == POINTED
    assert cx_pointed(jac1, e_neg).status == NOT_POINTED
    assert cx_pointed(jac1, jacobi_element(jac1, z=-1, c=1)).status == POINTED


def test_pure_vector_element_is_not_pointed(jac1):
    v = co_pointed(jac1, jacobi_element(jac1, q=1))
    assert v.status == NOT_POINTED
    assert v.certificate["kind"] == "affine_line"


def test_jacobi_corollary_random(jac1):
    rng = seeded(11)
    for _ in range(60):
        a, b, c = (rng.randint(-3, 3) for _ in range(3))
        if rng.random() < 0.3:
            s, t = rng.randint(-2, 2), rng.randint(-2, 2)
            a, b, c = s * t, t * t, -s * s
        q, p = (rng.randint(-2, 2) if rng.random() < 0.5 else 0 for _ in range(2))
        z = F(rng.randint(-3, 3), rng.randint(1, 3))
        x = jacobi_element(jac1, z, q, p, a, b, c)
        cc, bb, QQ = hamiltonian_of(jac1, x).compose([1])
        sb = scalar_semibounded(cc, bb, QQ)
        below, above, near = grid_range(cc, bb, QQ)
        assert sb.bounded_below == below and sb.bounded_above == above
        if sb.inf is not None:
            assert near >= float(sb.inf) - 1e-9
        assert (co_pointed(jac1, x).status == POINTED) == sb.semibounded
        assert (cx_pointed(jac1, x).status == POINTED) == corollary_cx(sb, a, b, c)


def test_pointed_certificates_replay(jac1, cex):
    cases = [
        (jac1, jacobi_element(jac1, b=1, c=-1)),
        (jac1, jacobi_element(jac1, a=1)),
        (cex, cex.element(l=[1, -1])),
        (cex, cex.element(l=[1, 1])),
    ]
    for g, x in cases:
        v = co_pointed(g, x)
        red = g.algebra.element(v.certificate["reduced"])
        qc = QuadraticCone(g.quadratic_forms(g.split(red)[2]), out_dim=g.dz)
        assert replay(qc, v)


def test_counterexample_cones(cex):
    x = cex.element(l=[1, -1])
    cz = cxz_cone(cex, x)
    assert cz.exact
    gens = sorted(tuple(ex.primitive(gv)) for gv in cz.cone.generators)
    assert gens == [(-1, 0), (0, 1)]
    assert cx_pointed(cex, x).status == POINTED
    assert cx_pointed(cex, cex.element(l=[1, 1])).status == POINTED


def test_counterexample_obstruction(cex):
    rep = extension_obstruction(cex, cex.element(l=[1, -1]))
    assert rep.status == "OBSTRUCTED"
    assert len(rep.systems) == 6
    assert all(v.status == NOT_POINTED for _, v in rep.systems)

    rep = extension_obstruction(cex, cex.element(l=[1, 1]))
    assert rep.status == "NO_OBSTRUCTION"
    assert all(r.values[2] <= 0 and r.values[3] <= 0 for r in rep.viable.roots)

    rep = extension_obstruction(cex, cex.element(l=[-1, -1]))
    assert rep.status == "NO_OBSTRUCTION"
    assert all(r.values[2] >= 0 and r.values[3] >= 0 for r in rep.viable.roots)


def test_obstruction_needs_reduced_element(cex):
    with pytest.raises(ValueError):
        extension_obstruction(cex, cex.element(v=[1, 0, 0, 0, 0, 0, 0, 0], l=[1, -1]))


def test_unfaithful_action_rejected():
    data = SpindlerData(
        l=LieAlgebra.abelian(["a", "b"]),
        dim_V=2,
        dim_z=1,
        rho=[[[0, -1], [1, 0]], [[0, 0], [0, 0]]],
        beta=[[[0, 1], [-1, 0]]],
    )
    g = build(data)
    with pytest.raises(UnsupportedAlgebra):
        co_pointed(g, g.element(l=[1, 0]))


# reductive algebras --------------------------------------------------------


def test_reductive_sl2():
    g = catalog.get("sl2")
    h, e, f = (g.element(ex.unit(3, i)) for i in range(3))
    assert reductive_co(g, e).status == POINTED
    assert reductive_co(g, f - e).status == POINTED
    assert reductive_co(g, h).status == NOT_POINTED
    assert reductive_cx(g, e).status == POINTED
    assert reductive_cx(g, h).status == NOT_POINTED


def test_reductive_sp4_forms():
    g = catalog.get("sp4")
    names = g.names
    B11 = g.element(ex.unit(g.dim, names.index("B11")))
    A12 = g.element(ex.unit(g.dim, names.index("A12")))
    assert reductive_co(g, B11).status == POINTED
    assert reductive_co(g, A12).status == NOT_POINTED


def test_reductive_compact_simple():
    # the orbit of a nonzero x is a sphere: co(x) is a ball, C_x is everything
    g = catalog.get("su2")
    for i in range(3):
        assert reductive_co(g, g.element(ex.unit(3, i))).status == POINTED
        assert reductive_cx(g, g.element(ex.unit(3, i))).status == NOT_POINTED


def test_reductive_requires_declared_ideals():
    a = LieAlgebra.abelian(["a", "b"])
    with pytest.raises(UnsupportedSimpleIdeal):
        reductive_co(a, a.element([1, 0]))
