import random
from fractions import Fraction

import pytest

from supercurves.connection import ConnectionForm, OneForm, pure_gauge
from supercurves.duality import (
    DeltaFunction,
    Superdiagonal,
    apply_dual_operator,
    chart_psi,
    chart_psi_inverse,
    double_dual,
    dual_connection_chart,
    dual_normal_form,
    hat_nabla,
    is_dual_function,
    lambda_of_change,
    nu_map,
    nu_map_with_generator,
    psi,
    psi_op,
    rho_of_change,
    tau,
    tau_inverse,
    tilde_d,
    transition_cocycle,
)
from supercurves.sampling import random_element, random_flat_connection, random_matrix, random_section
from supercurves.superfield import CoordinateChange, DiffOperator
from supercurves.supermatrix import ModuleElement, SuperMatrix

CH = Superdiagonal.over(("e1", "e2", "e3"))
X, D, XH = CH.x, CH.delta, CH.xhat


def P(text, sig=D):
    return sig.parse(text)


def ops(sig=X):
    return {
        "z": DiffOperator.multiplication(sig.gen("z")),
        "theta": DiffOperator.multiplication(sig.gen("theta")),
        "d_z": DiffOperator.partial(sig, "z"),
        "d_theta": DiffOperator.partial(sig, "theta"),
    }


# -- d~ ---------------------------------------------------------------------------

def test_tilde_d_examples():
    assert tilde_d(P("z - theta rho"), CH).is_zero()
    assert tilde_d(P("rho"), CH).is_zero()
    assert tilde_d(P("theta"), CH) == D.one()


def test_tilde_d_of_rho_multiple():
    rng = random.Random(0)
    for _ in range(20):
        g = CH.from_x(random_element(X, rng))
        # d_theta passes the odd rho with a sign: d~(rho g) = -rho d_theta g = -dz d_theta g
        assert tilde_d(P("rho") * g, CH) == -(P("rho") * g.derivative("theta"))


def test_tilde_d_is_odd_derivation():
    rng = random.Random(1)
    for _ in range(30):
        f = random_element(D, rng, parity=rng.randint(0, 1))
        g = random_element(D, rng)
        sign = -1 if f.parity() else 1
        assert tilde_d(f * g, CH) == tilde_d(f, CH) * g + f * tilde_d(g, CH) * sign


def test_image_of_tilde_d_is_closed():
    rng = random.Random(2)
    for _ in range(20):
        f = random_element(X, rng, max_degree=3)
        w = OneForm(f.derivative("z"), f.derivative("theta"))
        assert w.is_closed()
        assert w.contraction(D) == tilde_d(CH.from_x(f), CH)


def test_dual_function_membership():
    assert is_dual_function(P("z - theta rho"), CH)
    assert not is_dual_function(P("theta"), CH)
    f = P("z^2 e1 e2 + rho e3")
    assert dual_normal_form(f, CH) is None
    P0, Q0 = P("z^2 + e1 e2"), P("z e3")
    g = P0 + P("rho") * (Q0 + P("theta") * P0.derivative("z"))
    assert is_dual_function(g, CH)
    assert dual_normal_form(g, CH) == (P0, Q0)


def test_delta_function_roundtrip():
    rng = random.Random(3)
    for _ in range(20):
        f = random_element(D, rng, max_degree=2)
        d = DeltaFunction.from_element(f, CH)
        assert d.to_element() == f
        assert CH.coordinates().from_dual(d.in_dual_coordinates()) == f


def test_dual_coordinate_maps_are_inverse():
    cm = CH.coordinates()
    rng = random.Random(4)
    for _ in range(20):
        f = random_element(D, rng, max_degree=2)
        assert cm.from_dual(cm.to_dual(f)) == f


# -- Psi and tau ---------------------------------------------------------------------

def test_psi_examples():
    f, g = P("z^2 + e1 e2", X), P("z e3", X)
    h = f + X.gen("theta") * g
    lf, lg = CH.from_x(f), CH.from_x(g)
    expected = lf + P("rho") * (P("theta") * lf.derivative("z") + lg)
    assert psi(h, CH) == expected
    assert psi(X.one(), CH) == D.one()


def test_psi_homomorphism_into_dual_functions():
    rng = random.Random(5)
    for _ in range(30):
        h1, h2 = random_element(X, rng), random_element(X, rng)
        assert psi(h1 * h2, CH) == psi(h1, CH) * psi(h2, CH)
        assert is_dual_function(psi(h1, CH), CH)


def test_tau_trivial_connection_is_psi():
    rng = random.Random(6)
    for _ in range(20):
        h = random_element(X, rng)
        assert tau(h, CH) == psi(h, CH)


def test_tau_of_one_for_constant_form():
    w = OneForm(P("e1 e2", X), P("e3", X))
    t1 = tau(X.one(), CH, w.connection())
    A, B = P("e1 e2"), P("e3")
    th, rh = P("theta"), P("rho")
    assert t1 == D.one() - th * B - th * rh * A + rh * B


@pytest.mark.parametrize("rank", [(1, 0), (1, 1)])
def test_tau_intertwines_operators(rank):
    rng = random.Random(7 + rank[1])
    for _ in range(4):
        conn = random_flat_connection(X, rank, rng)
        for _ in range(5):
            h = random_section(X, rank, rng, parity=None)
            t = tau(h, CH, conn)
            assert hat_nabla("theta", t, CH, conn).is_zero()
            assert tau_inverse(t, CH) == h
            for op in ops().values():
                lhs = tau(op.apply(h, lambda n, w: conn.nabla(n, w)), CH, conn)
                assert lhs == apply_dual_operator(psi_op(op, CH), t, CH, conn)


def test_tau_hits_the_whole_kernel():
    rng = random.Random(9)
    conn = random_flat_connection(X, (1, 0), rng)
    basis = D.monomial_basis(2)
    cols = [hat_nabla("theta", b, CH, conn) for b in basis]
    keys = sorted({k for c in cols for k in c.keys()}, key=repr)
    from supercurves import linalg
    rows = [[c.coordinates(keys)[i] for c in cols] for i in range(len(keys))]
    kernel = linalg.nullspace(rows, len(basis))
    assert kernel
    for v in kernel:
        f = sum((b * c for b, c in zip(basis, v) if c), D.zero())
        assert tau(tau_inverse(f, CH), CH, conn) == f


# -- hat derivatives -----------------------------------------------------------------

def _dual_derivative(conn_dual: ConnectionForm, name: str, v):
    cm = CH.coordinates()
    return cm.from_dual(conn_dual.nabla(name, cm.to_dual(v)))


@pytest.mark.parametrize("rank", [(1, 0), (1, 1), (2, 1)])
def test_hat_derivatives_match_coordinate_change(rank):
    rng = random.Random(12 + sum(rank))
    for _ in range(3):
        conn = random_flat_connection(X, rank, rng)
        dual = dual_connection_chart(conn, CH, rank)
        for _ in range(3):
            v = random_section(D, rank, rng, parity=None)
            for name in ("u", "theta", "rho"):
                assert hat_nabla(name, v, CH, conn) == _dual_derivative(dual, name, v)


def test_hat_derivatives_match_pure_gauge_oracle():
    rng = random.Random(13)
    rank = (1, 1)
    g = SuperMatrix.identity(X, rank) + random_matrix(X, rank, rng, nilpotent=True)
    conn = pure_gauge(g)
    gd = g.map(CH.from_x)
    ginv = gd.inverse()
    cm = CH.coordinates()
    for _ in range(5):
        v = random_section(D, rank, rng, parity=None)
        w = cm.to_dual(ginv @ v)
        for name in ("u", "theta", "rho"):
            expected = gd @ cm.from_dual(w.derivative(name))
            assert hat_nabla(name, v, CH, conn) == expected


def test_psi_op_examples():
    dz = DiffOperator.partial(X, "z")
    assert psi_op(dz, CH) == DiffOperator.partial(XH, "u", "u", "rho")
    zt = DiffOperator.multiplication(P("z theta", X))
    assert psi_op(zt, CH) == DiffOperator.multiplication(XH.parse("u rho"), "u", "rho")


def test_psi_op_is_multiplicative():
    rng = random.Random(14)
    for _ in range(15):
        a = DiffOperator({(i, j): random_element(X, rng, max_terms=2, max_degree=1)
                          for i in range(2) for j in range(2)})
        b = DiffOperator({(i, j): random_element(X, rng, max_terms=2, max_degree=1)
                          for i in range(2) for j in range(2)})
        assert psi_op(a @ b, CH) == psi_op(a, CH) @ psi_op(b, CH)


# -- chart changes -------------------------------------------------------------------

def _affine_change(rng):
    a = rng.choice([1, 2, -1, 3])
    c = rng.choice([1, -1, 2, 3])
    Z = X.gen("z") * a + rng.randint(-2, 2) + X.gen("theta") * random_element(X, rng, parity=1, max_degree=0,
                                                                              exclude=("theta", "z"))
    T = X.gen("theta") * c + random_element(X, rng, parity=1, max_degree=0, exclude=("theta", "z"))
    return CoordinateChange({"z": Z, "theta": T})


def test_transition_cocycle_identity_and_inverse():
    ident = CoordinateChange.identity(X)
    assert transition_cocycle(ident, ident, CH) == DiffOperator.identity(X)
    scaled = CoordinateChange({"z": X.gen("z"), "theta": X.gen("theta") * 3})
    d_ij = transition_cocycle(ident, scaled, CH)
    d_ji = transition_cocycle(scaled, ident, CH)
    # theta -> 3 theta: the two directions are 1 + a theta d_theta with a = -8/9 and a = 8
    assert d_ij == DiffOperator({(0, 0): X.one(), (0, 1): X.gen("theta") * Fraction(-8, 9)})
    assert d_ji == DiffOperator({(0, 0): X.one(), (0, 1): X.gen("theta") * 8})
    assert d_ij @ d_ji == DiffOperator.identity(X)
    assert d_ji @ d_ij == DiffOperator.identity(X)


def test_transition_cocycle_law():
    rng = random.Random(15)
    for _ in range(5):
        ci, cj, ck = (_affine_change(rng) for _ in range(3))
        d_ij = transition_cocycle(ci, cj, CH)
        d_jk = transition_cocycle(cj, ck, CH)
        d_ik = transition_cocycle(ci, ck, CH)
        assert d_ij @ d_jk == d_ik


def test_chart_psi_roundtrip():
    rng = random.Random(16)
    for _ in range(5):
        c = _affine_change(rng)
        for _ in range(4):
            h = random_element(X, rng)
            phi = chart_psi(h, c, CH)
            assert chart_psi_inverse(phi, c, CH) == h
    ident = CoordinateChange.identity(X)
    h = P("z^2 theta + e1 z", X)
    assert chart_psi(h, ident, CH) == psi(h, CH)


def test_lambda_of_change():
    z, th = X.gens("z", "theta")
    assert lambda_of_change(CoordinateChange({"z": z, "theta": th}), CH) == X.one()
    assert lambda_of_change(CoordinateChange({"z": z * 2, "theta": th}), CH) == X.scalar(2)
    rng = random.Random(17)
    for _ in range(10):
        a = rng.choice([1, 2, 3, -2])
        g = rng.choice([1, 2, -3])
        Z = z * a + rng.randint(-3, 3)
        T = th * g + random_element(X, rng, parity=1, max_degree=1, exclude=("theta",))
        change = CoordinateChange({"z": Z, "theta": T})
        r = lambda_of_change(change, CH)
        assert r == X.scalar(a) * X.scalar(1) / g
        assert rho_of_change(change, CH) == P("rho") * CH.from_x(r)


# -- the injected case and the double dual ----------------------------------------------

def test_nu_map():
    assert nu_map(P("theta e1 z", X), CH).is_zero()
    assert nu_map(P("z", X), CH) == P("z + rho theta")
    rng = random.Random(18)
    g = P("2 + e1 e2 + z e1 e3", X)
    eta = g * X.gen("theta")
    for _ in range(15):
        f, h = random_element(X, rng), random_element(X, rng)
        assert nu_map(f * h, CH) == nu_map(f, CH) * nu_map(h, CH)
        assert nu_map_with_generator(f, eta, CH) == nu_map(f, CH)
        assert is_dual_function(nu_map(f, CH), CH)


def test_double_dual_is_identity():
    rng = random.Random(19)
    for _ in range(20):
        h = random_element(X, rng, max_degree=3)
        assert double_dual(h, CH) == h
    v = random_section(X, (1, 1), rng)
    assert isinstance(double_dual(v, CH), ModuleElement)
    assert double_dual(v, CH) == v
