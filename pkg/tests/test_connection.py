import random

import pytest

from supercurves.connection import (
    ConnectionForm,
    OneForm,
    direct_image_module,
    flat_check,
    parallel_frame,
    pure_gauge,
)
from supercurves.grassmann import AlgebraSignature, GrassmannError
from supercurves.sampling import random_element, random_flat_connection, random_matrix
from supercurves.superfield import CoordinateChange
from supercurves.supermatrix import SuperMatrix

X = AlgebraSignature(odd=("e1", "e2", "e3", "theta"), even=("z",))
X0 = AlgebraSignature(odd=("e1", "e2", "e3"), even=("z",))
LAM = AlgebraSignature(odd=("a", "b", "theta"), even=("z",))


def P(text, sig=X):
    return sig.parse(text)


def test_zero_connection_is_flat_and_frame_is_identity():
    c = ConnectionForm.trivial(X, (1, 1))
    assert flat_check(c).flat
    assert parallel_frame(c, ["theta"]).A0 == SuperMatrix.identity(X, (1, 1))
    image = direct_image_module(c, ["theta"], X0)
    assert image.connection == ConnectionForm.trivial(X0, (1, 1), ("z",))


def test_constant_line_connection():
    # omega = dz A + dtheta B with A even, B odd constants
    w = OneForm(P("a b", LAM), P("b", LAM))
    c = w.connection()
    assert flat_check(c).flat
    assert parallel_frame(c, ["theta"]).A0.entries[0][0] == P("1 - theta b", LAM)


def test_odd_connection_form_required_for_line_bundles():
    with pytest.raises(GrassmannError):
        OneForm(P("a", LAM), P("1", LAM)).connection()


def test_non_flat_example_residual():
    sig = AlgebraSignature(odd=("theta",), even=("z",))
    one, zero = sig.one(), sig.zero()
    N = SuperMatrix([[zero, one], [one, zero]], (1, 1), 1)
    c = ConnectionForm(sig, (1, 1), {"theta": N})
    report = flat_check(c)
    assert not report.flat
    # nabla_theta^2 = N^2 = identity
    assert report.residual == {("theta", "theta"): SuperMatrix.identity(sig, (1, 1))}


def test_parallel_frame_rejects_non_flat_fiber():
    sig = AlgebraSignature(odd=("theta",), even=("z",))
    one, zero = sig.one(), sig.zero()
    N = SuperMatrix([[zero, one], [one, zero]], (1, 1), 1)
    with pytest.raises(GrassmannError):
        parallel_frame(ConnectionForm(sig, (1, 1), {"theta": N}), ["theta"])


def test_connection_parity_is_enforced():
    with pytest.raises(GrassmannError):
        ConnectionForm.line(X, {"theta": P("e1 e2")})


@pytest.mark.parametrize("rank", [(1, 0), (1, 1), (2, 1)])
def test_pure_gauge_is_flat(rank):
    rng = random.Random(hash(rank) & 0xffff)
    g = SuperMatrix.identity(X, rank) + random_matrix(X, rank, rng, nilpotent=True)
    assert flat_check(pure_gauge(g)).flat


@pytest.mark.parametrize("rank", [(1, 0), (1, 1), (2, 1)])
def test_parallel_frame_properties(rank):
    rng = random.Random(sum(rank))
    for _ in range(5):
        c = random_flat_connection(X, rank, rng)
        frame = parallel_frame(c, ["theta"])
        assert frame.fiber_identity_holds(c)
        for col in frame.A0.columns():
            assert c.nabla("theta", col).is_zero()
        soul = frame.A0 - SuperMatrix.identity(X, rank)
        assert all(e.scalar_body() == 0 for row in soul.entries for e in row)
        image = direct_image_module(c, ["theta"], X0)
        assert image.rank == rank
        assert flat_check(image.connection).flat


def test_pullback_pushforward_roundtrip_up_to_frame():
    rng = random.Random(11)
    for rank in ((1, 0), (1, 1), (2, 1)):
        base = ConnectionForm(X0, rank, {"z": random_matrix(X0, rank, rng)}, ("z",))
        pulled = base.lift(X, ("theta",))
        assert direct_image_module(pulled, ["theta"], X0).connection == base
        g = SuperMatrix.identity(X, rank) + random_matrix(X, rank, rng, nilpotent=True)
        gauged = pulled.gauge(g)
        image = direct_image_module(gauged, ["theta"], X0)
        # A0 = g C with C theta-free; the push-forward is base in the frame C
        C = g.inverse() @ image.frame.A0
        assert not any(e.involves("theta") for row in C.entries for e in row)
        C0 = C.map(lambda f: f.restrict(X0))
        assert image.connection == base.gauge(C0.inverse())


def test_gauge_composes():
    rng = random.Random(5)
    c = random_flat_connection(X, (1, 1), rng)
    g = SuperMatrix.identity(X, (1, 1)) + random_matrix(X, (1, 1), rng, nilpotent=True)
    h = SuperMatrix.identity(X, (1, 1)) + random_matrix(X, (1, 1), rng, nilpotent=True)
    assert c.gauge(g).gauge(h) == c.gauge(h @ g)
    assert c.gauge(g).gauge(g.inverse()) == c


def test_change_of_coordinates_preserves_flatness():
    rng = random.Random(8)
    c = random_flat_connection(X, (1, 1), rng)
    images = {"z": P("z + theta e1"), "theta": P("2 theta + e2")}
    new = c.change_coordinates(images, X, ("z", "theta"))
    assert flat_check(new).flat


def test_one_form_exterior_derivative():
    w = OneForm(P("e1 e2 z"), P("theta e1 + z e3"))
    c1, c2 = w.exterior_derivative()
    assert c1 == P("e3") - P("e1 e2 z").derivative("theta")
    assert c2 == P("e1")
    assert not w.is_closed()
    assert OneForm(P("e1 e2"), P("e3")).is_closed()


def test_exact_forms_and_pullback():
    rng = random.Random(2)
    change = CoordinateChange({"z": P("z + 3 + theta e1"), "theta": P("theta + e2")})
    for _ in range(20):
        f = random_element(X, rng, max_degree=3)
        w = OneForm.exact(f)
        assert w.is_closed()
        p = w.pullback(change)
        q = OneForm.exact(change(f))
        assert (p.a, p.b) == (q.a, q.b)
