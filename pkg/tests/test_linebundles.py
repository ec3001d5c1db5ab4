import random

import pytest

from supercurves.connection import ConnectionForm, OneForm, flat_check
from supercurves.duality import Superdiagonal, hat_nabla, tau
from supercurves.grassmann import GrassmannError
from supercurves.linebundles import (
    closed_form_sequences_check,
    split_case_roundtrip,
    transform_line_bundle,
)
from supercurves.sampling import random_element, random_matrix

CH = Superdiagonal.over(("a", "b", "e1"))
X, D = CH.x, CH.delta


def _closed_odd_form(rng):
    """A constant odd form plus an exact one."""
    A = random_element(CH.base, rng, parity=0, nilpotent=True, max_degree=0).lift(X)
    B = random_element(CH.base, rng, parity=1, max_degree=0).lift(X)
    f = random_element(X, rng, parity=0, nilpotent=True, max_degree=2)
    return OneForm(A + f.derivative("z"), B + f.derivative("theta"))


def test_constant_form_trivializing_section():
    w = OneForm(X.parse("a b"), X.parse("e1"))
    t = transform_line_bundle(w, CH)
    assert t.phi0 == D.parse("1 - theta e1 - theta rho a b")
    assert t.contraction == D.parse("e1 + rho a b")
    assert flat_check(t.connection).flat


def test_zero_form_gives_unit_section():
    t = transform_line_bundle(OneForm(X.zero(), X.zero()), CH)
    assert t.phi0 == D.one()
    assert t.connection == ConnectionForm.trivial(CH.xhat, (1, 0), t.connection.variables)


def test_non_closed_form_is_rejected():
    with pytest.raises(GrassmannError):
        transform_line_bundle(OneForm(X.parse("z a b"), X.parse("theta e1 a")), CH)


def test_trivializing_section_matches_tau():
    rng = random.Random(3)
    rho = D.gen("rho")
    for _ in range(10):
        w = _closed_odd_form(rng)
        conn = w.connection()
        t = transform_line_bundle(w, CH)
        # phi0 is the part of tau(1) that survives the gauge rho nabla_theta(1)
        omega_theta = CH.from_x(conn.matrix("theta").entries[0][0])
        assert t.phi0 == tau(X.one(), CH, conn) - rho * omega_theta
        assert hat_nabla("theta", t.phi0, CH, conn).is_zero()
        assert t.phi0.scalar_body() == 1
        assert flat_check(t.connection).flat


@pytest.mark.parametrize("odd", [(), ("eps", "del"), ("e1", "e2", "e3")])
def test_exact_sequences(odd):
    degree = 1 if len(odd) < 3 else 0
    reports = closed_form_sequences_check(Superdiagonal.over(odd), degree=degree)
    assert len(reports) == 3
    for rep in reports:
        assert rep.injective, rep.name
        assert rep.exact_middle, rep.name
        assert rep.surjective, rep.name


def test_split_case_roundtrip():
    rng = random.Random(4)
    ch = Superdiagonal.over(("e1", "e2"))
    x0 = ch.base.extend(even=("z",))
    for rank in ((1, 0), (1, 1), (2, 1)):
        c0 = ConnectionForm(x0, rank, {"z": random_matrix(x0, rank, rng)}, ("z",))
        result, direct = split_case_roundtrip(c0, ch)
        assert result == c0
        assert direct == c0
