"""A quick, seeded run of the library's identities, used by ``check-identities``.

Each check returns ``(name, passed, detail)``.  Sample counts are small so
the whole table prints in a few seconds; the test suite runs the same
identities at full size.
"""

from __future__ import annotations

import random
from typing import Callable

from .connection import ConnectionForm, flat_check, parallel_frame
from .duality import (
    Superdiagonal,
    apply_dual_operator,
    hat_nabla,
    is_dual_function,
    psi,
    psi_op,
    tau,
    tau_inverse,
    tilde_d,
)
from .grassmann import AlgebraSignature
from .linebundles import closed_form_sequences_check, split_case_roundtrip
from .sampling import random_element, random_flat_connection, random_matrix, random_section
from .superelliptic import (
    EllipticMultiplier,
    SuperEllipticCurve,
    berezinian_dimension_check,
    dual_curve,
    h0_structure,
    same_delta_class,
    transform_constant_multiplier,
)
from .superfield import DiffOperator, expand_odd
from .supermatrix import ModuleElement

__all__ = ["CHECKS", "run_checks"]


def _expansion(rng: random.Random) -> str:
    sig = AlgebraSignature(odd=("e1", "e2", "th1", "th2", "th3"), even=("z",))
    fiber = ["th1", "th2", "th3"]
    for _ in range(20):
        a = random_element(sig, rng, max_terms=6)
        exp = expand_odd(a, fiber)
        assert exp.reassemble() == a
        for comp in exp.components.values():
            assert all(comp.derivative(f).is_zero() for f in fiber)
    return "20 samples, n = 3"


def _dual_kernel(rng: random.Random) -> str:
    ch = Superdiagonal.over(("eps", "del"))
    assert tilde_d(ch.gen("z") - ch.gen("theta") * ch.gen("rho"), ch).is_zero()
    assert tilde_d(ch.gen("rho"), ch).is_zero()
    for _ in range(20):
        h = random_element(ch.x, rng)
        assert is_dual_function(psi(h, ch), ch)
    return "d~u = d~rho = 0; psi lands in ker d~"


def _tau_intertwining(rng: random.Random) -> str:
    ch = Superdiagonal.over(("e1", "e2", "e3"))
    x = ch.x
    ops = {
        "z": DiffOperator.multiplication(x.gen("z")),
        "theta": DiffOperator.multiplication(x.gen("theta")),
        "d_z": DiffOperator.partial(x, "z"),
        "d_theta": DiffOperator.partial(x, "theta"),
    }
    for rank in ((1, 0), (1, 1)):
        for _ in range(3):
            conn = random_flat_connection(x, rank, rng)
            for _ in range(3):
                h = random_section(x, rank, rng, parity=None)
                th = tau(h, ch, conn)
                assert tilde_d_section_zero(th, ch, conn)
                assert tau_inverse(th, ch) == h
                for op in ops.values():
                    lhs = tau(op.apply(h, lambda n, w: conn.nabla(n, w)), ch, conn)
                    rhs = apply_dual_operator(psi_op(op, ch), th, ch, conn)
                    assert lhs == rhs
    return "ranks 1|0 and 1|1, 3 connections x 3 sections each"


def tilde_d_section_zero(v: ModuleElement, ch: Superdiagonal, conn) -> bool:
    """``(nabla_theta + rho nabla_z) v = 0`` on ``Delta``."""
    return hat_nabla(ch.theta, v, ch, conn).is_zero()


def _parallel_frame(rng: random.Random) -> str:
    sig = AlgebraSignature(odd=("e1", "e2", "e3", "theta"), even=("z",))
    for rank in ((1, 0), (1, 1), (2, 1)):
        for _ in range(3):
            conn = random_flat_connection(sig, rank, rng)
            assert flat_check(conn).flat
            pf = parallel_frame(conn, ["theta"])
            assert pf.fiber_identity_holds(conn)
            assert all(e.scalar_body() == (1 if i == j else 0)
                       for i, row in enumerate(pf.A0.entries) for j, e in enumerate(row))
    return "ranks 1|0, 1|1, 2|1"


def _elliptic(rng: random.Random) -> str:
    base = AlgebraSignature(odd=("eps", "del", "b"), even=("t",))
    curve = SuperEllipticCurve.standard(base)
    d = dual_curve(curve)
    assert (d.tau, d.epsilon, d.delta) == (base.parse("t + eps del"), base.gen("del"), base.gen("eps"))
    assert dual_curve(d) == curve
    m1 = EllipticMultiplier(base.zero(), alpha=base.gen("eps"))
    m2 = EllipticMultiplier(base.zero(), dual_rho_term=-base.gen("del"), on="Xhat")  # rho del
    assert same_delta_class(m1, m2, curve)
    m = EllipticMultiplier(base.parse("2 + eps b"))
    assert transform_constant_multiplier(m, curve).A == m.A
    assert berezinian_dimension_check(curve)["equal"]
    assert h0_structure("X", curve).graded_dim == (6, 6)
    return "dual curve, lift coincidence, constant multipliers, Berezinian count"


def _sequences(rng: random.Random) -> str:
    for odd in (("eps", "del"), ("eps", "del", "e1")):
        for rep in closed_form_sequences_check(Superdiagonal.over(odd), degree=1):
            assert rep.exact, rep.name
    return "three sequences, two base algebras"


def _split_case(rng: random.Random) -> str:
    ch = Superdiagonal.over(("e1", "e2"))
    x0 = ch.base.extend(even=("z",))
    c0 = ConnectionForm(x0, (1, 1), {"z": random_matrix(x0, (1, 1), rng)}, ("z",))
    result, direct = split_case_roundtrip(c0, ch)
    assert result == c0 and direct == c0
    return "rank 1|1"


CHECKS: dict[str, Callable[[random.Random], str]] = {
    "expansion": _expansion,
    "dual-kernel": _dual_kernel,
    "tau-intertwining": _tau_intertwining,
    "parallel-frame": _parallel_frame,
    "elliptic": _elliptic,
    "sequences": _sequences,
    "split-case": _split_case,
}


def run_checks(seed: int = 0, names=None) -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in CHECKS.items():
        if names and name not in names:
            continue
        try:
            detail = fn(random.Random(f"{seed}:{name}"))
            out.append((name, True, detail))
        except AssertionError as exc:
            out.append((name, False, f"failed {exc}".strip()))
    return out
