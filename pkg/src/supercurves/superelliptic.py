"""Super elliptic curves: the quotient of the (1|1) plane by two commuting shifts.

``T(z, theta) = (z + 1, theta)`` and ``S(z, theta) = (z + t + theta eps, theta + del)``
with ``eps``, ``del`` odd constants and ``t`` an even constant (by default the
formal symbol ``t``).  Cohomology is computed at the constant Fourier mode;
all higher modes are exact, so nothing else contributes.

Degree-zero line bundles are described by their ``S``-multiplier
``exp(exponent)`` with the ``T``-multiplier normalized to 1.  Exponents are
kept as Grassmann elements and never exponentiated when they have a body;
integer lattice contributions live in a separate slot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Sequence

from .connection import OneForm, parallel_frame
from .duality import Superdiagonal
from .grassmann import (
    AlgebraSignature,
    GrassmannElement,
    GrassmannError,
    LambdaModuleDescription,
    format_element,
    glog,
    ginv,
    module_quotient,
    solve_linear,
    submodule_contains,
)
from .linebundles import transform_line_bundle

__all__ = [
    "EllipticMultiplier",
    "EllipticOneForm",
    "SuperEllipticCurve",
    "admits_flat_connection",
    "berezinian_dimension_check",
    "classify_curve",
    "closed_invariant_one_forms",
    "coboundary_span",
    "direct_image_projected",
    "dual_curve",
    "h0_structure",
    "h1_structure",
    "is_trivial_bundle",
    "lift_to_delta",
    "reduce_by_lattice",
    "same_delta_class",
    "transform_constant_multiplier",
    "transform_pullback_case",
    "transform_trivial_with_connection",
]

SPACES = ("X", "Xhat", "Delta")


@dataclass(frozen=True)
class SuperEllipticCurve:
    """Curve data ``(t, eps, del)`` over a base algebra ``Λ``.

    ``tau`` is an even element of ``Λ`` (formal even symbols allowed);
    ``epsilon`` and ``delta`` are odd elements without body.
    """

    tau: GrassmannElement
    epsilon: GrassmannElement
    delta: GrassmannElement

    def __post_init__(self):
        sig = self.tau.signature
        if self.epsilon.signature != sig or self.delta.signature != sig:
            raise GrassmannError("curve parameters live in different algebras")
        if not self.tau.is_even():
            raise GrassmannError(f"modulus {self.tau} must be even")
        for name, x in (("epsilon", self.epsilon), ("delta", self.delta)):
            if not (x.is_zero() or x.is_odd()):
                raise GrassmannError(f"{name} = {x} must be odd with zero body")
        S, T = self.S(), self.T()
        f = self.chart.x.parse("z^2 theta + z")
        if S(T(f)) != T(S(f)) or S(T(self.chart.x.gen("theta"))) != T(S(self.chart.x.gen("theta"))):
            raise GrassmannError("the generators S and T do not commute")

    @classmethod
    def standard(cls, base: AlgebraSignature, epsilon: str = "eps", delta: str = "del",
                 tau: str = "t") -> "SuperEllipticCurve":
        """The curve whose parameters are generators of ``base`` (``"0"`` allowed)."""
        return cls(base.parse(tau), base.parse(epsilon), base.parse(delta))

    @property
    def base(self) -> AlgebraSignature:
        return self.tau.signature

    @property
    def chart(self) -> Superdiagonal:
        return Superdiagonal(self.base)

    # generators ---------------------------------------------------------

    def _change(self, sig: AlgebraSignature, images: dict):
        from .superfield import CoordinateChange
        return CoordinateChange({k: v.lift(sig) if v.signature != sig else v for k, v in images.items()}, sig)

    def S(self):
        x = self.chart.x
        z, th = x.gens("z", "theta")
        return self._change(x, {"z": z + self.tau.lift(x) + th * self.epsilon.lift(x),
                                "theta": th + self.delta.lift(x)})

    def T(self):
        x = self.chart.x
        return self._change(x, {"z": x.gen("z") + 1})

    def S_hat(self):
        """``S`` transported to ``(u, rho)`` through the superdiagonal."""
        ch = self.chart
        sd = self.S_delta()
        coords = ch.coordinates()
        u_img = coords.from_dual(ch.delta_dual.gen("u"))
        images = {}
        for name, expr in (("u", u_img), ("rho", ch.delta.gen("rho"))):
            images[name] = ch.to_xhat(sd(expr))
        return self._change(ch.xhat, images)

    def S_delta(self):
        d = self.chart.delta
        z, th, rh = d.gens("z", "theta", "rho")
        return self._change(d, {"z": z + self.tau.lift(d) + th * self.epsilon.lift(d),
                                "theta": th + self.delta.lift(d),
                                "rho": rh + self.epsilon.lift(d)})

    def generator(self, space: str):
        return {"X": self.S, "Xhat": self.S_hat, "Delta": self.S_delta}[space]()

    def __str__(self):
        return f"(t={format_element(self.tau)}, eps={format_element(self.epsilon)}, del={format_element(self.delta)})"


def dual_curve(curve: SuperEllipticCurve) -> SuperEllipticCurve:
    """Read ``(t', eps', del')`` off ``S^(u, rho) = (u + t' + rho eps', rho + del')``."""
    ch = curve.chart
    sh = curve.S_hat()
    xh = ch.xhat
    u, rho = xh.gens("u", "rho")
    shift = sh.image("u") - u
    const, lin = shift.coefficient("rho")
    new_delta = sh.image("rho") - rho
    for x in (const, lin, new_delta):
        if x.involves("u") or x.involves("rho"):
            raise GrassmannError("dual generator is not of super elliptic form")
    base = curve.base
    return SuperEllipticCurve(const.restrict(base), lin.restrict(base), new_delta.restrict(base))


def classify_curve(curve: SuperEllipticCurve) -> dict[str, bool]:
    e0, d0 = curve.epsilon.is_zero(), curve.delta.is_zero()
    return {
        "projected": e0,
        "injected": d0,
        "self_dual": curve.epsilon == curve.delta,
        "split": e0 and d0,
    }


# --------------------------------------------------------------------------
# group cohomology at the constant mode


def _space_chart(curve: SuperEllipticCurve, space: str):
    ch = curve.chart
    if space == "X":
        return ch.x, ("theta",)
    if space == "Xhat":
        return ch.xhat, ("rho",)
    if space == "Delta":
        return ch.delta, ("theta", "rho")
    raise GrassmannError(f"unknown space {space!r}; expected one of {SPACES}")


def _slot_keys(n: int) -> list[tuple[int, ...]]:
    """Bit patterns of the odd chart monomials: ``1, x1, x2, x1 x2, ...``."""
    return sorted(itertools.product((0, 1), repeat=n), key=lambda k: (sum(k), [i for i, b in enumerate(k) if b]))


def _slot_monomials(sig: AlgebraSignature, odd: Sequence[str]) -> list[GrassmannElement]:
    out = []
    for k in _slot_keys(len(odd)):
        m = sig.one()
        for name, bit in zip(odd, k):
            if bit:
                m = m * sig.gen(name)
        out.append(m)
    return out


def _split_slots(f: GrassmannElement, odd: Sequence[str], base: AlgebraSignature) -> list[GrassmannElement]:
    """Coefficients ``c_m`` with ``f = sum_m m c_m`` over the slot monomials ``m``."""
    parts = {(): f}
    for name in odd:
        new = {}
        for key, g in parts.items():
            a, b = g.coefficient(name)
            new[key + (0,)] = a
            new[key + (1,)] = b
        parts = new
    return [parts[k].restrict(base) for k in _slot_keys(len(odd))]


def _slot_shift(odd: Sequence[str]) -> tuple[int, ...]:
    return tuple(sum(k) % 2 for k in _slot_keys(len(odd)))


def _slot_names(odd: Sequence[str]) -> tuple[str, ...]:
    return tuple(" ".join(o for o, b in zip(odd, k) if b) or "1" for k in _slot_keys(len(odd)))


def _coboundary_columns(curve: SuperEllipticCurve, space: str):
    """Column ``k``: slots of ``m_k - m_k o S`` for the ``k``-th slot monomial ``m_k``."""
    sig, odd = _space_chart(curve, space)
    S = curve.generator(space)
    monos = _slot_monomials(sig, odd)
    return [_split_slots(m - S(m), odd, curve.base) for m in monos], odd


def coboundary_span(curve: SuperEllipticCurve, space: str) -> list[tuple[GrassmannElement, ...]]:
    """Λ-generators of the trivial constant cocycles ``F - F o S``."""
    cols, _ = _coboundary_columns(curve, space)
    return [tuple(c) for c in cols]


def h0_structure(space: str, curve: SuperEllipticCurve, degree: int | None = None) -> LambdaModuleDescription:
    """Constant functions invariant under ``S`` (``T`` acts trivially on constants)."""
    cols, odd = _coboundary_columns(curve, space)
    n = len(cols)
    system = [[cols[k][i] for k in range(n)] for i in range(n)]
    rhs = [curve.base.zero()] * n
    sol = solve_linear(system, rhs, curve.base, degree=degree,
                       slot_names=_slot_names(odd), parity_shift=_slot_shift(odd))
    return sol.kernel


def h1_structure(space: str, curve: SuperEllipticCurve, degree: int | None = None) -> LambdaModuleDescription:
    """Constant cocycles for ``S`` modulo ``F - F o S``."""
    cols, odd = _coboundary_columns(curve, space)
    return module_quotient([tuple(c) for c in cols], curve.base, 2 ** len(odd),
                           degree or 0, slot_names=_slot_names(odd),
                           parity_shift=_slot_shift(odd))


def delta_trivial_generators(curve: SuperEllipticCurve) -> list[tuple[GrassmannElement, ...]]:
    """``del Λ``, ``eps Λ`` in the constant slot and ``theta eps - rho del`` (slots A, alpha, beta, B)."""
    z = curve.base.zero()
    return [(curve.delta, z, z, z), (curve.epsilon, z, z, z), (z, curve.epsilon, -curve.delta, z)]


# --------------------------------------------------------------------------
# multipliers


@dataclass(frozen=True)
class EllipticMultiplier:
    """``S``-multiplier ``exp(A + theta alpha + rho_coeff rho)`` plus a lattice part.

    ``on`` names the space: ``"X"`` uses ``theta``, ``"Xhat"`` uses ``rho``
    (through ``dual_rho_term``), ``"X0"`` has neither.  ``lattice = (m, n)``
    stands for the integral class with ``S -> m``, ``T -> -n``.
    """

    A: GrassmannElement
    alpha: GrassmannElement | None = None
    dual_rho_term: GrassmannElement | None = None
    lattice: tuple[int, int] = (0, 0)
    on: str = "X"

    def __post_init__(self):
        sig = self.A.signature
        zero = sig.zero()
        object.__setattr__(self, "alpha", self.alpha if self.alpha is not None else zero)
        object.__setattr__(self, "dual_rho_term", self.dual_rho_term if self.dual_rho_term is not None else zero)
        object.__setattr__(self, "lattice", tuple(self.lattice))
        if not (self.A.is_zero() or self.A.is_even()):
            raise GrassmannError(f"A = {self.A} must be even")
        for name, x in (("alpha", self.alpha), ("dual_rho_term", self.dual_rho_term)):
            if not (x.is_zero() or x.is_odd()):
                raise GrassmannError(f"{name} = {x} must be odd")
        if self.on not in ("X", "Xhat", "X0"):
            raise GrassmannError(f"unknown space {self.on!r}")
        if self.on != "X" and not self.alpha.is_zero():
            raise GrassmannError("a theta term only makes sense on X")
        if self.on != "Xhat" and not self.dual_rho_term.is_zero():
            raise GrassmannError("a rho term only makes sense on Xhat")

    @property
    def signature(self) -> AlgebraSignature:
        return self.A.signature

    def exponent(self, chart: Superdiagonal | None = None) -> GrassmannElement:
        """The exponent as a function on the superdiagonal chart."""
        chart = chart or Superdiagonal(self.signature)
        d = chart.delta
        th, rh = d.gens("theta", "rho")
        return self.A.lift(d) + th * self.alpha.lift(d) + self.dual_rho_term.lift(d) * rh

    def describe(self) -> dict:
        return {
            "space": self.on,
            "lattice": list(self.lattice),
            "A": format_element(self.A),
            "alpha": format_element(self.alpha),
            "dual_rho_term": format_element(self.dual_rho_term),
            "exponent": format_element(self.exponent()),
        }

    def is_zero(self) -> bool:
        return self.lattice == (0, 0) and self.A.is_zero() and self.alpha.is_zero() and self.dual_rho_term.is_zero()


def _params_on(curve: SuperEllipticCurve, on: str) -> SuperEllipticCurve:
    return dual_curve(curve) if on == "Xhat" else curve


def reduce_by_lattice(m: EllipticMultiplier, curve: SuperEllipticCurve) -> EllipticMultiplier:
    """Move ``(m, n)`` into the exponent: ``S -> (m + n t) + theta n eps``.

    On ``Xhat`` the dual parameters are used and the odd part multiplies
    ``rho``; on ``X0`` only ``m + n t`` appears.
    """
    k, n = m.lattice
    if (k, n) == (0, 0):
        return m
    c = _params_on(curve, m.on)
    A = m.A + k + c.tau * n
    if m.on == "X":
        return replace(m, A=A, alpha=m.alpha + c.epsilon * n, lattice=(0, 0))
    if m.on == "Xhat":
        # rho n eps' = -(n eps') rho
        return replace(m, A=A, dual_rho_term=m.dual_rho_term - c.epsilon * n, lattice=(0, 0))
    return replace(m, A=A, lattice=(0, 0))


def _odd_part(m: EllipticMultiplier) -> GrassmannElement:
    return m.alpha if m.on == "X" else m.dual_rho_term


def is_trivial_bundle(m: EllipticMultiplier, curve: SuperEllipticCurve) -> bool:
    """``alpha = 0`` and ``A`` in ``del Λ`` (``eps Λ`` on ``Xhat``, ``0`` on ``X0``)."""
    if m.lattice != (0, 0):
        raise GrassmannError("reduce the lattice part with reduce_by_lattice first")
    if m.on == "X0":
        # constants are S-invariant on X0, so no nonzero coboundaries
        return m.A.is_zero()
    c = _params_on(curve, m.on)
    if not _odd_part(m).is_zero():
        return False
    return submodule_contains([m.A], [c.delta], curve.base, max(m.A.degree(), 0))


def admits_flat_connection(m: EllipticMultiplier, curve: SuperEllipticCurve) -> bool:
    """The odd part of the reduced exponent lies in ``eps Λ`` (``del Λ`` on ``Xhat``)."""
    r = reduce_by_lattice(m, curve)
    c = _params_on(curve, m.on)
    odd = _odd_part(r)
    if m.on == "X0":
        return True
    return submodule_contains([odd], [c.epsilon], curve.base, max(odd.degree(), 0))


@dataclass(frozen=True)
class EllipticOneForm:
    """Constant one-form ``dz A + dtheta B``; odd overall, so ``A`` even and ``B`` odd."""

    A: GrassmannElement
    B: GrassmannElement

    def __post_init__(self):
        if not (self.A.is_zero() or self.A.is_even()):
            raise GrassmannError(f"A = {self.A} must be even (dz is odd and the form is odd)")
        if not (self.B.is_zero() or self.B.is_odd()):
            raise GrassmannError(f"B = {self.B} must be odd")

    def on_chart(self, curve: SuperEllipticCurve) -> OneForm:
        x = curve.chart.x
        return OneForm(self.A.lift(x), self.B.lift(x))

    def is_invariant(self, curve: SuperEllipticCurve) -> bool:
        w = self.on_chart(curve)
        p = w.pullback(curve.S())
        return p.a == w.a and p.b == w.b


def _ratio_exponent(phi0: GrassmannElement, change) -> GrassmannElement:
    return glog(change(phi0) * ginv(phi0))


def transform_trivial_with_connection(omega: EllipticOneForm, curve: SuperEllipticCurve) -> EllipticMultiplier:
    """Multiplier of the transform of ``(O_X, d + omega)`` on ``Xhat``: ``(phi0 o S) / phi0``."""
    if not (omega.A * curve.epsilon).is_zero():
        raise GrassmannError("the one-form is not invariant: A eps != 0")
    ch = curve.chart
    t = transform_line_bundle(omega.on_chart(curve), ch)
    exponent = ch.to_xhat(_ratio_exponent(t.phi0, curve.S_delta()))
    const, lin = exponent.coefficient("rho")
    base = curve.base
    # rho lin = lin^inv rho
    return EllipticMultiplier(const.restrict(base), dual_rho_term=lin.involution().restrict(base), on="Xhat")


def transform_pullback_case(omega: EllipticOneForm, curve: SuperEllipticCurve) -> EllipticMultiplier:
    """The transform of the pullback of ``(O_X0, d + dz A)`` for a projected curve."""
    if not curve.epsilon.is_zero():
        raise GrassmannError("the pullback case needs a projected curve (eps = 0)")
    if not omega.B.is_zero():
        raise GrassmannError("a one-form pulled back from X0 has B = 0")
    return transform_trivial_with_connection(omega, curve)


def direct_image_projected(omega: EllipticOneForm, curve: SuperEllipticCurve) -> EllipticMultiplier:
    """Multiplier on ``X0`` of the push-forward of ``(O_X, d + omega)`` along theta."""
    if not curve.epsilon.is_zero():
        raise GrassmannError("direct image to X0 needs a projected curve (eps = 0)")
    conn = omega.on_chart(curve).connection()
    phi0 = parallel_frame(conn, ["theta"]).A0.entries[0][0]
    exponent = _ratio_exponent(phi0, curve.S())
    if exponent.involves("theta") or exponent.involves("z"):
        raise GrassmannError("direct image multiplier is not constant on X0")
    return EllipticMultiplier(exponent.restrict(curve.base), on="X0")


def transform_constant_multiplier(m: EllipticMultiplier, curve: SuperEllipticCurve) -> EllipticMultiplier:
    """Transform a bundle with constant transition function ``exp(A)`` and ``nabla phi = 0``.

    The local trivialization goes to ``tau(phi) = phi``, so the new
    multiplier is ``exp(A)`` times the change of ``tau(phi)`` under ``S``.
    """
    from .duality import tau
    if m.on != "X" or not m.alpha.is_zero() or m.lattice != (0, 0):
        raise GrassmannError("expected a constant multiplier exp(A) on X")
    ch = curve.chart
    phi = tau(ch.x.one(), ch)
    extra = ch.to_xhat(_ratio_exponent(phi, curve.S_delta()))
    total = m.A.lift(ch.xhat) + extra
    const, lin = total.coefficient("rho")
    return EllipticMultiplier(const.restrict(curve.base), dual_rho_term=lin.involution().restrict(curve.base),
                              on="Xhat")


# --------------------------------------------------------------------------
# the superdiagonal


def lift_to_delta(m: EllipticMultiplier, curve: SuperEllipticCurve) -> tuple[GrassmannElement, ...]:
    """Constant ``Delta``-cocycle ``(A, alpha, beta, B)`` of the pulled-back multiplier."""
    r = reduce_by_lattice(m, curve)
    return tuple(_split_slots(r.exponent(curve.chart), ("theta", "rho"), curve.base))


def same_delta_class(m1: EllipticMultiplier, m2: EllipticMultiplier, curve: SuperEllipticCurve) -> bool:
    """Equal classes modulo ``del Λ``, ``eps Λ`` and multiples of ``theta eps - rho del``."""
    a, b = lift_to_delta(m1, curve), lift_to_delta(m2, curve)
    diff = [x - y for x, y in zip(a, b)]
    deg = max([x.degree() for x in diff] + [0])
    return submodule_contains(diff, delta_trivial_generators(curve), curve.base, deg)


def is_delta_trivial(m: EllipticMultiplier, curve: SuperEllipticCurve) -> bool:
    v = lift_to_delta(m, curve)
    deg = max([x.degree() for x in v] + [0])
    return submodule_contains(v, delta_trivial_generators(curve), curve.base, deg)


# --------------------------------------------------------------------------
# one-forms and the Berezinian dimension check


@dataclass
class OneFormSpace:
    description: LambdaModuleDescription
    counterexample_closed: bool
    counterexample_invariant: bool
    notes: dict = field(default_factory=dict)


def closed_invariant_one_forms(curve: SuperEllipticCurve, degree: int | None = None) -> OneFormSpace:
    """Constant forms ``dz A + dtheta B`` invariant under ``S`` (constants are closed)."""
    x = curve.chart.x
    S = curve.S()
    cols = []
    for w in (OneForm(x.one(), x.zero()), OneForm(x.zero(), x.one())):
        p = w.pullback(S)
        cols.append(_split_slots(p.a - w.a, ("theta",), curve.base) + _split_slots(p.b - w.b, ("theta",), curve.base))
    n_eq = len(cols[0])
    system = [[cols[k][i] for k in range(2)] for i in range(n_eq)]
    sol = solve_linear(system, [curve.base.zero()] * n_eq, curve.base, degree=degree,
                       slot_names=("A", "B"), parity_shift=(1, 0))
    th = x.gen("theta")
    bad = OneForm(curve.delta.lift(x), th * curve.epsilon.lift(x))
    pb = bad.pullback(S)
    return OneFormSpace(sol.kernel, bad.is_closed(), pb.a == bad.a and pb.b == bad.b)


def berezinian_dimension_check(curve: SuperEllipticCurve) -> dict:
    forms = closed_invariant_one_forms(curve).description
    h0 = h0_structure("Xhat", curve)
    return {
        "closed_one_forms": f"{forms.graded_dim[0]}|{forms.graded_dim[1]}",
        "h0_xhat": f"{h0.graded_dim[0]}|{h0.graded_dim[1]}",
        "equal": forms.graded_dim == h0.graded_dim,
    }
