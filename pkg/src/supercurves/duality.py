"""The superdiagonal chart and the duality transform.

Coordinates:

* ``X``: ``(z, theta)``;
* the superdiagonal ``Delta``: ``(z, theta, rho)``, or ``(u, theta, rho)``
  with ``u = z - theta rho``;
* the dual curve ``Xhat``: ``(u, rho)``.

The line bundle ``O_Delta(1)`` is trivialized by ``dtheta``, so the odd
derivation ``d~`` is returned as its ``dtheta`` coefficient
``(rho d_z + d_theta) f``, and ``dz = dtheta rho``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .connection import ConnectionForm
from .grassmann import AlgebraSignature, GrassmannElement, GrassmannError, ginv
from .superfield import CoordinateChange, DiffOperator, fit_operator
from .supermatrix import ModuleElement, SuperMatrix

__all__ = [
    "DeltaFunction",
    "DualCoordinateMap",
    "Superdiagonal",
    "apply_dual_operator",
    "chart_psi",
    "chart_psi_inverse",
    "double_dual",
    "dual_connection_chart",
    "dual_normal_form",
    "hat_nabla",
    "is_dual_function",
    "jacobian",
    "lambda_of_change",
    "nu_map",
    "nu_map_with_generator",
    "psi",
    "psi_hat",
    "psi_op",
    "rho_of_change",
    "tau",
    "tau_inverse",
    "tilde_d",
    "transition_cocycle",
]


@dataclass(frozen=True)
class Superdiagonal:
    """Signatures of the charts on ``X``, ``Delta`` and ``Xhat`` over a base algebra."""

    base: AlgebraSignature
    z: str = "z"
    theta: str = "theta"
    rho: str = "rho"
    u: str = "u"

    @classmethod
    def over(cls, odd: Sequence[str] = (), even: Sequence[str] = ()) -> "Superdiagonal":
        return cls(AlgebraSignature(tuple(odd), tuple(even)))

    @property
    def x(self) -> AlgebraSignature:
        return self.base.extend(odd=(self.theta,), even=(self.z,))

    @property
    def delta(self) -> AlgebraSignature:
        return self.base.extend(odd=(self.theta, self.rho), even=(self.z,))

    @property
    def delta_dual(self) -> AlgebraSignature:
        """``Delta`` in ``(u, theta, rho)`` coordinates."""
        return self.base.extend(odd=(self.theta, self.rho), even=(self.u,))

    @property
    def xhat(self) -> AlgebraSignature:
        return self.base.extend(odd=(self.rho,), even=(self.u,))

    def coordinates(self) -> "DualCoordinateMap":
        return DualCoordinateMap(self)

    # moving functions between the charts

    def from_x(self, f):
        """Pullback from ``X`` to ``Delta``."""
        return _map(f, lambda c: c.lift(self.delta))

    def from_xhat(self, f):
        """Pullback from ``Xhat`` to ``Delta``: ``u -> z - theta rho``."""
        d = self.delta
        th, rh, z = d.gens(self.theta, self.rho, self.z)
        images = {self.u: z - th * rh, self.rho: rh}
        return _map(f, lambda c: c.substitute(images, d))

    def to_x(self, f):
        """Restrict a ``rho``-free function on ``Delta`` to ``X``."""
        return _map(f, lambda c: c.restrict(self.x))

    def to_xhat(self, f):
        """Express a dual function on ``Delta`` as a function of ``(u, rho)``."""
        g = self.coordinates().to_dual(f)
        return _map(g, lambda c: c.restrict(self.xhat))

    def gen(self, name: str) -> GrassmannElement:
        return self.delta.gen(name)


def _map(f, fn: Callable[[GrassmannElement], GrassmannElement]):
    if isinstance(f, ModuleElement):
        return f.map(fn)
    return fn(f)


@dataclass(frozen=True)
class DualCoordinateMap:
    """``(z, theta, rho) <-> (u, theta, rho)`` with ``u = z - theta rho``."""

    chart: Superdiagonal

    @property
    def forward(self) -> dict[str, GrassmannElement]:
        """Images of ``z``, ``theta``, ``rho`` in dual coordinates."""
        c = self.chart
        d = c.delta_dual
        u, th, rh = d.gens(c.u, c.theta, c.rho)
        return {c.z: u + th * rh, c.theta: th, c.rho: rh}

    @property
    def backward(self) -> dict[str, GrassmannElement]:
        """Images of ``u``, ``theta``, ``rho`` in the original coordinates."""
        c = self.chart
        d = c.delta
        z, th, rh = d.gens(c.z, c.theta, c.rho)
        return {c.u: z - th * rh, c.theta: th, c.rho: rh}

    def to_dual(self, f):
        return _map(f, lambda x: x.substitute(self.forward, self.chart.delta_dual))

    def from_dual(self, f):
        return _map(f, lambda x: x.substitute(self.backward, self.chart.delta))


@dataclass(frozen=True)
class DeltaFunction:
    """``A + theta alpha + rho beta + theta rho B`` with theta- and rho-free parts."""

    A: GrassmannElement
    alpha: GrassmannElement
    beta: GrassmannElement
    B: GrassmannElement
    chart: Superdiagonal

    @classmethod
    def from_element(cls, f: GrassmannElement, chart: Superdiagonal) -> "DeltaFunction":
        f0, f1 = f.coefficient(chart.theta)
        A, beta = f0.coefficient(chart.rho)
        alpha, B = f1.coefficient(chart.rho)
        return cls(A, alpha, beta, B, chart)

    def to_element(self) -> GrassmannElement:
        th, rh = self.chart.gen(self.chart.theta), self.chart.gen(self.chart.rho)
        return self.A + th * self.alpha + rh * self.beta + th * rh * self.B

    def parity(self) -> int | None:
        return self.to_element().parity()

    def in_dual_coordinates(self) -> GrassmannElement:
        return self.chart.coordinates().to_dual(self.to_element())


# --------------------------------------------------------------------------
# d~ and its kernel


def tilde_d(f, chart: Superdiagonal):
    """``(rho d_z + d_theta) f``: the ``dtheta`` coefficient of ``d f``."""
    rho = chart.gen(chart.rho)
    if isinstance(f, ModuleElement):
        return f.derivative(chart.z).lmul(rho) + f.derivative(chart.theta)
    return rho * f.derivative(chart.z) + f.derivative(chart.theta)


def is_dual_function(f: GrassmannElement, chart: Superdiagonal) -> bool:
    return tilde_d(f, chart).is_zero()


def dual_normal_form(f: GrassmannElement, chart: Superdiagonal):
    """``(P0, Q0)`` with ``f = P0 + rho (Q0 + theta d_z P0)``, or None.

    ``P0`` and ``Q0`` are free of theta and rho.
    """
    d = DeltaFunction.from_element(f, chart)
    if not d.alpha.is_zero():
        return None
    if d.B != -d.A.derivative(chart.z):
        return None
    return d.A, d.beta


# --------------------------------------------------------------------------
# Psi, tau and the hat derivatives


def psi(h, chart: Superdiagonal):
    """Ring map ``O_X -> ker d~``: ``z -> z - theta rho``, ``theta -> rho``."""
    d = chart.delta
    z, th, rh = d.gens(chart.z, chart.theta, chart.rho)
    images = {chart.z: z - th * rh, chart.theta: rh}
    return _map(h, lambda c: c.substitute(images, d))


def psi_hat(h, chart: Superdiagonal):
    """The same map with values written on ``Xhat``: ``z -> u``, ``theta -> rho``."""
    s = chart.xhat
    images = {chart.z: s.gen(chart.u), chart.theta: s.gen(chart.rho)}
    return _map(h, lambda c: c.substitute(images, s))


def _delta_connection(conn: ConnectionForm | None, chart: Superdiagonal, rank) -> ConnectionForm:
    if conn is None:
        return ConnectionForm.trivial(chart.delta, rank, (chart.z, chart.theta, chart.rho))
    if conn.signature == chart.delta:
        return conn
    return conn.lift(chart.delta, (chart.rho,))


def _as_module(h):
    if isinstance(h, ModuleElement):
        return h, True
    return ModuleElement((h,), (0,)), False


def hat_nabla(name: str, v, chart: Superdiagonal, conn: ConnectionForm | None = None):
    """Covariant derivative along the ``(u, rho, theta)`` coordinate vector fields.

    ``conn`` is a connection on ``X`` (or already on ``Delta``); ``v`` a
    section on ``Delta``.  With ``D = d_theta^ = d_theta + rho d_z``:
    ``nabla^_u = nabla_z``, ``nabla^_rho = nabla_rho - theta nabla_z``,
    ``nabla^_theta = nabla_theta + rho nabla_z``.
    """
    v, was_module = _as_module(v)
    c = _delta_connection(conn, chart, v.rank)
    th, rh = chart.gen(chart.theta), chart.gen(chart.rho)
    nz = c.nabla(chart.z, v)
    if name == chart.u:
        out = nz
    elif name == chart.rho:
        out = c.nabla(chart.rho, v) - nz.lmul(th)
    elif name == chart.theta:
        out = c.nabla(chart.theta, v) + nz.lmul(rh)
    else:
        raise GrassmannError(f"{name} is not a dual coordinate")
    return out if was_module else out[0]


def dual_connection_chart(conn: ConnectionForm | None, chart: Superdiagonal, rank=(1, 0)) -> ConnectionForm:
    """The pulled-back connection on ``Delta`` written in ``(u, theta, rho)`` coordinates."""
    c = _delta_connection(conn, chart, rank)
    return c.change_coordinates(chart.coordinates().forward, chart.delta_dual,
                                (chart.u, chart.theta, chart.rho))


def tau(h, chart: Superdiagonal, conn: ConnectionForm | None = None):
    """``(1 - theta nabla_theta + rho (theta nabla_z + nabla_theta)) h``.

    ``h`` is a section on ``X``; the result is a section on ``Delta`` killed
    by ``nabla_theta + rho nabla_z``.
    """
    v, was_module = _as_module(h)
    c = conn if conn is not None else ConnectionForm.trivial(chart.x, v.rank)
    th, rh = chart.gen(chart.theta), chart.gen(chart.rho)
    nt = chart.from_x(c.nabla(chart.theta, v))
    nz = chart.from_x(c.nabla(chart.z, v))
    lv = chart.from_x(v)
    out = lv - nt.lmul(th) + (nz.lmul(th) + nt).lmul(rh)
    return out if was_module else out[0]


def tau_inverse(phi, chart: Superdiagonal):
    """Recover ``h`` from ``phi = P + rho Q``: ``h = P + theta Q``."""
    v, was_module = _as_module(phi)
    th, rh = chart.gen(chart.theta), chart.gen(chart.rho)
    q = v.derivative(chart.rho)
    p = v - q.lmul(rh)
    out = chart.to_x(p + q.lmul(th))
    return out if was_module else out[0]


def psi_op(op: DiffOperator, chart: Superdiagonal) -> DiffOperator:
    """``z -> u``, ``theta -> rho``, ``d_z -> d^_u``, ``d_theta -> d^_rho``."""
    return op.map_coefficients(lambda c: psi_hat(c, chart), even_var=chart.u, odd_var=chart.rho)


def apply_dual_operator(op: DiffOperator, v, chart: Superdiagonal, conn: ConnectionForm | None = None):
    """Apply an operator on ``Xhat`` to a section on ``Delta`` via the hat derivatives."""
    lifted = op.map_coefficients(lambda c: chart.from_xhat(c))

    def derivative(name, w):
        return hat_nabla(name, w, chart, conn)

    return lifted.apply(v, derivative)


# --------------------------------------------------------------------------
# chart changes and the transition cocycle


def jacobian(change: CoordinateChange, z: str = "z", theta: str = "theta") -> SuperMatrix:
    """``J[a][b] = d_{x_a} y_b`` for old coordinates ``x`` and new ones ``y``."""
    Z, T = change.image(z), change.image(theta)
    return SuperMatrix([[Z.derivative(z), T.derivative(z)],
                        [Z.derivative(theta), T.derivative(theta)]], (1, 1), 0, check_parity=False)


def rho_of_change(change: CoordinateChange, chart: Superdiagonal) -> GrassmannElement:
    """The superdiagonal coordinate of the new chart: ``d~Z (d~Theta)^-1``."""
    Z = chart.from_x(change.image(chart.z))
    T = chart.from_x(change.image(chart.theta))
    return tilde_d(Z, chart) * ginv(tilde_d(T, chart))


def lambda_of_change(change: CoordinateChange, chart: Superdiagonal) -> GrassmannElement:
    """``r = f'/g`` for a projected chart change ``Z = f(z)``, ``Theta = theta g + Lambda``.

    The new superdiagonal coordinate is then ``rho r``.  ``g`` needs a
    constant invertible body.
    """
    Z, T = change.image(chart.z), change.image(chart.theta)
    if Z.involves(chart.theta):
        raise GrassmannError("Z must be free of theta for a projected chart change")
    g = T.derivative(chart.theta)
    if g.involves(chart.theta):
        raise GrassmannError("Theta must be linear in theta")
    return Z.derivative(chart.z) * ginv(g)


def _new_chart_derivatives(change: CoordinateChange, chart: Superdiagonal):
    k = jacobian(change, chart.z, chart.theta).inverse().entries

    def dZ(f):
        return k[0][0] * f.derivative(chart.z) + k[0][1] * f.derivative(chart.theta)

    def dT(f):
        return k[1][0] * f.derivative(chart.z) + k[1][1] * f.derivative(chart.theta)

    return dZ, dT


def chart_psi(h: GrassmannElement, change: CoordinateChange, chart: Superdiagonal) -> GrassmannElement:
    """``tau`` for the trivial connection, taken in the coordinates ``(Z, Theta)``."""
    dZ, dT = _new_chart_derivatives(change, chart)
    T = chart.from_x(change.image(chart.theta))
    r = rho_of_change(change, chart)
    lh, lz, lt = chart.from_x(h), chart.from_x(dZ(h)), chart.from_x(dT(h))
    return lh - T * lt + r * (T * lz + lt)


def chart_psi_inverse(phi: GrassmannElement, change: CoordinateChange, chart: Superdiagonal) -> GrassmannElement:
    r = rho_of_change(change, chart)
    T = chart.from_x(change.image(chart.theta))
    q = ginv(r.derivative(chart.rho)) * phi.derivative(chart.rho)
    p = phi - r * q
    return chart.to_x(p + T * q)


def transition_cocycle(change_i: CoordinateChange, change_j: CoordinateChange, chart: Superdiagonal,
                       max_order: int = 4) -> DiffOperator:
    """``D_ij = Psi_i^-1 Psi_j`` as a differential operator in the reference chart.

    Each change gives a chart's coordinates as functions of the reference
    ``(z, theta)``; their Jacobians need constant bodies.
    """
    def action(h):
        return chart_psi_inverse(chart_psi(h, change_j, chart), change_i, chart)

    return fit_operator(action, chart.x, max_order, chart.z, chart.theta)


# --------------------------------------------------------------------------
# injected curves and the double dual


def nu_map(f: GrassmannElement, chart: Superdiagonal) -> GrassmannElement:
    """``f - theta d~f``; kills the ideal generated by theta."""
    lf = chart.from_x(f)
    return lf - chart.gen(chart.theta) * tilde_d(lf, chart)


def nu_map_with_generator(f: GrassmannElement, eta: GrassmannElement, chart: Superdiagonal) -> GrassmannElement:
    """``f - eta (d~f)(d~eta)^-1`` for another odd generator ``eta`` of the same ideal."""
    lf, le = chart.from_x(f), chart.from_x(eta)
    return lf - le * tilde_d(lf, chart) * ginv(tilde_d(le, chart))


def double_dual(h, chart: Superdiagonal):
    """Transform twice and identify ``u - rho theta`` with ``z``.

    Returns a function on ``X``; the round trip is the identity.
    """
    F = psi_hat(h, chart)
    d = chart.delta_dual
    u, th, rh = d.gens(chart.u, chart.theta, chart.rho)
    G = _map(F, lambda c: c.substitute({chart.u: u - rh * th, chart.rho: th}, d))
    return chart.to_x(chart.coordinates().from_dual(G))
