"""Connections on free modules over a chart.

A connection is stored as one matrix per chart coordinate:
``nabla_x v = d_x v + Omega_x v``.  ``Omega_x`` is an operator of the same
parity as ``x`` (even for ``z``, odd for ``theta``).  Flatness is checked by
computing the curvature on basis vectors, so no wedge-product sign tables are
needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .grassmann import AlgebraSignature, GrassmannElement, GrassmannError
from .superfield import CoordinateChange, expand_odd
from .supermatrix import ModuleElement, SuperMatrix, block_parities

__all__ = [
    "ConnectionForm",
    "DirectImage",
    "FlatnessReport",
    "OneForm",
    "ParallelFrame",
    "direct_image_module",
    "flat_check",
    "parallel_frame",
    "pure_gauge",
]


@dataclass(frozen=True)
class ConnectionForm:
    """``omega = sum_x dx Omega_x`` on the free module of the given rank."""

    signature: AlgebraSignature
    rank: tuple[int, int]
    matrices: Mapping[str, SuperMatrix] = field(default_factory=dict)
    variables: tuple[str, ...] = ("z", "theta")

    def __post_init__(self):
        object.__setattr__(self, "rank", tuple(self.rank))
        object.__setattr__(self, "variables", tuple(self.variables))
        mats = {}
        for x, m in dict(self.matrices).items():
            if x not in self.variables:
                raise GrassmannError(f"{x} is not a coordinate of this connection")
            if m.rank != self.rank:
                raise GrassmannError("connection matrix has the wrong rank")
            p = 1 if self.signature.is_odd(x) else 0
            if not m.has_parity(p):
                raise GrassmannError(f"Omega_{x} must be an operator of parity {p}")
            mats[x] = SuperMatrix(m.entries, m.rank, p, check_parity=False)
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def trivial(cls, signature: AlgebraSignature, rank=(1, 0), variables=("z", "theta")) -> "ConnectionForm":
        return cls(signature, rank, {}, variables)

    @classmethod
    def line(cls, signature: AlgebraSignature, coefficients: Mapping[str, GrassmannElement],
             variables=("z", "theta")) -> "ConnectionForm":
        """Rank 1|0 connection with ``Omega_x`` = the given function."""
        return cls(signature, (1, 0), {x: SuperMatrix([[f]], (1, 0), 1 if signature.is_odd(x) else 0)
                                        for x, f in coefficients.items()}, variables)

    def matrix(self, x: str) -> SuperMatrix:
        if x in self.matrices:
            return self.matrices[x]
        if x not in self.variables:
            raise GrassmannError(f"{x} is not a coordinate of this connection")
        return SuperMatrix.zeros(self.signature, self.rank, 1 if self.signature.is_odd(x) else 0)

    @property
    def basis_parity(self) -> tuple[int, ...]:
        return block_parities(*self.rank)

    def nabla(self, x: str, v):
        """Covariant derivative of a module element (or a function, for rank 1|0)."""
        if isinstance(v, GrassmannElement):
            if self.rank != (1, 0):
                raise GrassmannError("plain functions are sections only for rank 1|0")
            return self.nabla(x, ModuleElement((v,), (0,)))[0]
        if v.basis_parity != self.basis_parity:
            raise GrassmannError("rank mismatch")
        return v.derivative(x) + self.matrix(x) @ v

    def nabla_frame(self, x: str, frame: SuperMatrix) -> SuperMatrix:
        return SuperMatrix.from_columns([self.nabla(x, c) for c in frame.columns()], check_parity=False)

    def basis(self) -> list[ModuleElement]:
        return [ModuleElement.basis_vector(self.signature, self.rank, j) for j in range(sum(self.rank))]

    def curvature(self) -> dict[tuple[str, str], SuperMatrix]:
        """``F_xy = [nabla_x, nabla_y]`` (graded commutator), for x before y.

        For an odd ``x`` the diagonal entry is ``nabla_x^2``.
        """
        out = {}
        sig = self.signature
        for i, x in enumerate(self.variables):
            for y in self.variables[i:]:
                if x == y and not sig.is_odd(x):
                    continue
                cols = []
                for e in self.basis():
                    if x == y:
                        cols.append(self.nabla(x, self.nabla(x, e)))
                        continue
                    xy = self.nabla(x, self.nabla(y, e))
                    yx = self.nabla(y, self.nabla(x, e))
                    sign = -1 if (sig.is_odd(x) and sig.is_odd(y)) else 1
                    cols.append(xy + yx if sign < 0 else xy - yx)
                out[(x, y)] = SuperMatrix.from_columns(cols, check_parity=False)
        return out

    def lift(self, target: AlgebraSignature, extra_variables: Sequence[str] = ()) -> "ConnectionForm":
        """Pull back along a projection that adds coordinates (with zero Omega)."""
        mats = {x: m.map(lambda f: f.lift(target)) for x, m in self.matrices.items()}
        return ConnectionForm(target, self.rank, mats, self.variables + tuple(extra_variables))

    def restrict(self, target: AlgebraSignature, variables: Sequence[str]) -> "ConnectionForm":
        """Drop the given coordinates; the remaining matrices must not depend on them."""
        mats = {}
        for x in variables:
            mats[x] = self.matrix(x).map(lambda f: f.restrict(target))
        for x in self.variables:
            if x not in variables and not self.matrix(x).is_zero():
                raise GrassmannError(f"cannot drop {x}: its connection matrix is nonzero")
        return ConnectionForm(target, self.rank, mats, tuple(variables))

    def gauge(self, g: SuperMatrix) -> "ConnectionForm":
        """The connection ``g nabla g^-1`` (new frame given by the columns of ``g^-1``)."""
        ginv = g.inverse()
        mats = {}
        for x in self.variables:
            cols = [g @ self.nabla(x, c) for c in ginv.columns()]
            mats[x] = SuperMatrix.from_columns(cols, check_parity=False)
        return ConnectionForm(self.signature, self.rank, mats, self.variables)

    def change_coordinates(self, images: Mapping[str, GrassmannElement], target: AlgebraSignature,
                           variables: Sequence[str]) -> "ConnectionForm":
        """Rewrite in new coordinates.

        ``images`` expresses every old coordinate through the new ones (in
        ``target``); ``variables`` are the new coordinate names.  Uses
        ``nabla'_x = sum_y (d_x y) nabla_y``.
        """
        mats = {}
        for x in variables:
            acc = SuperMatrix.zeros(target, self.rank, 1 if target.is_odd(x) else 0)
            for y in self.variables:
                j = images[y].derivative(x)
                if j.is_zero() or self.matrix(y).is_zero():
                    continue
                m = self.matrix(y).map(lambda f: f.substitute(images, target))
                acc = acc + m.lmul(j)
            mats[x] = acc
        return ConnectionForm(target, self.rank, mats, tuple(variables))

    def __eq__(self, other):
        if not isinstance(other, ConnectionForm):
            return NotImplemented
        if (self.signature, self.rank, set(self.variables)) != (other.signature, other.rank, set(other.variables)):
            return False
        return all(self.matrix(x) == other.matrix(x) for x in self.variables)

    def __hash__(self):
        return hash((self.signature, self.rank, self.variables))

    def __str__(self):
        return " + ".join(f"d{x} {self.matrix(x)}" for x in self.variables)


@dataclass
class FlatnessReport:
    flat: bool
    residual: dict[tuple[str, str], SuperMatrix]

    def __bool__(self):
        return self.flat


def flat_check(conn: ConnectionForm, variables: Sequence[str] | None = None) -> FlatnessReport:
    """Curvature of ``conn``; ``variables`` restricts to a sub-family of directions."""
    curv = conn.curvature()
    if variables is not None:
        curv = {k: v for k, v in curv.items() if k[0] in variables and k[1] in variables}
    residual = {k: v for k, v in curv.items() if not v.is_zero()}
    return FlatnessReport(not residual, residual)


def pure_gauge(g: SuperMatrix, variables: Sequence[str] = ("z", "theta")) -> ConnectionForm:
    """The flat connection ``g d g^-1``."""
    return ConnectionForm.trivial(g.signature, g.rank, variables).gauge(g)


# --------------------------------------------------------------------------
# parallel frames and direct images


@dataclass
class ParallelFrame:
    """Columns of ``A0`` are sections killed by every fiber covariant derivative."""

    A0: SuperMatrix
    fiber: tuple[str, ...]

    def inverse(self) -> SuperMatrix:
        return self.A0.inverse()

    def fiber_identity_holds(self, conn: ConnectionForm) -> bool:
        """``-(d_x A0) A0^-1 = Omega_x`` for every fiber variable ``x``."""
        inv = self.inverse()
        return all(-(self.A0.column_derivative(x) @ inv) == conn.matrix(x) for x in self.fiber)


def parallel_frame(conn: ConnectionForm, fiber: Sequence[str], check: bool = True) -> ParallelFrame:
    """``A0 = prod_i (1 - theta_i nabla_i)`` applied to the standard frame."""
    fiber = tuple(fiber)
    if check:
        report = flat_check(conn, fiber)
        if not report:
            raise GrassmannError(f"connection is not flat along {fiber}")
    nab = {x: (lambda v, x=x: conn.nabla(x, v)) for x in fiber}
    zero = (0,) * len(fiber)
    cols = [expand_odd(e, fiber, nab)[zero] for e in conn.basis()]
    return ParallelFrame(SuperMatrix.from_columns(cols, check_parity=False), fiber)


@dataclass
class DirectImage:
    frame: ParallelFrame
    connection: ConnectionForm

    @property
    def rank(self) -> tuple[int, int]:
        return self.connection.rank


def direct_image_module(conn: ConnectionForm, fiber: Sequence[str], base: AlgebraSignature,
                        check: bool = True) -> DirectImage:
    """Push forward along the odd fiber: the induced connection in the ``A0`` frame."""
    if check:
        report = flat_check(conn)
        if not report:
            raise GrassmannError("direct image needs a flat connection")
    frame = parallel_frame(conn, fiber, check=False)
    gauged = conn.gauge(frame.inverse())
    remaining = tuple(x for x in conn.variables if x not in fiber)
    return DirectImage(frame, gauged.restrict(base, remaining))


# --------------------------------------------------------------------------
# one-forms on a (1|1) chart


@dataclass(frozen=True)
class OneForm:
    """``omega = dz a + dtheta b``, coefficients to the right of the differentials.

    ``dz`` counts as odd and ``dtheta`` as even, so ``omega`` is odd exactly
    when ``a`` is even and ``b`` is odd.
    """

    a: GrassmannElement
    b: GrassmannElement
    z: str = "z"
    theta: str = "theta"

    @property
    def signature(self) -> AlgebraSignature:
        return self.a.signature

    def parity(self) -> int | None:
        ps = set()
        if not self.a.is_zero():
            pa = self.a.parity()
            ps.add(None if pa is None else 1 - pa)
        if not self.b.is_zero():
            ps.add(self.b.parity())
        if None in ps or len(ps) > 1:
            return None
        return ps.pop() if ps else 1

    def exterior_derivative(self) -> tuple[GrassmannElement, GrassmannElement]:
        """Coefficients of ``dz dtheta`` and ``dtheta dtheta`` in ``d omega``."""
        a, b = self.a, self.b
        return b.derivative(self.z) - a.derivative(self.theta), b.derivative(self.theta)

    def is_closed(self) -> bool:
        c1, c2 = self.exterior_derivative()
        return c1.is_zero() and c2.is_zero()

    def contraction(self, target: AlgebraSignature, rho: str = "rho") -> GrassmannElement:
        """``omega / dtheta`` on the superdiagonal, where ``dz = dtheta rho``."""
        return self.b.lift(target) + target.gen(rho) * self.a.lift(target)

    def pullback(self, change: CoordinateChange) -> "OneForm":
        """Pull back by a change giving the old coordinates in terms of new ones."""
        Z, T = change.image(self.z), change.image(self.theta)
        a, b = change(self.a), change(self.b)
        new_a = Z.derivative(self.z) * a + T.derivative(self.z) * b
        new_b = Z.derivative(self.theta) * a + T.derivative(self.theta) * b
        return OneForm(new_a, new_b, self.z, self.theta)

    def connection(self) -> ConnectionForm:
        """The rank 1|0 connection ``d + omega`` (requires an odd form)."""
        if self.parity() != 1:
            raise GrassmannError("a line-bundle connection form must be odd: a even, b odd")
        return ConnectionForm.line(self.signature, {self.z: self.a, self.theta: self.b},
                                   (self.z, self.theta))

    @classmethod
    def exact(cls, f: GrassmannElement, z: str = "z", theta: str = "theta") -> "OneForm":
        return cls(f.derivative(z), f.derivative(theta), z, theta)

    def __str__(self):
        return f"dz ({self.a}) + dtheta ({self.b})"
