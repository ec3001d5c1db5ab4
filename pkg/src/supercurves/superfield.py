"""Superfunctions on a (z, theta) chart, coordinate changes, odd expansions.

A superfunction is a :class:`~supercurves.grassmann.GrassmannElement` over a
signature that contains the chart coordinates next to the odd generators of
the base algebra.  Polynomials in ``z`` only; no power series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Mapping, Sequence

from .grassmann import AlgebraSignature, GrassmannElement, GrassmannError
from .supermatrix import ModuleElement

SuperFunction = GrassmannElement

__all__ = [
    "CoordinateChange",
    "DiffOperator",
    "OddExpansion",
    "SuperFunction",
    "chart_signature",
    "compose",
    "d_theta",
    "d_z",
    "fit_operator",
    "expand_odd",
    "from_components",
    "lmul",
    "sf_add",
    "sf_mul",
    "substitute",
    "superfunction_components",
]


def chart_signature(base: AlgebraSignature, z: str = "z", theta: str = "theta") -> AlgebraSignature:
    """The base algebra with an even chart coordinate and an odd one adjoined."""
    return base.extend(odd=(theta,), even=(z,))


def sf_add(f: SuperFunction, g: SuperFunction) -> SuperFunction:
    return f + g


def sf_mul(f: SuperFunction, g: SuperFunction) -> SuperFunction:
    return f * g


def d_z(f: SuperFunction, z: str = "z") -> SuperFunction:
    return f.derivative(z)


def d_theta(f: SuperFunction, theta: str = "theta") -> SuperFunction:
    """Left derivative: ``d_theta(theta * g) = g`` for theta-free ``g``."""
    return f.derivative(theta)


def superfunction_components(f: SuperFunction, z: str = "z", theta: str = "theta"
                             ) -> dict[int, tuple[GrassmannElement, GrassmannElement]]:
    """``{k: (a_k, b_k)}`` with ``f = sum_k z^k (a_k + theta b_k)``."""
    sig = f.signature
    a, b = f.coefficient(theta)
    zi = sig.even_index(z)
    out: dict[int, list] = {}
    for part, slot in ((a, 0), (b, 1)):
        for (m, e), c in part.terms.items():
            k = e[zi]
            ne = e[:zi] + (0,) + e[zi + 1:]
            pair = out.setdefault(k, [sig.zero(), sig.zero()])
            pair[slot] = pair[slot] + GrassmannElement(sig, {(m, ne): c})
    return {k: (p[0], p[1]) for k, p in sorted(out.items())}


def from_components(comps: Mapping[int, tuple[GrassmannElement, GrassmannElement]],
                    signature: AlgebraSignature, z: str = "z", theta: str = "theta") -> SuperFunction:
    zz, th = signature.gen(z), signature.gen(theta)
    f = signature.zero()
    for k, (a, b) in comps.items():
        f = f + zz ** k * (a.lift(signature) + th * b.lift(signature))
    return f


def lmul(f: GrassmannElement, a):
    """Left multiplication of a function or module element by ``f``."""
    if isinstance(a, ModuleElement):
        return a.lmul(f)
    return f * a


@dataclass(frozen=True)
class CoordinateChange:
    """Images of the chart coordinates under a change of variables.

    ``images`` maps coordinate names to their new expressions; coordinates
    not listed are left alone.  Applying the change to a function is the
    ring homomorphism that substitutes these images.
    """

    images: Mapping[str, GrassmannElement]
    signature: AlgebraSignature = field(default=None)

    def __post_init__(self):
        images = dict(self.images)
        sig = self.signature or next(iter(images.values())).signature
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "signature", sig)
        for name, img in images.items():
            if img.signature != sig:
                raise GrassmannError("coordinate images in different algebras")
            want_odd = sig.is_odd(name)
            if img.is_zero():
                continue
            if want_odd and not img.is_odd():
                raise GrassmannError(f"image of odd coordinate {name} must be odd, got {img}")
            if not want_odd and not img.is_even():
                raise GrassmannError(f"image of even coordinate {name} must be even, got {img}")

    @classmethod
    def chart(cls, Z: GrassmannElement, Theta: GrassmannElement, z: str = "z",
              theta: str = "theta") -> "CoordinateChange":
        return cls({z: Z, theta: Theta})

    @classmethod
    def identity(cls, signature: AlgebraSignature, names: Sequence[str] = ("z", "theta")) -> "CoordinateChange":
        return cls({n: signature.gen(n) for n in names}, signature)

    def image(self, name: str) -> GrassmannElement:
        return self.images.get(name, self.signature.gen(name))

    @property
    def Z(self) -> GrassmannElement:
        return self.image("z")

    @property
    def Theta(self) -> GrassmannElement:
        return self.image("theta")

    def __call__(self, f: GrassmannElement) -> GrassmannElement:
        return substitute(f, self)

    def then(self, other: "CoordinateChange") -> "CoordinateChange":
        """The change ``f -> other(self(f))``: first apply self, then other."""
        return compose(self, other)


def substitute(f: GrassmannElement, c: CoordinateChange) -> GrassmannElement:
    return f.substitute(c.images)


def compose(first: CoordinateChange, second: CoordinateChange) -> CoordinateChange:
    """Substitution by ``first`` followed by substitution by ``second``."""
    names = set(first.images) | set(second.images)
    return CoordinateChange({n: second(first.image(n)) for n in names}, first.signature)


# --------------------------------------------------------------------------
# odd expansion


Nabla = Callable[[object], object]


@dataclass
class OddExpansion:
    """Components ``A_mu`` with ``A = sum_mu theta^mu A_mu``.

    ``theta^mu`` is the product of the fiber variables with ``mu_i = 1`` in
    increasing index order, written to the left of the component.
    """

    fiber: tuple[str, ...]
    components: dict[tuple[int, ...], object]
    signature: AlgebraSignature

    def theta_power(self, mu: Sequence[int]) -> GrassmannElement:
        x = self.signature.one()
        for name, bit in zip(self.fiber, mu):
            if bit:
                x = x * self.signature.gen(name)
        return x

    def reassemble(self):
        total = None
        for mu, comp in self.components.items():
            term = lmul(self.theta_power(mu), comp)
            total = term if total is None else total + term
        return total

    def __getitem__(self, mu):
        return self.components[tuple(mu)]


def _default_nabla(name: str) -> Nabla:
    def nabla(a):
        return a.derivative(name)
    return nabla


def expand_odd(a, fiber: Sequence[str], nabla: Mapping[str, Nabla] | None = None) -> OddExpansion:
    """Split ``a`` into components killed by every fiber covariant derivative.

    ``a`` is a function or a :class:`ModuleElement`; ``nabla[x]`` is the
    covariant derivative along the odd fiber variable ``x`` (default: the
    plain coordinate derivative).  The fiber derivatives must anticommute
    pairwise and square to zero on the module.  One variable at a time:
    ``A_0 = A - theta nabla A`` and ``A_1 = nabla A``.
    """
    fiber = tuple(fiber)
    nabla = dict(nabla or {})
    for x in fiber:
        nabla.setdefault(x, _default_nabla(x))
    sig = a.signature

    def split(elem, names):
        if not names:
            return {(): elem}
        x, rest = names[0], names[1:]
        nx = nabla[x](elem)
        a0 = elem - lmul(sig.gen(x), nx)
        out = {}
        for bit, part in ((0, a0), (1, nx)):
            for mu, comp in split(part, rest).items():
                out[(bit,) + mu] = comp
        return out

    return OddExpansion(fiber, split(a, fiber), sig)


# --------------------------------------------------------------------------
# differential operators in normal form


@dataclass(frozen=True)
class DiffOperator:
    """``sum c_{a,b} d_even^a d_odd^b`` with coefficients on the left, b in {0, 1}.

    Acting on a module through a connection replaces the coordinate
    derivatives by covariant ones; see :meth:`apply`.
    """

    terms: Mapping[tuple[int, int], GrassmannElement]
    even_var: str = "z"
    odd_var: str = "theta"

    def __post_init__(self):
        clean = {k: v for k, v in dict(self.terms).items() if not v.is_zero()}
        for (a, b) in clean:
            if a < 0 or b not in (0, 1):
                raise GrassmannError(f"bad derivative multi-index {(a, b)}")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def multiplication(cls, f: GrassmannElement, even_var="z", odd_var="theta") -> "DiffOperator":
        return cls({(0, 0): f}, even_var, odd_var)

    @classmethod
    def partial(cls, signature: AlgebraSignature, which: str, even_var="z", odd_var="theta") -> "DiffOperator":
        key = (1, 0) if which == even_var else (0, 1) if which == odd_var else None
        if key is None:
            raise GrassmannError(f"{which} is not a coordinate of this chart")
        return cls({key: signature.one()}, even_var, odd_var)

    @classmethod
    def identity(cls, signature: AlgebraSignature, even_var="z", odd_var="theta") -> "DiffOperator":
        return cls({(0, 0): signature.one()}, even_var, odd_var)

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return (self.even_var, self.odd_var) == (other.even_var, other.odd_var) and \
            dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.even_var, self.odd_var, frozenset(self.terms.items())))

    @property
    def order(self) -> int:
        return max((a + b for a, b in self.terms), default=0)

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return DiffOperator(terms, self.even_var, self.odd_var)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator({k: v * c for k, v in self.terms.items()}, self.even_var, self.odd_var)

    def apply(self, target, derivative: Callable[[str, object], object] | None = None):
        """Apply to a function or module element.

        ``derivative(name, v)`` computes the (covariant) derivative; default
        is the coordinate derivative.
        """
        if derivative is None:
            def derivative(name, v):
                return v.derivative(name)
        total = None
        for (a, b), c in self.terms.items():
            v = target
            if b:
                v = derivative(self.odd_var, v)
            for _ in range(a):
                v = derivative(self.even_var, v)
            term = lmul(c, v)
            total = term if total is None else total + term
        if total is None:
            return target * 0 if isinstance(target, GrassmannElement) else target - target
        return total

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        """Composition ``self o other`` normalized by the Leibniz rule."""
        out: dict[tuple[int, int], GrassmannElement] = {}

        def add(key, val):
            if key[1] > 1 or val.is_zero():
                return
            out[key] = out[key] + val if key in out else val

        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                # d_odd^{b1} o c2 = sum of (coef, extra odd order)
                if b1:
                    pieces = [(c2.derivative(self.odd_var), 0), (c2.involution(), 1)]
                else:
                    pieces = [(c2, 0)]
                for coef, e in pieces:
                    for k in range(a1 + 1):
                        dk = coef
                        for _ in range(k):
                            dk = dk.derivative(self.even_var)
                        add((a1 - k + a2, e + b2), c1 * dk * comb(a1, k))
        return DiffOperator(out, self.even_var, self.odd_var)

    def map_coefficients(self, fn, even_var=None, odd_var=None) -> "DiffOperator":
        return DiffOperator({k: fn(v) for k, v in self.terms.items()},
                            even_var or self.even_var, odd_var or self.odd_var)

    def __str__(self):
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            d = "".join([f"d_{self.even_var}^{a} " if a > 1 else f"d_{self.even_var} " if a else "",
                         f"d_{self.odd_var}" if b else ""]).strip()
            parts.append(f"({c}){(' ' + d) if d else ''}")
        return " + ".join(parts) or "0"


def fit_operator(action: Callable[[GrassmannElement], GrassmannElement], signature: AlgebraSignature,
                 max_order: int = 4, even_var: str = "z", odd_var: str = "theta",
                 check_degree: int | None = None) -> DiffOperator:
    """Recover the normal form of a differential operator from its action.

    Coefficients are solved triangularly from the images of ``z^k`` and
    ``z^k theta``; the result is then checked on monomials up to
    ``check_degree`` (default ``max_order + 2``) and a GrassmannError is
    raised if the action is not an operator of order at most ``max_order``.
    """
    z, th = signature.gen(even_var), signature.gen(odd_var)
    coeffs: dict[tuple[int, int], GrassmannElement] = {}
    fact = 1
    for k in range(max_order + 1):
        fact = fact * k if k else 1
        for b in (0, 1):
            mono = z ** k * (th if b else signature.one())
            partial = DiffOperator(dict(coeffs), even_var, odd_var).apply(mono)
            rest = action(mono) - partial
            # only c_{k,b} remains, acting as c * k! (times 1 from d_odd theta)
            coeffs[(k, b)] = rest * Fraction(1, fact)
    op = DiffOperator(coeffs, even_var, odd_var)
    top = check_degree if check_degree is not None else max_order + 2
    for k in range(top + 1):
        for b in (0, 1):
            mono = z ** k * (th if b else signature.one())
            if op.apply(mono) != action(mono):
                raise GrassmannError("action is not a differential operator of the given order")
    return op
