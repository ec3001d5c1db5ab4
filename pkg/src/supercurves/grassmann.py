"""Exact arithmetic in a finite Grassmann algebra with formal even symbols.

An :class:`AlgebraSignature` names the odd generators (anticommuting, square
zero) and the even symbols (central polynomial variables).  Chart coordinates
are just more generators: ``theta`` and ``rho`` are odd, ``z`` and ``u`` are
even, so a superfunction on a chart is an ordinary :class:`GrassmannElement`
over an enlarged signature.

A term is stored as ``(mask, exps) -> Fraction`` where bit ``i`` of ``mask``
marks odd generator ``i`` (product taken in increasing index order) and
``exps`` holds the exponents of the even symbols.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg

__all__ = [
    "AlgebraSignature",
    "GrassmannElement",
    "GrassmannError",
    "LambdaModuleDescription",
    "LinearSolution",
    "ParseError",
    "gexp",
    "ginv",
    "glog",
    "gmul",
    "module_quotient",
    "parse_element",
    "solve_linear",
]


class GrassmannError(ValueError):
    """Raised for signature mismatches, parity violations and non-units."""


class ParseError(ValueError):
    """Raised when a string does not follow the element grammar."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _merge_sign(a: int, b: int) -> int:
    """Sign of reordering (gens of a)(gens of b) into increasing order."""
    swaps = 0
    while b:
        low = b & -b
        j = low.bit_length() - 1
        swaps += _popcount(a >> (j + 1))
        b ^= low
    return -1 if swaps & 1 else 1


@dataclass(frozen=True)
class AlgebraSignature:
    odd: tuple[str, ...]
    even: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "odd", tuple(self.odd))
        object.__setattr__(self, "even", tuple(self.even))
        names = self.odd + self.even
        if len(set(names)) != len(names):
            raise GrassmannError(f"duplicate generator names in {names}")
        for n in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise GrassmannError(f"bad generator name {n!r}")

    @property
    def dimension(self) -> int:
        """Dimension of the exterior part over the even-symbol polynomial ring."""
        return 2 ** len(self.odd)

    def extend(self, odd: Iterable[str] = (), even: Iterable[str] = ()) -> "AlgebraSignature":
        return AlgebraSignature(self.odd + tuple(odd), self.even + tuple(even))

    def odd_index(self, name: str) -> int:
        try:
            return self.odd.index(name)
        except ValueError:
            raise GrassmannError(f"{name!r} is not an odd generator of {self}") from None

    def even_index(self, name: str) -> int:
        try:
            return self.even.index(name)
        except ValueError:
            raise GrassmannError(f"{name!r} is not an even symbol of {self}") from None

    def is_odd(self, name: str) -> bool:
        if name in self.odd:
            return True
        if name in self.even:
            return False
        raise GrassmannError(f"unknown generator {name!r}")

    # constructors -------------------------------------------------------

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    def one(self) -> "GrassmannElement":
        return self.scalar(1)

    def scalar(self, c) -> "GrassmannElement":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return GrassmannElement(self, {(0, (0,) * len(self.even)): c})

    def gen(self, name: str) -> "GrassmannElement":
        """The generator or even symbol called ``name``."""
        zero_exps = (0,) * len(self.even)
        if name in self.odd:
            return GrassmannElement(self, {(1 << self.odd.index(name), zero_exps): Fraction(1)})
        i = self.even_index(name)
        exps = tuple(int(k == i) for k in range(len(self.even)))
        return GrassmannElement(self, {(0, exps): Fraction(1)})

    def gens(self, *names: str) -> tuple["GrassmannElement", ...]:
        return tuple(self.gen(n) for n in names)

    def monomial(self, odd_names: Sequence[str] = (), even_exps: Mapping[str, int] | None = None,
                 coeff=1) -> "GrassmannElement":
        x = self.scalar(coeff)
        for n, k in (even_exps or {}).items():
            x = x * self.gen(n) ** k
        for n in odd_names:
            x = x * self.gen(n)
        return x

    def parse(self, text: str) -> "GrassmannElement":
        return parse_element(text, self)

    def monomial_basis(self, max_degree: int = 0, odd_subset: Iterable[str] | None = None,
                       even_subset: Iterable[str] | None = None) -> list["GrassmannElement"]:
        """All monomials with total even-symbol degree at most ``max_degree``.

        ``odd_subset``/``even_subset`` restrict which generators may appear.
        """
        odd_ix = range(len(self.odd)) if odd_subset is None else [self.odd_index(n) for n in odd_subset]
        even_ix = range(len(self.even)) if even_subset is None else [self.even_index(n) for n in even_subset]
        even_ix = list(even_ix)
        masks = sorted({sum(1 << i for i, bit in zip(odd_ix, bits) if bit)
                        for bits in _bit_tuples(len(list(odd_ix)))},
                       key=lambda m: (_popcount(m), _mask_key(m)))
        exps_list = [()]
        for _ in even_ix:
            exps_list = [e + (k,) for e in exps_list for k in range(max_degree + 1)]
        exps_list = [e for e in exps_list if sum(e) <= max_degree]
        exps_list.sort(key=lambda e: (sum(e), e))
        out = []
        for e in exps_list:
            full = [0] * len(self.even)
            for i, k in zip(even_ix, e):
                full[i] = k
            for m in masks:
                out.append(GrassmannElement(self, {(m, tuple(full)): Fraction(1)}))
        return out

    def __str__(self):
        return f"Λ[odd={list(self.odd)}, even={list(self.even)}]"


def _bit_tuples(n: int):
    for k in range(2 ** n):
        yield tuple((k >> i) & 1 for i in range(n))


def _mask_key(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _term_key(key):
    mask, exps = key
    return (_popcount(mask), _mask_key(mask), sum(exps), exps)


class GrassmannElement:
    """Immutable element of a Grassmann algebra over Q[even symbols]."""

    __slots__ = ("signature", "_terms", "_hash")

    def __init__(self, signature: AlgebraSignature, terms: Mapping | None = None):
        self.signature = signature
        clean = {}
        for k, v in (terms or {}).items():
            if v != 0:
                clean[k] = Fraction(v)
        self._terms = clean
        self._hash = None

    # basic protocol ------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _term_key(kv[0]))

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.signature.scalar(other)
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.signature == other.signature and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.signature, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"GrassmannElement({format_element(self)!r})"

    def __str__(self):
        return format_element(self)

    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            if other.signature != self.signature:
                raise GrassmannError(f"signature mismatch: {self.signature} vs {other.signature}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.signature.scalar(other)
        raise TypeError(f"cannot combine GrassmannElement with {type(other).__name__}")

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, 0) + v
        return GrassmannElement(self.signature, terms)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.signature, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return GrassmannElement(self.signature, {k: v * c for k, v in self._terms.items()})
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for (m1, e1), c1 in self._terms.items():
            for (m2, e2), c2 in other._terms.items():
                if m1 & m2:
                    continue
                key = (m1 | m2, tuple(a + b for a, b in zip(e1, e2)))
                out[key] = out.get(key, 0) + _merge_sign(m1, m2) * c1 * c2
        return GrassmannElement(self.signature, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * ginv(self._coerce(other))

    def __pow__(self, k: int):
        if k < 0:
            return ginv(self) ** (-k)
        result = self.signature.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # grading --------------------------------------------------------------

    def even_part(self) -> "GrassmannElement":
        return GrassmannElement(self.signature, {k: v for k, v in self._terms.items()
                                                 if _popcount(k[0]) % 2 == 0})

    def odd_part(self) -> "GrassmannElement":
        return GrassmannElement(self.signature, {k: v for k, v in self._terms.items()
                                                 if _popcount(k[0]) % 2 == 1})

    def parity(self) -> int | None:
        """0 or 1 for homogeneous elements, None for mixed ones (zero is even)."""
        ps = {_popcount(m) % 2 for m, _ in self._terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def is_even(self) -> bool:
        return self.parity() == 0

    def is_odd(self) -> bool:
        return self.parity() == 1 and bool(self._terms)

    def involution(self) -> "GrassmannElement":
        """The grading automorphism: even part minus odd part."""
        return GrassmannElement(self.signature, {k: (-v if _popcount(k[0]) % 2 else v)
                                                 for k, v in self._terms.items()})

    def body(self) -> "GrassmannElement":
        """Terms free of odd generators (may still involve even symbols)."""
        return GrassmannElement(self.signature, {k: v for k, v in self._terms.items() if k[0] == 0})

    def soul(self) -> "GrassmannElement":
        return self - self.body()

    def scalar_body(self) -> Fraction | None:
        """The body as a rational number, or None if it involves even symbols."""
        b = self.body()
        if not b._terms:
            return Fraction(0)
        if len(b._terms) == 1:
            (m, e), c = next(iter(b._terms.items()))
            if not any(e):
                return c
        return None

    def is_constant(self) -> bool:
        """True if only the empty monomial occurs."""
        return all(k == (0, (0,) * len(self.signature.even)) for k in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise GrassmannError(f"{self} is not a rational constant")
        return self._terms.get((0, (0,) * len(self.signature.even)), Fraction(0))

    def degree(self, symbol: str | None = None) -> int:
        """Highest total even-symbol degree (or degree in one symbol)."""
        if not self._terms:
            return 0
        if symbol is None:
            return max(sum(e) for _, e in self._terms)
        i = self.signature.even_index(symbol)
        return max(e[i] for _, e in self._terms)

    def involves(self, name: str) -> bool:
        sig = self.signature
        if name in sig.odd:
            bit = 1 << sig.odd.index(name)
            return any(m & bit for m, _ in self._terms)
        i = sig.even_index(name)
        return any(e[i] for _, e in self._terms)

    # calculus and substitution -------------------------------------------

    def derivative(self, name: str) -> "GrassmannElement":
        """Left derivative: odd generators are moved to the front before removal."""
        sig = self.signature
        out: dict = {}
        if name in sig.odd:
            i = sig.odd.index(name)
            bit = 1 << i
            for (m, e), c in self._terms.items():
                if m & bit:
                    sign = -1 if _popcount(m & (bit - 1)) & 1 else 1
                    key = (m ^ bit, e)
                    out[key] = out.get(key, 0) + sign * c
        else:
            i = sig.even_index(name)
            for (m, e), c in self._terms.items():
                k = e[i]
                if k:
                    ne = e[:i] + (k - 1,) + e[i + 1:]
                    out[(m, ne)] = out.get((m, ne), 0) + k * c
        return GrassmannElement(sig, out)

    def substitute(self, mapping: Mapping[str, "GrassmannElement"],
                   target: AlgebraSignature | None = None) -> "GrassmannElement":
        """Ring homomorphism sending each named generator to the given element.

        Generators not in ``mapping`` go to themselves (lifted by name into
        ``target``).  Odd generators must map to odd elements, even to even.
        """
        sig = self.signature
        target = target or sig
        images_odd = []
        for n in sig.odd:
            img = mapping.get(n)
            if img is None:
                img = target.gen(n)
            elif img.signature != target:
                raise GrassmannError("substitution image has wrong signature")
            elif not (img.is_odd() or img.is_zero()):
                raise GrassmannError(f"odd generator {n} must map to an odd element, got {img}")
            images_odd.append(img)
        images_even = []
        for n in sig.even:
            img = mapping.get(n)
            if img is None:
                img = target.gen(n)
            elif img.signature != target:
                raise GrassmannError("substitution image has wrong signature")
            elif not img.is_even():
                raise GrassmannError(f"even symbol {n} must map to an even element, got {img}")
            images_even.append(img)
        powers: dict = {}

        def power(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = images_even[i] ** k
            return powers[(i, k)]

        result = target.zero()
        for (m, e), c in self._terms.items():
            t = target.scalar(c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            for i in _mask_key(m):
                t = t * images_odd[i]
            result = result + t
        return result

    def lift(self, target: AlgebraSignature) -> "GrassmannElement":
        """Re-express in a signature that contains all generators of this one."""
        if target == self.signature:
            return self
        sig = self.signature
        odd_map = [target.odd_index(n) for n in sig.odd]
        even_map = [target.even_index(n) for n in sig.even]
        out: dict = {}
        for (m, e), c in self._terms.items():
            names = _mask_key(m)
            new_bits = [odd_map[i] for i in names]
            # reorder into target order, tracking the permutation sign
            sign = 1
            arr = list(new_bits)
            for a in range(len(arr)):
                for b in range(a + 1, len(arr)):
                    if arr[a] > arr[b]:
                        sign = -sign
            new_mask = sum(1 << b for b in new_bits)
            ne = [0] * len(target.even)
            for i, k in zip(even_map, e):
                ne[i] = k
            key = (new_mask, tuple(ne))
            out[key] = out.get(key, 0) + sign * c
        return GrassmannElement(target, out)

    def restrict(self, target: AlgebraSignature) -> "GrassmannElement":
        """Inverse of :meth:`lift`; fails if a generator outside ``target`` occurs."""
        for n in self.signature.odd + self.signature.even:
            if n not in target.odd + target.even and self.involves(n):
                raise GrassmannError(f"{self} involves {n}, absent from {target}")
        back = target.zero()
        for (m, e), c in self._terms.items():
            names_even = {n: k for n, k in zip(self.signature.even, e) if k}
            odd_names = [self.signature.odd[i] for i in _mask_key(m)]
            back = back + target.monomial(odd_names, names_even, c)
        return back

    def coefficient(self, name: str) -> tuple["GrassmannElement", "GrassmannElement"]:
        """Split ``x = a + g*b`` with ``a``, ``b`` free of the odd generator ``g``."""
        b = self.derivative(name)
        a = self - self.signature.gen(name) * b
        return a, b

    # coordinates ------------------------------------------------------------

    def coordinates(self, basis_keys: Sequence) -> list[Fraction]:
        return [self._terms.get(k, Fraction(0)) for k in basis_keys]

    def keys(self):
        return self._terms.keys()


def gmul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    return x * y


def ginv(x: GrassmannElement) -> GrassmannElement:
    """Inverse via the body inverse and a terminating Neumann series."""
    b = x.scalar_body()
    if b is None or b == 0:
        raise GrassmannError(f"non-invertible body in {x}")
    n = x.soul() * (1 / b)
    # (b(1+n))^-1 = b^-1 sum (-n)^k ; n^k = 0 once k exceeds the odd generator count
    result = x.signature.one()
    term = x.signature.one()
    for _ in range(len(x.signature.odd)):
        term = term * (-n)
        if term.is_zero():
            break
        result = result + term
    return result * (1 / b)


def gexp(x: GrassmannElement) -> GrassmannElement:
    """exp of an even element without body, as a finite series."""
    if not x.body().is_zero():
        raise GrassmannError(f"exponent {x} has nonzero body")
    if not x.is_even():
        raise GrassmannError(f"exponent {x} is not even")
    result = x.signature.one()
    term = x.signature.one()
    for k in range(1, len(x.signature.odd) + 2):
        term = term * x * Fraction(1, k)
        if term.is_zero():
            break
        result = result + term
    return result


def glog(x: GrassmannElement) -> GrassmannElement:
    """log of an element whose body is exactly 1."""
    if x.scalar_body() != 1:
        raise GrassmannError(f"log needs body 1, got {x}")
    n = x - 1
    result = x.signature.zero()
    term = x.signature.one()
    for k in range(1, len(x.signature.odd) + 2):
        term = term * n
        if term.is_zero():
            break
        result = result + term * Fraction((-1) ** (k + 1), k)
    return result


# --------------------------------------------------------------------------
# text grammar

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|([+\-*])|(\S))")


def parse_element(text: str, signature: AlgebraSignature) -> GrassmannElement:
    """Parse ``coeff sym^k gen1 gen2 + ...``; juxtaposition multiplies in order."""
    tokens = []
    pos = 0
    text = str(text)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(5):
            raise ParseError(f"unexpected character {m.group(5)!r} at {m.start(5)} in {text!r}")
        pos = m.end()
        kind = "num" if m.group(1) else "name" if m.group(2) else "^" if m.group(3) else "op"
        tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
    if not tokens:
        raise ParseError(f"empty element {text!r}")

    result = signature.zero()
    i = 0
    sign = 1
    expect_term = True
    if tokens[0][:2] == ("op", "-"):
        sign = -1
        i = 1
    elif tokens[0][:2] == ("op", "+"):
        i = 1
    while i < len(tokens):
        term = signature.one()
        seen = False
        if tokens[i][0] == "num":
            num = tokens[i][1]
            try:
                c = Fraction(num)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"malformed rational {num!r} in {text!r}") from None
            term = term * c
            i += 1
            seen = True
        while i < len(tokens) and (tokens[i][0] == "name" or tokens[i][:2] == ("op", "*")):
            if tokens[i][0] == "op":
                i += 1
                continue
            name = tokens[i][1]
            if name not in signature.odd and name not in signature.even:
                raise ParseError(f"unknown generator {name!r} at {tokens[i][2]} in {text!r}")
            g = signature.gen(name)
            i += 1
            if i < len(tokens) and tokens[i][0] == "^":
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                    raise ParseError(f"bad exponent after {name!r} in {text!r}")
                k = int(tokens[i + 1][1])
                if name in signature.odd and k > 1:
                    g = signature.zero()
                else:
                    g = g ** k
                i += 2
            term = term * g
            seen = True
        if not seen:
            raise ParseError(f"expected a term at {tokens[i][2] if i < len(tokens) else len(text)} in {text!r}")
        result = result + term * sign
        expect_term = False
        if i < len(tokens):
            if tokens[i][0] != "op" or tokens[i][1] not in "+-":
                raise ParseError(f"unexpected token {tokens[i][1]!r} in {text!r}")
            sign = 1 if tokens[i][1] == "+" else -1
            i += 1
            expect_term = True
    if expect_term:
        raise ParseError(f"dangling operator in {text!r}")
    return result


def format_element(x: GrassmannElement) -> str:
    """Canonical text form; stable across runs, parses back to ``x``."""
    sig = x.signature
    if x.is_zero():
        return "0"
    parts = []
    for (m, e), c in x.items():
        names = []
        for n, k in zip(sig.even, e):
            if k == 1:
                names.append(n)
            elif k > 1:
                names.append(f"{n}^{k}")
        names.extend(sig.odd[i] for i in _mask_key(m))
        mag = abs(c)
        if names:
            body = " ".join(names) if mag == 1 else f"{mag} " + " ".join(names)
        else:
            body = str(mag)
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


# --------------------------------------------------------------------------
# linear algebra over Λ


@dataclass
class LambdaModuleDescription:
    """A finite-dimensional rational subspace or quotient of ``Λ^k``.

    ``basis`` lists vectors (tuples of elements, one per slot); ``slot_dims``
    gives, per slot, the dimension of the projection/quotient onto that slot
    when the answer splits slot by slot.
    """

    slots: tuple[str, ...]
    basis: list[tuple[GrassmannElement, ...]]
    graded_dim: tuple[int, int]
    slot_dims: tuple[int, ...] | None = None
    slot_parity_shift: tuple[int, ...] = ()
    notes: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def describe(self) -> dict:
        return {
            "slots": list(self.slots),
            "dimension": self.dim,
            "graded_dimension": f"{self.graded_dim[0]}|{self.graded_dim[1]}",
            "slot_dimensions": list(self.slot_dims) if self.slot_dims is not None else None,
            "basis": [[format_element(c) for c in v] for v in self.basis],
        }


@dataclass
class LinearSolution:
    consistent: bool
    particular: tuple[GrassmannElement, ...] | None
    kernel: LambdaModuleDescription


def _coordinate_keys(elements: Iterable[GrassmannElement]) -> list:
    keys = set()
    for x in elements:
        keys.update(x.keys())
    return sorted(keys, key=_term_key)


def _unknown_basis(signature: AlgebraSignature, degree: int) -> list[GrassmannElement]:
    return signature.monomial_basis(degree)


def _vector_parity(vec: Sequence[GrassmannElement], shifts: Sequence[int]) -> int | None:
    ps = set()
    for x, s in zip(vec, shifts):
        if x.is_zero():
            continue
        p = x.parity()
        if p is None:
            return None
        ps.add((p + s) % 2)
    if len(ps) > 1:
        return None
    return ps.pop() if ps else 0


def _graded(basis, shifts) -> tuple[int, int]:
    even = odd = 0
    for v in basis:
        p = _vector_parity(v, shifts)
        if p == 0:
            even += 1
        elif p == 1:
            odd += 1
    return even, odd


def solve_linear(system: Sequence[Sequence[GrassmannElement]], rhs: Sequence[GrassmannElement],
                 unknown_signature: AlgebraSignature | None = None, degree: int | None = None,
                 slot_names: Sequence[str] | None = None,
                 parity_shift: Sequence[int] | None = None) -> LinearSolution:
    """Solve ``system @ x = rhs`` for ``x`` in ``Λ^n``.

    Every unknown is expanded in the monomial basis of ``unknown_signature``
    (default: the system's signature) with even-symbol degree at most
    ``degree`` (default: the largest degree occurring in the inputs).  The
    resulting rational system is solved exactly.  ``parity_shift[j]`` is
    added to the parity of slot ``j`` when grading kernel vectors.
    """
    rows = [list(r) for r in system]
    n = len(rows[0]) if rows else 0
    everything = [x for r in rows for x in r] + list(rhs)
    if not everything:
        raise GrassmannError("empty system")
    sig = everything[0].signature
    usig = unknown_signature or sig
    if degree is None:
        degree = max((x.degree() for x in everything), default=0)
    ubasis = _unknown_basis(usig, degree)
    ubasis_lifted = [b.lift(sig) for b in ubasis]
    # columns: (slot j, unknown monomial k)
    columns = []
    for j in range(n):
        for b in ubasis_lifted:
            columns.append([rows[i][j] * b for i in range(len(rows))])
    keys = _coordinate_keys([y for col in columns for y in col] + list(rhs))
    matrix_rows = []
    b_vec = []
    for i in range(len(rows)):
        for key in keys:
            matrix_rows.append([col[i]._terms.get(key, Fraction(0)) for col in columns])
            b_vec.append(rhs[i]._terms.get(key, Fraction(0)))
    n_cols = len(columns)
    sol = linalg.solve(matrix_rows, b_vec, n_cols) if matrix_rows else [Fraction(0)] * n_cols
    null = linalg.nullspace(matrix_rows, n_cols) if matrix_rows else linalg.nullspace([], n_cols)

    def assemble(coords):
        vec = []
        for j in range(n):
            x = usig.zero()
            for k, b in enumerate(ubasis):
                c = coords[j * len(ubasis) + k]
                if c:
                    x = x + b * c
            vec.append(x)
        return tuple(vec)

    shifts = tuple(parity_shift or (0,) * n)
    kernel_basis = [assemble(v) for v in null]
    kernel = LambdaModuleDescription(
        slots=tuple(slot_names or [f"x{j}" for j in range(n)]),
        basis=kernel_basis,
        graded_dim=_graded(kernel_basis, shifts),
        slot_dims=_slot_dims_if_split(kernel_basis, n, len(ubasis), null),
        slot_parity_shift=shifts,
    )
    if sol is None:
        return LinearSolution(False, None, kernel)
    return LinearSolution(True, assemble(sol), kernel)


def _slot_dims_if_split(basis, n_slots, block, null_vectors):
    if n_slots == 0:
        return ()
    # projection rank per slot; equals the slot decomposition when the kernel splits
    dims = []
    for j in range(n_slots):
        proj = [v[j * block:(j + 1) * block] for v in null_vectors]
        dims.append(linalg.rank(proj) if proj else 0)
    return tuple(dims)


def span_coordinates(vectors: Sequence[Sequence[GrassmannElement]], keys_per_slot: Sequence[list]):
    out = []
    for v in vectors:
        row = []
        for x, keys in zip(v, keys_per_slot):
            row.extend(x._terms.get(k, Fraction(0)) for k in keys)
        out.append(row)
    return out


def module_quotient(generators: Sequence, signature: AlgebraSignature | None = None,
                    n_slots: int | None = None, degree: int = 0,
                    multipliers: Sequence[GrassmannElement] | None = None,
                    slot_names: Sequence[str] | None = None,
                    parity_shift: Sequence[int] | None = None) -> LambdaModuleDescription:
    """Rational basis of ``Λ^k / (Λ-span of generators)``.

    Generators are elements (for ``k = 1``) or tuples of elements.  The
    submodule is spanned over Q by ``generator * m`` for every monomial
    ``m`` of the algebra (with even degree at most ``degree``); pass
    ``multipliers`` to override that set.  The quotient basis consists of
    standard monomial vectors complementary to the submodule.
    """
    gens = [tuple(g) if isinstance(g, (tuple, list)) else (g,) for g in generators]
    if signature is None:
        if not gens:
            raise GrassmannError("signature required when there are no generators")
        signature = gens[0][0].signature
    k = n_slots if n_slots is not None else (len(gens[0]) if gens else 1)
    if multipliers is None:
        multipliers = signature.monomial_basis(degree)
    span = []
    for g in gens:
        if len(g) != k:
            raise GrassmannError("generators have inconsistent lengths")
        for mul in multipliers:
            span.append(tuple(x.lift(signature) * mul for x in g))
    ambient = signature.monomial_basis(max(degree, max((x.degree() for g in gens for x in g), default=0)))
    ambient_keys = [next(iter(b.keys())) for b in ambient]
    extra = _coordinate_keys([x for v in span for x in v])
    keys = ambient_keys + [key for key in extra if key not in set(ambient_keys)]
    rows = span_coordinates(span, [keys] * k)
    n_cols = len(keys) * k
    comp = linalg.complement_columns(rows, n_cols)
    basis = []
    for c in comp:
        j, idx = divmod(c, len(keys))
        vec = [signature.zero()] * k
        vec[j] = GrassmannElement(signature, {keys[idx]: Fraction(1)})
        basis.append(tuple(vec))
    shifts = tuple(parity_shift or (0,) * k)
    slot_dims = tuple(sum(1 for c in comp if c // len(keys) == j) for j in range(k))
    return LambdaModuleDescription(
        slots=tuple(slot_names or [f"x{j}" for j in range(k)]),
        basis=basis,
        graded_dim=_graded(basis, shifts),
        slot_dims=slot_dims,
        slot_parity_shift=shifts,
        notes={"submodule_dim": linalg.rank(rows) if rows else 0},
    )


def submodule_contains(vector: Sequence[GrassmannElement], generators: Sequence,
                       signature: AlgebraSignature, degree: int = 0) -> bool:
    """Is ``vector`` in the Λ-span of ``generators`` (tuples of equal length)?"""
    gens = [tuple(g) if isinstance(g, (tuple, list)) else (g,) for g in generators]
    vector = tuple(vector) if isinstance(vector, (tuple, list)) else (vector,)
    multipliers = signature.monomial_basis(degree)
    span = [tuple(x * m for x in g) for g in gens for m in multipliers]
    keys = _coordinate_keys([x for v in span for x in v] + list(vector))
    rows = span_coordinates(span, [keys] * len(vector))
    target = span_coordinates([vector], [keys] * len(vector))[0]
    return linalg.in_span(target, rows)
