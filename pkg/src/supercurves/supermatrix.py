"""Free modules of rank p|q over a chart, and graded matrices acting on them.

A module element is written ``v = sum_j e_j v^j`` with the basis vectors on
the left and the component functions on the right; basis vector ``e_j`` is
even for ``j < p`` and odd afterwards.  With this convention an O-linear map
acts by plain matrix multiplication on the component column, and the sign
rules only show up in left multiplication and in odd derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .grassmann import AlgebraSignature, GrassmannElement, GrassmannError

__all__ = ["ModuleElement", "SuperMatrix", "block_parities"]


def block_parities(p: int, q: int) -> tuple[int, ...]:
    return (0,) * p + (1,) * q


@dataclass(frozen=True)
class ModuleElement:
    components: tuple[GrassmannElement, ...]
    basis_parity: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "basis_parity", tuple(self.basis_parity))
        if len(self.components) != len(self.basis_parity):
            raise GrassmannError("component count does not match the rank")
        sigs = {c.signature for c in self.components}
        if len(sigs) > 1:
            raise GrassmannError("components live in different algebras")

    @classmethod
    def basis_vector(cls, signature: AlgebraSignature, rank: tuple[int, int], j: int) -> "ModuleElement":
        par = block_parities(*rank)
        comps = [signature.one() if i == j else signature.zero() for i in range(len(par))]
        return cls(tuple(comps), par)

    @classmethod
    def from_function(cls, f: GrassmannElement) -> "ModuleElement":
        return cls((f,), (0,))

    @property
    def signature(self) -> AlgebraSignature:
        return self.components[0].signature

    @property
    def rank(self) -> tuple[int, int]:
        q = sum(self.basis_parity)
        return len(self.basis_parity) - q, q

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def _check(self, other: "ModuleElement"):
        if self.basis_parity != other.basis_parity:
            raise GrassmannError("rank mismatch")

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(tuple(a + b for a, b in zip(self.components, other.components)),
                             self.basis_parity)

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(tuple(a - b for a, b in zip(self.components, other.components)),
                             self.basis_parity)

    def __neg__(self):
        return ModuleElement(tuple(-a for a in self.components), self.basis_parity)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def parity(self) -> int | None:
        ps = set()
        for c, b in zip(self.components, self.basis_parity):
            if c.is_zero():
                continue
            p = c.parity()
            if p is None:
                return None
            ps.add((p + b) % 2)
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def rmul(self, f: GrassmannElement) -> "ModuleElement":
        """``v * f``: componentwise multiplication on the right."""
        return ModuleElement(tuple(c * f for c in self.components), self.basis_parity)

    def lmul(self, f: GrassmannElement) -> "ModuleElement":
        """``f * v``: f passes each basis vector with the Koszul sign."""
        f0, f1 = f.even_part(), f.odd_part()
        out = []
        for c, b in zip(self.components, self.basis_parity):
            out.append((f0 - f1 if b else f0 + f1) * c)
        return ModuleElement(tuple(out), self.basis_parity)

    def derivative(self, name: str) -> "ModuleElement":
        """Coordinate derivative acting from the left (trivial connection)."""
        odd = self.signature.is_odd(name)
        out = []
        for c, b in zip(self.components, self.basis_parity):
            d = c.derivative(name)
            out.append(-d if (odd and b) else d)
        return ModuleElement(tuple(out), self.basis_parity)

    def map(self, fn: Callable[[GrassmannElement], GrassmannElement]) -> "ModuleElement":
        """Apply a ring homomorphism to every component."""
        return ModuleElement(tuple(fn(c) for c in self.components), self.basis_parity)

    def involves(self, name: str) -> bool:
        return any(c.involves(name) for c in self.components)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


class SuperMatrix:
    """Square matrix on ``O^{p|q}`` with an explicit operator parity.

    Entry ``(i, j)`` of an operator of parity ``P`` has parity
    ``P + |i| + |j|``; ``check_parity`` enforces that pattern.
    """

    __slots__ = ("entries", "rank", "parity")

    def __init__(self, entries: Sequence[Sequence[GrassmannElement]], rank: tuple[int, int],
                 parity: int = 0, check_parity: bool = True):
        self.entries = tuple(tuple(r) for r in entries)
        self.rank = tuple(rank)
        self.parity = parity
        n = sum(rank)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise GrassmannError(f"matrix shape does not match rank {rank}")
        if check_parity and not self.has_parity(parity):
            raise GrassmannError(f"entries violate the parity-{parity} block pattern")

    @property
    def basis_parity(self) -> tuple[int, ...]:
        return block_parities(*self.rank)

    @property
    def signature(self) -> AlgebraSignature:
        return self.entries[0][0].signature

    @property
    def size(self) -> int:
        return len(self.entries)

    def has_parity(self, parity: int) -> bool:
        bp = self.basis_parity
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x.is_zero():
                    continue
                if x.parity() != (parity + bp[i] + bp[j]) % 2:
                    return False
        return True

    @classmethod
    def identity(cls, signature: AlgebraSignature, rank: tuple[int, int]) -> "SuperMatrix":
        n = sum(rank)
        return cls([[signature.one() if i == j else signature.zero() for j in range(n)]
                    for i in range(n)], rank, 0)

    @classmethod
    def zeros(cls, signature: AlgebraSignature, rank: tuple[int, int], parity: int = 0) -> "SuperMatrix":
        n = sum(rank)
        return cls([[signature.zero()] * n for _ in range(n)], rank, parity)

    @classmethod
    def from_columns(cls, columns: Sequence[ModuleElement], parity: int = 0,
                     check_parity: bool = True) -> "SuperMatrix":
        rank = columns[0].rank
        n = len(columns)
        return cls([[columns[j].components[i] for j in range(n)] for i in range(n)], rank, parity,
                   check_parity)

    def column(self, j: int) -> ModuleElement:
        return ModuleElement(tuple(r[j] for r in self.entries), self.basis_parity)

    def columns(self) -> list[ModuleElement]:
        return [self.column(j) for j in range(self.size)]

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return self.rank == other.rank and self.entries == other.entries

    def __hash__(self):
        return hash((self.rank, self.entries))

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                           self.rank, self.parity, check_parity=False)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                           self.rank, self.parity, check_parity=False)

    def __neg__(self):
        return SuperMatrix([[-a for a in r] for r in self.entries], self.rank, self.parity, False)

    def __matmul__(self, other):
        if isinstance(other, ModuleElement):
            if other.basis_parity != self.basis_parity:
                raise GrassmannError("rank mismatch")
            comps = []
            for row in self.entries:
                acc = self.signature.zero()
                for a, v in zip(row, other.components):
                    acc = acc + a * v
                comps.append(acc)
            return ModuleElement(tuple(comps), self.basis_parity)
        if isinstance(other, SuperMatrix):
            if other.rank != self.rank:
                raise GrassmannError("rank mismatch")
            n = self.size
            sig = self.signature
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = sig.zero()
                    for k in range(n):
                        acc = acc + self.entries[i][k] * other.entries[k][j]
                    row.append(acc)
                out.append(row)
            return SuperMatrix(out, self.rank, (self.parity + other.parity) % 2, check_parity=False)
        return NotImplemented

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.entries for x in r)

    def map(self, fn: Callable[[GrassmannElement], GrassmannElement]) -> "SuperMatrix":
        return SuperMatrix([[fn(x) for x in r] for r in self.entries], self.rank, self.parity,
                           check_parity=False)

    def column_derivative(self, name: str) -> "SuperMatrix":
        """Columnwise module derivative (the matrix of ``d_x`` applied to the frame)."""
        return SuperMatrix.from_columns([c.derivative(name) for c in self.columns()],
                                        self.parity, check_parity=False)

    def lmul(self, f: GrassmannElement) -> "SuperMatrix":
        """The operator ``v -> f * (M v)``."""
        return SuperMatrix.from_columns([c.lmul(f) for c in self.columns()],
                                        (self.parity + (f.parity() or 0)) % 2, check_parity=False)

    def nilpotent_part(self) -> "SuperMatrix":
        return self.map(lambda x: x.soul())

    def inverse(self) -> "SuperMatrix":
        """Inverse of an even matrix with constant invertible body.

        The body is inverted by rational elimination and the soul by a
        terminating Neumann series.
        """
        from . import linalg
        n = self.size
        body = []
        for r in self.entries:
            row = []
            for x in r:
                b = x.scalar_body()
                if b is None:
                    raise GrassmannError(f"matrix entry {x} has a non-constant body")
                row.append(b)
            body.append(row)
        aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(body)]
        red, pivots = linalg.rref(aug)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise GrassmannError("matrix body is singular")
        sig = self.signature
        binv = SuperMatrix([[sig.scalar(red[i][n + j]) for j in range(n)] for i in range(n)],
                           self.rank, 0, check_parity=False)
        nil = binv @ self.nilpotent_part()
        ident = SuperMatrix.identity(sig, self.rank)
        result = ident
        term = ident
        for _ in range(len(sig.odd) + 1):
            term = -(term @ nil)
            if term.is_zero():
                break
            result = result + term
        out = result @ binv
        return SuperMatrix(out.entries, self.rank, self.parity, check_parity=False)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.entries) + "]"

    def __repr__(self):
        return f"SuperMatrix({self}, rank={self.rank}, parity={self.parity})"
