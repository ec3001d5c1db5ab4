"""Seeded random elements, sections and flat connections for property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .connection import ConnectionForm
from .grassmann import AlgebraSignature, GrassmannElement
from .supermatrix import ModuleElement, SuperMatrix, block_parities

__all__ = [
    "random_element",
    "random_flat_connection",
    "random_matrix",
    "random_section",
]

_COEFFS = [Fraction(n, d) for n in range(-3, 4) if n for d in (1, 2)]


def _odd_count(m: GrassmannElement) -> int:
    (mask, _), = m.keys()
    return bin(mask).count("1")


def random_element(sig: AlgebraSignature, rng: random.Random, parity: int | None = None,
                   max_terms: int = 4, max_degree: int = 2, nilpotent: bool = False,
                   exclude: Sequence[str] = ()) -> GrassmannElement:
    """Sum of up to ``max_terms`` monomials with small rational coefficients.

    ``exclude`` removes generators (odd or even) from the pool.
    """
    odd = [n for n in sig.odd if n not in exclude]
    even = [n for n in sig.even if n not in exclude]
    pool = sig.monomial_basis(max_degree, odd_subset=odd, even_subset=even)
    if parity is not None:
        pool = [m for m in pool if _odd_count(m) % 2 == parity]
    if nilpotent:
        pool = [m for m in pool if _odd_count(m) > 0]
    out = sig.zero()
    if not pool:
        return out
    for m in rng.sample(pool, min(len(pool), rng.randint(1, max_terms))):
        out = out + m * rng.choice(_COEFFS)
    return out


def random_section(sig: AlgebraSignature, rank: tuple[int, int], rng: random.Random,
                   parity: int | None = 0, **kw) -> ModuleElement:
    """Homogeneous section ``sum e_j v^j``; component ``j`` has parity ``parity + |e_j|``."""
    bp = block_parities(*rank)
    comps = [random_element(sig, rng, None if parity is None else (parity + p) % 2, **kw) for p in bp]
    return ModuleElement(tuple(comps), bp)


def random_matrix(sig: AlgebraSignature, rank: tuple[int, int], rng: random.Random, parity: int = 0,
                  **kw) -> SuperMatrix:
    bp = block_parities(*rank)
    rows = [[random_element(sig, rng, (parity + bi + bj) % 2, **kw) for bj in bp] for bi in bp]
    return SuperMatrix(rows, rank, parity)


def random_flat_connection(sig: AlgebraSignature, rank: tuple[int, int], rng: random.Random,
                           z: str = "z", theta: str = "theta", nilpotent: bool = True,
                           max_degree: int = 1) -> ConnectionForm:
    """Gauge transform of a connection pulled back from the ``z`` line.

    ``Omega_z`` is theta-free and ``Omega_theta = 0`` (automatically flat);
    the gauge matrix is ``1 + N`` with ``N`` even and nilpotent, so the body
    of the result is the body of the base connection.
    """
    base = random_matrix(sig, rank, rng, 0, exclude=(theta,), nilpotent=nilpotent,
                         max_degree=max_degree, max_terms=2)
    conn = ConnectionForm(sig, rank, {z: base}, (z, theta))
    n = random_matrix(sig, rank, rng, 0, nilpotent=True, max_degree=max_degree, max_terms=2)
    return conn.gauge(SuperMatrix.identity(sig, rank) + n)
