"""Hypothesis strategies for Grassmann elements."""

from __future__ import annotations

from hypothesis import strategies as st

from supercurves.grassmann import AlgebraSignature

SMALL = AlgebraSignature(odd=("e1", "e2", "e3", "e4"), even=("t",))

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)


@st.composite
def elements(draw, sig=SMALL, parity=None, max_degree=2, max_terms=5, nilpotent=False):
    pool = sig.monomial_basis(max_degree)
    if parity is not None:
        pool = [m for m in pool if m.parity() == parity]
    if nilpotent:
        pool = [m for m in pool if _odd_degree(m) > 0]
    terms = draw(st.lists(st.sampled_from(pool), max_size=max_terms, unique_by=repr))
    out = sig.zero()
    for m in terms:
        out = out + m * draw(coefficients)
    return out


def _odd_degree(m):
    (mask, _), = m.keys()
    return bin(mask).count("1")


def homogeneous(sig=SMALL, **kw):
    return st.integers(0, 1).flatmap(lambda p: elements(sig, parity=p, **kw))


