"""Independent oracles: a naive Grassmann algebra and sympy linear algebra.

Elements are dicts ``{tuple_of_generator_names: Fraction}``; products are
computed by concatenating words and bubble-sorting them, counting swaps.
Nothing here imports the library's arithmetic.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def normalize(word, order):
    w = list(word)
    if len(set(w)) != len(w):
        return None, 0
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if order.index(w[j]) > order.index(w[j + 1]):
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
    return tuple(w), sign


def mul(x, y, order):
    out = {}
    for a, ca in x.items():
        for b, cb in y.items():
            w, s = normalize(a + b, order)
            if w is None:
                continue
            out[w] = out.get(w, 0) + s * ca * cb
    return {k: v for k, v in out.items() if v}


def add(*xs):
    out = {}
    for x in xs:
        for k, v in x.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def scale(x, c):
    return {k: v * c for k, v in x.items() if v * c}


def basis(order):
    """All words in increasing order, by length then position."""
    out = []
    for r in range(len(order) + 1):
        out.extend(itertools.combinations(order, r))
    return out


def gen(name):
    return {(name,): Fraction(1)}


ONE = {(): Fraction(1)}


def rank(vectors):
    if not vectors:
        return 0
    return sympy.Matrix(vectors).rank()


def nullspace_dim(columns, n_rows):
    """Dimension of the kernel of the matrix whose columns are given."""
    if not columns:
        return 0
    m = sympy.Matrix([[c[i] for c in columns] for i in range(n_rows)])
    return len(m.nullspace())


def to_reference(x):
    """Convert a library element (no even symbols) to a reference dict."""
    sig = x.signature
    out = {}
    for (mask, exps), c in x.items():
        assert not any(exps), "reference algebra has no even symbols"
        out[tuple(n for i, n in enumerate(sig.odd) if mask >> i & 1)] = c
    return out


def substitute(x, images, order):
    """Apply the algebra map sending each generator to ``images.get(g, gen(g))``."""
    out = {}
    for word, c in x.items():
        acc = ONE
        for g in word:
            acc = mul(acc, images.get(g, gen(g)), order)
        out = add(out, scale(acc, c))
    return out


def constant_cohomology(base_odd, chart_odd, shifts):
    """Graded dims of kernel and cokernel of ``F -> F o S - F`` on constant functions.

    Constant functions are the whole Grassmann algebra on ``base_odd`` and the
    chart's odd coordinates; ``shifts`` maps a chart coordinate ``x`` to the
    reference element ``s`` with ``S(x) = x + s``.  The map preserves parity,
    so kernel and cokernel are computed one parity at a time.
    """
    order = list(base_odd) + list(chart_odd)
    images = {x: add(gen(x), s) for x, s in shifts.items()}
    words = basis(order)
    h0, h1 = [0, 0], [0, 0]
    for p in (0, 1):
        block = [w for w in words if len(w) % 2 == p]
        cols = []
        for w in block:
            img = add(substitute({w: Fraction(1)}, images, order), {w: Fraction(-1)})
            cols.append([img.get(v, 0) for v in block])
        r = rank(cols)
        h0[p] = len(block) - r
        h1[p] = len(block) - r
    return tuple(h0), tuple(h1)
