"""Line bundles with connection and their transforms, chart by chart.

``transform_line_bundle`` pulls ``d + omega`` back to the superdiagonal,
rewrites it in ``(u, theta, rho)`` coordinates and pushes it forward along
``theta``; the parallel frame of that push-forward is the trivializing
section ``phi0``.  ``closed_form_sequences_check`` verifies the exact
sequences relating nilpotent functions and closed one-forms as rational
linear algebra on polynomials of bounded degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import linalg
from .connection import ConnectionForm, OneForm, direct_image_module
from .duality import Superdiagonal, dual_connection_chart, tilde_d
from .grassmann import AlgebraSignature, GrassmannElement, GrassmannError

__all__ = [
    "LineBundleTransform",
    "SequenceReport",
    "closed_form_sequences_check",
    "split_case_roundtrip",
    "transform_connection",
    "transform_line_bundle",
]


@dataclass
class LineBundleTransform:
    phi0: GrassmannElement            # on Delta, (z, theta, rho) coordinates
    contraction: GrassmannElement     # omega / dtheta = b + rho a
    connection: ConnectionForm        # transformed connection on Xhat, (u, rho)


def transform_connection(conn: ConnectionForm, chart: Superdiagonal):
    """Push the pulled-back connection on ``Delta`` forward to ``Xhat``.

    Returns the :class:`~supercurves.connection.DirectImage`; its frame is
    written in ``(u, theta, rho)`` coordinates.
    """
    dual = dual_connection_chart(conn, chart, conn.rank)
    return direct_image_module(dual, [chart.theta], chart.xhat)


def transform_line_bundle(omega: OneForm, chart: Superdiagonal) -> LineBundleTransform:
    if not omega.is_closed():
        raise GrassmannError(f"one-form {omega} is not closed")
    image = transform_connection(omega.connection(), chart)
    phi0 = chart.coordinates().from_dual(image.frame.A0.entries[0][0])
    return LineBundleTransform(phi0, omega.contraction(chart.delta, chart.rho), image.connection)


def split_case_roundtrip(conn0: ConnectionForm, chart: Superdiagonal):
    """Pull a connection on ``X0`` back to ``X``, transform, push down to ``X0`` again.

    ``conn0`` uses the coordinate ``z`` only.  Returns ``(result, direct)``:
    the round trip through ``Xhat`` (renamed back to ``z``) and the direct
    push-forward of the pullback along ``theta``.
    """
    x0 = chart.base.extend(even=(chart.z,))
    u0 = chart.base.extend(even=(chart.u,))
    pulled = conn0.lift(chart.x, (chart.theta,))
    hat = transform_connection(pulled, chart).connection
    down = direct_image_module(hat, [chart.rho], u0).connection
    rename = {chart.u: x0.gen(chart.z)}
    result = ConnectionForm(x0, down.rank,
                            {chart.z: down.matrix(chart.u).map(lambda f: f.substitute(rename, x0))},
                            (chart.z,))
    direct = direct_image_module(pulled, [chart.theta], x0).connection
    return result, direct


# --------------------------------------------------------------------------
# exact sequences


@dataclass
class SequenceReport:
    name: str
    dimensions: tuple[int, int, int]
    injective: bool
    exact_middle: bool
    surjective: bool
    notes: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.injective and self.exact_middle and self.surjective


def _monomials(sig: AlgebraSignature, degree: int, parity: int | None, nilpotent: bool,
               exclude_odd: Sequence[str] = ()) -> list[GrassmannElement]:
    out = []
    for m in sig.monomial_basis(degree, odd_subset=[n for n in sig.odd if n not in exclude_odd]):
        (mask, _), = m.keys()
        n_odd = bin(mask).count("1")
        if nilpotent and n_odd == 0:
            continue
        if parity is not None and n_odd % 2 != parity:
            continue
        out.append(m)
    return out


def _coordinate_rows(elements: Sequence[GrassmannElement], keys: list) -> list[list]:
    return [e.coordinates(keys) for e in elements]


def _keys(*groups: Sequence[GrassmannElement]) -> list:
    ks = set()
    for g in groups:
        for e in g:
            ks.update(e.keys())
    return sorted(ks, key=repr)


def _check(name: str, left: list, left_map: Callable, middle: list, right_map: Callable,
           right: list) -> SequenceReport:
    left_img = [left_map(x) for x in left]
    right_img = [right_map(x) for x in middle]
    mkeys = _keys(middle, left_img)
    rkeys = _keys(right, right_img)
    left_rows = _coordinate_rows(left_img, mkeys)
    injective = linalg.rank(left_rows) == len(left) if left else True
    # kernel of the right map, as combinations of middle basis vectors
    img_rows = _coordinate_rows(right_img, rkeys)
    n = len(middle)
    transposed = [[img_rows[i][k] for i in range(n)] for k in range(len(rkeys))]
    kernel = linalg.nullspace(transposed, n) if transposed else linalg.nullspace([], n)
    mid_rows = _coordinate_rows(middle, mkeys)
    kernel_vecs = [[sum(c * mid_rows[i][k] for i, c in enumerate(v)) for k in range(len(mkeys))]
                   for v in kernel]
    exact_middle = linalg.same_span(kernel_vecs, left_rows)
    surjective = linalg.same_span(img_rows, _coordinate_rows(right, rkeys))
    return SequenceReport(name, (len(left), len(middle), len(right)), injective, exact_middle, surjective,
                          {"kernel_dim": len(kernel), "image_rank": linalg.rank(img_rows) if img_rows else 0})


def _closed_odd_forms(chart: Superdiagonal, degree: int) -> list[GrassmannElement]:
    """Basis of odd closed ``dz a + dtheta b`` (deg <= degree), as ``b + rho a`` on Delta."""
    x = chart.x
    cands = [OneForm(m, x.zero()) for m in _monomials(x, degree, 0, False)]
    cands += [OneForm(x.zero(), m) for m in _monomials(x, degree, 1, False)]
    derivs = [w.exterior_derivative() for w in cands]
    keys = _keys([d[0] for d in derivs] + [d[1] for d in derivs])
    cols = [d[0].coordinates(keys) + d[1].coordinates(keys) for d in derivs]
    rows = [[c[k] for c in cols] for k in range(2 * len(keys))]
    null = linalg.nullspace(rows, len(cands)) if rows else linalg.nullspace([], len(cands))
    out = []
    for v in null:
        acc = chart.delta.zero()
        for c, w in zip(v, cands):
            if c:
                acc = acc + w.contraction(chart.delta, chart.rho) * c
        out.append(acc)
    return out


def closed_form_sequences_check(chart: Superdiagonal, degree: int = 0) -> list[SequenceReport]:
    """Check the three exact sequences on polynomials of z-degree at most ``degree``.

    1. even nilpotents of ``Xhat`` -> even nilpotents of ``Delta`` -> odd closed forms (by ``d~``);
    2. nilpotents of ``X0`` -> nilpotents of ``X`` -> relative closed forms (by ``dtheta d_theta``);
    3. ``I = rho O_Xhat`` -> ``rho O_X`` -> one-forms on ``X0`` (by ``d~``).
    """
    d, xh, x = chart.delta, chart.xhat, chart.x
    th = chart.theta
    reports = []

    reports.append(_check(
        "nilpotent functions of Xhat -> Delta -> closed one-forms",
        _monomials(xh, degree, 0, True), chart.from_xhat,
        _monomials(d, degree, 0, True), lambda f: tilde_d(f, chart),
        _closed_odd_forms(chart, degree)))

    x0_nil = [m for m in _monomials(x, degree, None, True, exclude_odd=[th])]
    reports.append(_check(
        "nilpotent functions of X0 -> X -> relative closed one-forms",
        x0_nil, lambda f: f,
        _monomials(x, degree, None, True), lambda f: f.derivative(th),
        _monomials(x, degree, None, False, exclude_odd=[th])))

    rho_h = xh.gen(chart.rho)
    rho_d = d.gen(chart.rho)
    ideal = [rho_h * m for m in _monomials(xh, degree, None, False, exclude_odd=[chart.rho])]
    middle = [rho_d * m.lift(d) for m in _monomials(x, degree, None, False)]
    forms_x0 = [rho_d * m.lift(d) for m in _monomials(x, degree, None, False, exclude_odd=[th])]
    reports.append(_check(
        "ideal of X0 in Xhat -> its extension to X -> one-forms on X0",
        ideal, chart.from_xhat, middle, lambda f: tilde_d(f, chart), forms_x0))
    return reports
