"""Exact algebra for (1|1) supercurves over a Grassmann algebra.

Submodules: ``grassmann`` (the base algebra and linear algebra over it),
``superfield`` (chart functions, coordinate changes, odd expansions),
``connection`` (flat connections, parallel frames, direct images),
``duality`` (the superdiagonal and the transform), ``linebundles``,
``superelliptic`` (the genus-one family) and ``cli``.
"""

from .connection import ConnectionForm, OneForm, direct_image_module, flat_check, parallel_frame
from .duality import Superdiagonal, psi, tau, tau_inverse, tilde_d
from .grassmann import AlgebraSignature, GrassmannElement, GrassmannError, ParseError, format_element, parse_element
from .superelliptic import (
    EllipticMultiplier,
    EllipticOneForm,
    SuperEllipticCurve,
    classify_curve,
    dual_curve,
    h0_structure,
    h1_structure,
)
from .superfield import CoordinateChange, DiffOperator, expand_odd
from .supermatrix import ModuleElement, SuperMatrix

__all__ = [
    "AlgebraSignature",
    "ConnectionForm",
    "CoordinateChange",
    "DiffOperator",
    "EllipticMultiplier",
    "EllipticOneForm",
    "GrassmannElement",
    "GrassmannError",
    "ModuleElement",
    "OneForm",
    "ParseError",
    "SuperEllipticCurve",
    "SuperMatrix",
    "Superdiagonal",
    "classify_curve",
    "direct_image_module",
    "dual_curve",
    "expand_odd",
    "flat_check",
    "format_element",
    "h0_structure",
    "h1_structure",
    "parallel_frame",
    "parse_element",
    "psi",
    "tau",
    "tau_inverse",
    "tilde_d",
]
