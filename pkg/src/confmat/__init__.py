"""Exact computations with matroid realizations and their configuration polynomials."""

from __future__ import annotations

from .configuration import (
    Realization,
    config_form,
    config_poly,
    contract,
    cremona_transform,
    delete,
    det_form,
    direct_sum,
    dual,
    elementary_quotient,
    extend_quotient,
    jacobian_ideal,
    minors_ideal,
    quotient_poly_formula,
    restrict,
)
from .errors import ConfmatError, ResourceLimit
from .fields import GF, QQ, Scalar, is_square, parse_field
from .groebner import (
    BlockElim,
    DegRevLex,
    Ideal,
    codimension,
    eliminate,
    groebner_basis,
    ideal_equal,
    ideal_intersect,
    ideal_member,
    ideal_quotient,
    krull_dimension,
    normal_form,
    radical_member,
    saturate,
)
from .linalg import Matrix, det, kernel_basis, rank, row_basis, rref
from .matroid import MatroidView
from .poly import Poly, PolyRing, partial_derivative, proportionality, span_membership

__all__ = [
    "BlockElim", "ConfmatError", "DegRevLex", "GF", "Ideal", "Matrix", "MatroidView", "Poly",
    "PolyRing", "QQ", "Realization", "ResourceLimit", "Scalar", "codimension", "config_form",
    "config_poly", "contract", "cremona_transform", "delete", "det", "det_form", "direct_sum", "dual",
    "elementary_quotient", "eliminate", "extend_quotient", "groebner_basis", "ideal_equal",
    "ideal_intersect", "ideal_member", "ideal_quotient", "is_square", "jacobian_ideal",
    "kernel_basis", "krull_dimension", "minors_ideal", "normal_form", "parse_field",
    "partial_derivative", "proportionality", "quotient_poly_formula", "radical_member", "rank",
    "restrict", "row_basis", "rref", "saturate", "span_membership",
]
