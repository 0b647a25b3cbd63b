"""Exact arithmetic: fields, polynomials, matrices and local symbols."""

from .fields import GF, QQ, BaseField, FieldError, FpElement, parse_field, squarefree_part
from .hilbert import REAL, PlaceError, hilbert_symbol, relevant_places
from .matrix import (
    DimensionError,
    Matrix,
    column_space_basis,
    eval_poly_at_matrix,
    kernel_basis,
    mat_adjugate,
    mat_charpoly,
    mat_det,
    mat_inverse,
    rank,
    rref,
)
from .poly import (
    LaurentPoly,
    LaurentRing,
    NormalizationError,
    NotDivisibleError,
    PolyRing,
    UniPoly,
    ZeroDivisorError,
    laurent_normalize,
    poly_divmod,
)

__all__ = [
    "GF", "QQ", "BaseField", "FieldError", "FpElement", "parse_field", "squarefree_part",
    "REAL", "PlaceError", "hilbert_symbol", "relevant_places",
    "DimensionError", "Matrix", "column_space_basis", "eval_poly_at_matrix", "kernel_basis",
    "mat_adjugate", "mat_charpoly", "mat_det", "mat_inverse", "rank", "rref",
    "LaurentPoly", "LaurentRing", "NormalizationError", "NotDivisibleError", "PolyRing",
    "UniPoly", "ZeroDivisorError", "laurent_normalize", "poly_divmod",
]
