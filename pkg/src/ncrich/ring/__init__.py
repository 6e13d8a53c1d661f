"""Coefficient rings and sparse linear algebra over them."""

from .bigcomplex import DEFAULT_PRECISION, context, format_complex, parse_complex, to_complex
from .commpoly import CommPoly, MissingSymbolError, beta, commpoly_eval, mu, nu, symbol_name, xi
from .dual import DualVector
from .matrix import (
    RingMatrix,
    char_coeffs,
    matrix_from_json,
    matrix_to_json,
    matrix_unit,
    rank,
    rank_exact,
    rank_numeric,
    to_complex_matrix,
)
from .roots import RationalRoots, RootFindingError, durand_kerner, select_root, univariate_roots

__all__ = [
    "DEFAULT_PRECISION",
    "CommPoly",
    "DualVector",
    "MissingSymbolError",
    "RationalRoots",
    "RingMatrix",
    "RootFindingError",
    "beta",
    "char_coeffs",
    "commpoly_eval",
    "context",
    "durand_kerner",
    "format_complex",
    "matrix_from_json",
    "matrix_to_json",
    "matrix_unit",
    "mu",
    "nu",
    "parse_complex",
    "rank",
    "rank_exact",
    "rank_numeric",
    "select_root",
    "symbol_name",
    "to_complex",
    "to_complex_matrix",
    "univariate_roots",
    "xi",
]
