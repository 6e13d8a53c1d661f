"""Diagonal and low-rank values of noncommutative polynomials on matrices."""

from .construct import low_rank_witness, realize, verify_realization
from .freealg import NcPoly, ParseError, classify, degrees, evaluate, parse
from .transdeg import centrality_test, char_coeff_jacobian, pi_test, specialization_check

__all__ = [
    "NcPoly",
    "ParseError",
    "centrality_test",
    "char_coeff_jacobian",
    "classify",
    "degrees",
    "evaluate",
    "low_rank_witness",
    "parse",
    "pi_test",
    "realize",
    "specialization_check",
    "verify_realization",
]
