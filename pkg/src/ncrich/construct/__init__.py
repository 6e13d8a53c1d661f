"""Graded matrix-unit constructions realizing prescribed diagonals of f(A_1, ..., A_m)."""

from .solve import (
    DEFAULT_BOX,
    DEFAULT_RETRIES,
    DEFAULT_TOLERANCE,
    Plan,
    RealizationResult,
    SolveError,
    auto_mode,
    low_rank_witness,
    make_plan,
    realize,
    solve_general,
    solve_homogeneous,
    solve_multilinear,
    solve_plan,
)
from .substitution import (
    NonDiagonalImageError,
    SubstitutionError,
    SymbolicSubstitution,
    build_substitution,
    kosher_circuits,
    symbolic_diagonal,
    top_height,
)
from .verify import VerificationReport, result_from_json, result_to_json, verify_json, verify_realization
from .weights import LeadingPart, WeightError, WeightVector, choose_weights, leading_part, word_phi

__all__ = [
    "DEFAULT_BOX",
    "DEFAULT_RETRIES",
    "DEFAULT_TOLERANCE",
    "LeadingPart",
    "NonDiagonalImageError",
    "Plan",
    "RealizationResult",
    "SolveError",
    "SubstitutionError",
    "SymbolicSubstitution",
    "VerificationReport",
    "WeightError",
    "WeightVector",
    "auto_mode",
    "build_substitution",
    "choose_weights",
    "kosher_circuits",
    "leading_part",
    "low_rank_witness",
    "make_plan",
    "realize",
    "result_from_json",
    "result_to_json",
    "solve_general",
    "solve_homogeneous",
    "solve_multilinear",
    "solve_plan",
    "symbolic_diagonal",
    "top_height",
    "verify_json",
    "verify_realization",
    "word_phi",
]
