"""Computational proof pipeline for the exponential Diophantine equation 3^x - F_n 2^y = 1."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ExpansionExhausted,
    InconsistencyError,
    NonConvergence,
    PrecisionExhausted,
    UndecidableAtPrecision,
    UntrustedTerm,
)
from .numerics import PrecReal, certified_less, dist_nearest_int, make_real  # noqa: E402
from .sequences import fib, is_fibonacci  # noqa: E402
from .search import SearchBox, SolutionTriple, search_box, verify_triple  # noqa: E402

__all__ = [
    "ExpansionExhausted",
    "InconsistencyError",
    "NonConvergence",
    "PrecReal",
    "PrecisionExhausted",
    "SearchBox",
    "SolutionTriple",
    "UndecidableAtPrecision",
    "UntrustedTerm",
    "certified_less",
    "dist_nearest_int",
    "fib",
    "is_fibonacci",
    "make_real",
    "search_box",
    "verify_triple",
]
