"""Holonomic functions and sequences in exact arithmetic."""

from .algebra import MultiPoly, RatFunc, poly_gcd, ratfunc_normalize, rational_roots, \
    solve_linear_dependency
from .expr import parse_expr, series_truncated, to_text, atom_lookup

__all__ = ["MultiPoly", "RatFunc", "poly_gcd", "ratfunc_normalize", "rational_roots",
           "solve_linear_dependency", "parse_expr", "series_truncated", "to_text", "atom_lookup"]

__version__ = "0.1.0"
