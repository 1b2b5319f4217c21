"""Exact arithmetic layer: rationals, polynomials, matrices, roots and recurrences."""

from .matrix import RatMatrix, charpoly, charpoly_cofactor, int_charpoly, poly_of_matrix
from .poly import Rat, UniPoly, X, rat_str, to_rat
from .recurrence import (
    check_recursion,
    generating_denominator,
    generating_numerator,
    minimal_period,
    monic_generating_denominator,
    power_entry_sequence,
    second_differences,
    series_coefficients,
    zero_eigenvalue_order,
)
from .roots import (
    RootError,
    RootInterval,
    compare_roots,
    count_all_real_roots,
    count_real_roots_in,
    isolate_real_roots,
    largest_real_root,
)

__all__ = [
    "Rat",
    "RatMatrix",
    "RootError",
    "RootInterval",
    "UniPoly",
    "X",
    "charpoly",
    "charpoly_cofactor",
    "check_recursion",
    "compare_roots",
    "count_all_real_roots",
    "count_real_roots_in",
    "generating_denominator",
    "generating_numerator",
    "int_charpoly",
    "isolate_real_roots",
    "largest_real_root",
    "minimal_period",
    "monic_generating_denominator",
    "poly_of_matrix",
    "power_entry_sequence",
    "rat_str",
    "second_differences",
    "series_coefficients",
    "to_rat",
    "zero_eigenvalue_order",
]
