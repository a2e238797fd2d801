"""Exact numeric substrate: rationals, sparse polynomials, Sturm chains, intervals."""

from .interval import RatInterval, interval_eval
from .polynomial import Polynomial, divide_exact, is_identically_zero, poly_arith, poly_eval
from .rational import parse_number, simplest_between
from .sturm import count_roots, count_roots_closed, isolate_roots, sturm_sequence

__all__ = [
    "Polynomial",
    "RatInterval",
    "count_roots",
    "count_roots_closed",
    "divide_exact",
    "interval_eval",
    "is_identically_zero",
    "isolate_roots",
    "parse_number",
    "poly_arith",
    "poly_eval",
    "simplest_between",
    "sturm_sequence",
]
