"""Exact arithmetic substrates: Galois fields, rational functions, truncated series."""
from .exponent import INF, Infinity, PExponent, exponent_from_json, exponent_to_json
from .gf import GaloisField, GaloisFieldElement, gf_frobenius, gf_make, is_irreducible, is_prime
from .linalg import SingularMatrixError
from .maps import as_root_descent, ts_as_root, wp_apply
from .parse import SeriesSyntaxError, parse_series, required_cap
from .ratfunc import Place, Poly, RationalFunction, coset_intersect, residue, rf_valuation
from .series import PerfectionCapError, PrecisionError, SeriesRing, TruncatedSeries

__all__ = [
    "INF", "Infinity", "PExponent", "exponent_from_json", "exponent_to_json",
    "GaloisField", "GaloisFieldElement", "gf_frobenius", "gf_make", "is_irreducible", "is_prime",
    "SingularMatrixError", "as_root_descent", "ts_as_root", "wp_apply",
    "SeriesSyntaxError", "parse_series", "required_cap",
    "Place", "Poly", "RationalFunction", "coset_intersect", "residue", "rf_valuation",
    "PerfectionCapError", "PrecisionError", "SeriesRing", "TruncatedSeries",
]
