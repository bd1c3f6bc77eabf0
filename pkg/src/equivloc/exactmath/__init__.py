"""Exact arithmetic: rationals, polynomials, Laurent polynomials, linear algebra."""

from .laurent import LaurentUnivariate, laurent_from_ratio
from .linalg import (
    RationalMatrix,
    determinant,
    rational_nullspace,
    rational_rank,
    row_spaces_equal,
    rref,
)
from .parse import parse_polynomial
from .polynomial import (
    EVERY_DEGREE,
    LinearForm,
    MultiPolynomial,
    divide_by_linear,
    divide_by_linear_power,
    is_homogeneous,
    monomial_count,
    monomials,
    poly_arith,
)
from .rational import Rational, as_rational, clear_denominators, format_rational, primitive_integer_vector

__all__ = [
    "EVERY_DEGREE",
    "LaurentUnivariate",
    "LinearForm",
    "MultiPolynomial",
    "Rational",
    "RationalMatrix",
    "as_rational",
    "clear_denominators",
    "determinant",
    "divide_by_linear",
    "divide_by_linear_power",
    "format_rational",
    "is_homogeneous",
    "laurent_from_ratio",
    "monomial_count",
    "monomials",
    "parse_polynomial",
    "poly_arith",
    "primitive_integer_vector",
    "rational_nullspace",
    "rational_rank",
    "row_spaces_equal",
    "rref",
]
