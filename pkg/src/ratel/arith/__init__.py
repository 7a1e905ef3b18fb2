"""Exact arithmetic: rationals, polynomials, rational functions and series."""

from flint import fmpq

from .poly import (
    CTX,
    ONE,
    T,
    W,
    X,
    Z,
    ZERO,
    Factorization,
    Poly,
    Rat,
    as_poly,
    as_rat,
    coefficient,
    coefficients,
    const,
    degree,
    factor_bivariate,
    gen,
    is_irreducible,
    poly_gcd,
    primitive,
    resultant,
    squarefree_decomp,
    variables,
)
from .ratfunc import RatFunc
from .series import SeriesVec, series_expand, series_of

__all__ = [
    "CTX", "ONE", "T", "W", "X", "Z", "ZERO", "Factorization", "Poly", "Rat",
    "RatFunc", "SeriesVec", "as_poly", "as_rat", "coefficient", "coefficients",
    "const", "degree", "factor_bivariate", "fmpq", "gen", "is_irreducible",
    "poly_gcd", "primitive", "resultant", "series_expand", "series_of",
    "squarefree_decomp", "variables",
]
