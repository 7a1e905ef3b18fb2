"""Hypothesis strategies for polynomials, rational functions and operators."""

from hypothesis import strategies as st

from ratel.arith import CTX, RatFunc
from ratel.arith.poly import degree


def polys(max_deg: int = 3, vars=("t", "x"), min_terms: int = 0, max_coeff: int = 6):
    exps = [
        (i, j)
        for i in range(max_deg + 1)
        for j in range(max_deg + 1 - i)
        if ("t" in vars or i == 0) and ("x" in vars or j == 0)
    ]
    return st.dictionaries(
        st.sampled_from(exps),
        st.integers(-max_coeff, max_coeff).filter(bool),
        min_size=min_terms,
        max_size=len(exps),
    ).map(lambda d: CTX.from_dict({(0, 0, j, i): c for (i, j), c in d.items()}))


def nonzero_polys(max_deg: int = 3, vars=("t", "x")):
    return polys(max_deg, vars, min_terms=1)


def ratfuncs(max_deg: int = 3, vars=("t", "x")):
    return st.builds(RatFunc, polys(max_deg, vars), nonzero_polys(max_deg, vars))


def x_ratfuncs(max_deg: int = 3):
    """Rational functions whose reduced denominator involves x."""
    return ratfuncs(max_deg).filter(lambda f: degree(f.den, "x") > 0)


def t_ratfuncs(max_deg: int = 2):
    return ratfuncs(max_deg, vars=("t",))
