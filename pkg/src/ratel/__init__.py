"""Residues, reductions and creative telescoping for bivariate rational functions.

The package decides whether a rational function ``f(t, x)`` admits a
telescoper for each of the nine pairs built from the derivation, the shift
and the q-shift in ``t`` and in ``x``, and computes a minimal telescoper
with its certificate when one exists.

Examples
========

>>> from ratel import RatFunc, X, T, TelescoperCase, find_telescoper
>>> res = find_telescoper(RatFunc(1, X**2 - T), TelescoperCase("dt", "dx"))
>>> res.L
OrePoly([(1/2)/(t), 1], D)
"""

from .arith import RatFunc, SeriesVec, T, X, fmpq
from .diagonal import (
    check_annihilates_series,
    diag_series,
    diagonal_ode,
    diagonal_substitute,
    ez_pipeline,
    stanley_words_count,
)
from .frontend import parse_operator, parse_ratfunc, run_cli
from .ore import D_KIND, S_KIND, OreKind, OrePoly, gcrd, lclm, ore_apply, q_kind, rational_solutions
from .reduction import (
    ResidualForm,
    ResidueData,
    abramov_reduce,
    dispersion,
    hermite_reduce,
    is_exact,
    q_dispersion,
    q_reduce,
    reduce,
    residues,
)
from .telescoping import (
    NoTelescoperError,
    OrderBoundExceeded,
    TelescoperCase,
    classify_factor,
    exists_telescoper,
    find_telescoper,
    is_potential_telescoper,
    minimal_annihilator_diff,
    verify_telescoper,
    witness_for_operator,
)

__version__ = "0.1.0"

__all__ = [
    "RatFunc", "SeriesVec", "T", "X", "fmpq",
    "OreKind", "OrePoly", "D_KIND", "S_KIND", "q_kind", "gcrd", "lclm", "ore_apply",
    "rational_solutions",
    "ResidualForm", "ResidueData", "reduce", "hermite_reduce", "abramov_reduce", "q_reduce",
    "is_exact", "residues", "dispersion", "q_dispersion",
    "TelescoperCase", "NoTelescoperError", "OrderBoundExceeded", "classify_factor",
    "exists_telescoper", "find_telescoper", "verify_telescoper", "minimal_annihilator_diff",
    "is_potential_telescoper", "witness_for_operator",
    "diagonal_substitute", "diag_series", "diagonal_ode", "check_annihilates_series",
    "stanley_words_count", "ez_pipeline",
    "parse_ratfunc", "parse_operator", "run_cli",
]
