"""Diagonals of rational power series.

For ``f(t, x)`` regular at the origin with expansion ``sum f_ij t^i x^j``,
the diagonal is ``sum f_ii t^i``.  It equals the coefficient of ``x^-1`` in
``F = f(x, t/x)/x`` viewed as a series in ``t`` with Laurent coefficients
in ``x``.  A ``(D_t, D_x)`` telescoper ``L`` of ``F`` satisfies
``L(F) = D_x(g)``, and ``D_x(g)`` has no ``x^-1`` term, so ``L`` annihilates
the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from flint import fmpq

from .arith.poly import CTX, T, X, Poly, coefficient, coefficients, degree
from .arith.ratfunc import RatFunc
from .arith.series import SeriesVec, series_expand
from .ore import D_KIND, OrePoly
from .telescoping import TelescoperCase, TelescoperResult, find_telescoper

DIFF_CASE = TelescoperCase("dt", "dx")


def _swap_substitute(p: Poly) -> tuple[Poly, int]:
    """``x^d * p(x, t/x)`` and ``d = deg_x p``."""
    d = max(degree(p, "x"), 0)
    out = {}
    for mon, c in zip(p.monoms(), p.coeffs()):
        i, j = int(mon[3]), int(mon[2])  # t^i x^j
        out[(0, 0, i - j + d, j)] = c
    return CTX.from_dict(out), d


def diagonal_substitute(f) -> RatFunc:
    """``F = f(x, t/x) / x`` as a reduced rational function.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.diagonal import diagonal_substitute
    >>> diagonal_substitute(RatFunc(1, 1 - T - X))
    RatFunc(-1, x^2 - x + t)
    """
    f = RatFunc.coerce(f)
    num, dn = _swap_substitute(f.num)
    den, dd = _swap_substitute(f.den)
    # num/x^dn divided by den/x^dd, then by x
    return RatFunc(num * X**dd, den * X ** (dn + 1))


def _check_regular(f: RatFunc) -> None:
    if coefficient(coefficient(f.den, "t", 0), "x", 0).is_zero():
        raise ValueError("not regular at the origin: denominator vanishes at t = x = 0")


def diag_series(f, N: int) -> SeriesVec:
    """Diagonal coefficients ``f_00, ..., f_NN`` by bivariate expansion.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.diagonal import diag_series
    >>> [int(c) for c in diag_series(RatFunc(1, 1 - T - X), 4).coefficients]
    [1, 2, 6, 20, 70]
    """
    f = RatFunc.coerce(f)
    _check_regular(f)
    b = {(int(m[3]), int(m[2])): c for m, c in zip(f.den.monoms(), f.den.coeffs())}
    a = {(int(m[3]), int(m[2])): c for m, c in zip(f.num.monoms(), f.num.coeffs())}
    b00 = b.pop((0, 0))
    inv = 1 / b00
    bterms = [(k, l, c) for (k, l), c in b.items() if k <= N and l <= N]
    c: dict[tuple[int, int], fmpq] = {}
    zero = fmpq(0)
    for i in range(N + 1):
        for j in range(N + 1):
            acc = a.get((i, j), zero)
            for k, l, bc in bterms:
                if k <= i and l <= j:
                    v = c.get((i - k, j - l))
                    if v:
                        acc -= bc * v
            if acc != 0:
                c[(i, j)] = acc * inv
    return SeriesVec(tuple(c.get((i, i), zero) for i in range(N + 1)))


def _laurent_coefficient(a: RatFunc, k: int) -> fmpq:
    """Coefficient of ``x^k`` in the Laurent expansion of ``a(x)`` at ``x = 0``."""
    if a.is_zero():
        return fmpq(0)
    den = a.den
    v = 0
    while coefficient(den, "x", 0).is_zero():
        den = den / X
        v += 1
    # a = num / (x^v den), with den(0) != 0
    target = k + v
    if target < 0:
        return fmpq(0)
    s = series_expand(RatFunc(a.num, den), target, "x")
    return s[target].constant_value()


def residue_series(F, N: int) -> SeriesVec:
    """``[x^-1] F`` as a series in ``t``, from the ``t``-adic expansion of ``F``."""
    F = RatFunc.coerce(F)
    coeffs = series_expand(F, N, "t")
    return SeriesVec(tuple(_laurent_coefficient(a, -1) for a in coeffs))


def diagonal_telescoper(f) -> TelescoperResult:
    """Minimal ``(D_t, D_x)`` telescoper of ``diagonal_substitute(f)``."""
    return find_telescoper(diagonal_substitute(f), DIFF_CASE)


def diagonal_ode(f) -> OrePoly:
    """An operator in ``D_t`` with polynomial coefficients annihilating the diagonal of ``f``.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.diagonal import diagonal_ode
    >>> diagonal_ode(RatFunc(1, 1 - T - X))
    OrePoly([2, 4*t - 1], D)
    """
    f = RatFunc.coerce(f)
    _check_regular(f)
    return diagonal_telescoper(f).L.cleared()


def apply_to_series(L: OrePoly, s: SeriesVec) -> SeriesVec:
    """Coefficients of ``L(s)`` that are determined by the truncation.

    With ``s`` known modulo ``t^(N+1)`` and ``L`` of order ``r`` with
    polynomial coefficients, ``L(s)`` is known modulo ``t^(N+1-r)``.
    """
    if L.kind != D_KIND:
        raise ValueError("series checks need a differential operator")
    coeffs = [c.num for c in L.cleared().coeffs]
    r = len(coeffs) - 1
    M = s.order - r
    out = [fmpq(0)] * max(M + 1, 0)
    deriv = list(s.coefficients)
    for k, p in enumerate(coeffs):
        if k:
            deriv = [deriv[n + 1] * (n + 1) for n in range(len(deriv) - 1)]
        if p.is_zero():
            continue
        for e, c in coefficients(p, "t").items():
            cc = c.leading_coefficient()
            for n in range(e, M + 1):
                out[n] += cc * deriv[n - e]
    return SeriesVec(tuple(out) or (fmpq(0),))


def check_annihilates_series(L: OrePoly, s: SeriesVec) -> bool:
    """Whether ``L(s)`` vanishes to the order fixed by the truncation.

    Examples
    ========

    >>> from ratel.arith import RatFunc, T
    >>> from ratel.arith.series import SeriesVec
    >>> from ratel.ore import OrePoly, D_KIND
    >>> from ratel.diagonal import check_annihilates_series
    >>> check_annihilates_series(OrePoly([-2, 1 - 4 * T], D_KIND), SeriesVec((1, 2, 6, 20, 70)))
    True
    >>> check_annihilates_series(OrePoly([0, 1], D_KIND), SeriesVec((1, 1)))
    False
    """
    r = L.order
    if s.order < r - 1:
        raise ValueError(f"truncation too short: need N >= {r - 1} for an operator of order {r}")
    if s.order < r:
        return True
    return apply_to_series(L, s).is_zero()


@dataclass(frozen=True)
class DiagReport:
    F: RatFunc
    L: OrePoly
    diag_series: SeriesVec
    check_order: int
    residual: SeriesVec
    order_trace: tuple[tuple[int, int], ...] = ()

    @property
    def annihilated(self) -> bool:
        return self.residual.is_zero()


def diagonal_report(f, N: int = 20) -> DiagReport:
    """Telescoper of ``F`` together with a series check of the diagonal."""
    f = RatFunc.coerce(f)
    _check_regular(f)
    res = diagonal_telescoper(f)
    L = res.L.cleared()
    s = diag_series(f, N)
    residual = apply_to_series(L, s) if N >= L.order else SeriesVec((0,))
    return DiagReport(diagonal_substitute(f), L, s, N, residual, res.order_trace)


# ---------------------------------------------------------------------------
# binary words with as many 00 as 01


def stanley_words_count(n: int) -> int:
    """Number of binary words of length ``n`` with equally many ``00`` and ``01`` factors.

    Counts by enumerating all ``2^n`` words.

    Examples
    ========

    >>> from ratel.diagonal import stanley_words_count
    >>> [stanley_words_count(n) for n in range(4)]
    [1, 2, 2, 3]
    """
    if n < 0:
        raise ValueError("length must be nonnegative")
    if n > 22:
        raise ValueError("enumeration is capped at n = 22")
    if n < 2:
        return 2**n
    words = np.arange(2**n, dtype=np.uint32)
    diff = np.zeros(2**n, dtype=np.int32)
    for i in range(n - 1):
        a = (words >> i) & 1
        b = (words >> (i + 1)) & 1
        zero_a = a == 0
        diff += (zero_a & (b == 0)).astype(np.int32)
        diff -= (zero_a & (b == 1)).astype(np.int32)
    return int(np.count_nonzero(diff == 0))


def ez_rational_function() -> RatFunc:
    """``F(t, x) = f(t, x, 1/x)/x`` for the generating function
    ``f(t, y, z) = ((1 - y) t + 1) / ((y - z) t^2 - (1 + y) t + 1)``
    of binary words by the letters ``y`` (marking ``00``) and ``z`` (marking ``01``).
    """
    y = RatFunc(X)
    z = RatFunc(1, X)
    t = RatFunc(T)
    f = ((1 - y) * t + 1) / ((y - z) * t**2 - (1 + y) * t + 1)
    return f / RatFunc(X)


def ez_reference_operator() -> OrePoly:
    """The published second-order operator for the word-count diagonal."""
    t = T
    c2 = -1 + 5 * t - 13 * t**2 + 23 * t**3 - 30 * t**4 + 40 * t**5 - 40 * t**6 + 16 * t**7
    c1 = 80 * t**6 - 168 * t**5 + 152 * t**4 - 88 * t**3 + 24 * t**2 - 2 * t + 2
    c0 = 48 * t**5 - 72 * t**4 + 48 * t**3 - 12 * t**2 - 6 * t
    return OrePoly([c0, c1, c2], D_KIND)


@dataclass(frozen=True)
class EZReport:
    report: DiagReport
    reference: OrePoly
    match: bool
    word_counts: SeriesVec
    words_annihilated: bool
    ordinary_point: bool

    @property
    def verdict(self) -> str:
        return "MATCH" if self.match else "MISMATCH"


def ez_pipeline(n_words: int = 12) -> EZReport:
    """Telescoper for the word-count diagonal, compared with the reference operator.

    The computed operator is normalized (primitive integer coefficients,
    positive leading coefficient of the top term) and compared exactly.  The
    brute-force counts ``s(0..n_words)`` are checked against it, and the
    leading coefficient at ``t = 0`` is inspected: when it is nonzero, ``0``
    is an ordinary point and ``s(0), s(1)`` fix the solution.
    """
    F = ez_rational_function()
    res = find_telescoper(F, DIFF_CASE)
    L = res.L.cleared()
    ref = ez_reference_operator().cleared()
    s = SeriesVec(tuple(stanley_words_count(n) for n in range(n_words + 1)))
    diag = residue_series(F, n_words)
    residual = apply_to_series(L, diag)
    rep = DiagReport(F, L, diag, n_words, residual, res.order_trace)
    lc0 = L.lc().num.subs({"t": 0})
    return EZReport(
        rep,
        ref,
        L == ref,
        s,
        check_annihilates_series(L, s),
        not lc0.is_zero(),
    )


__all__ = [
    "DiagReport", "EZReport", "diagonal_substitute", "diag_series", "residue_series",
    "diagonal_ode", "diagonal_telescoper", "diagonal_report", "apply_to_series",
    "check_annihilates_series", "stanley_words_count", "ez_rational_function",
    "ez_reference_operator", "ez_pipeline",
]
