"""Polynomials over Q in the variables ``t, x, z, w``.

All polynomials live in a single FLINT context whose generators are ordered
``(w, z, x, t)`` under the graded lexicographic order, so the leading term
reported by FLINT is the leading term for the order ``t < x < z < w``.
Values are plain :class:`flint.fmpq_mpoly` objects; the helpers below add
the variable-by-name conveniences the rest of the package needs.
"""

from __future__ import annotations

from functools import reduce
from typing import NamedTuple

import flint
from flint import fmpq, fmpz

CTX = flint.fmpq_mpoly_ctx.get(("w", "z", "x", "t"), "deglex")
W, Z, X, T = CTX.gens()

Poly = flint.fmpq_mpoly
Rat = fmpq

VARIABLES = ("t", "x", "z", "w")
_INDEX = {"w": 0, "z": 1, "x": 2, "t": 3}
_GENS = {"w": W, "z": Z, "x": X, "t": T}

ZERO = CTX.constant(0)
ONE = CTX.constant(1)


def _check_var(var: str) -> int:
    try:
        return _INDEX[var]
    except KeyError:
        raise ValueError(f"unknown variable {var!r}") from None


def gen(var: str) -> Poly:
    """Return the generator polynomial for ``var``."""
    _check_var(var)
    return _GENS[var]


def as_rat(c) -> fmpq:
    """Coerce ints, strings ``"p/q"`` and FLINT rationals to :class:`fmpq`."""
    if isinstance(c, fmpq):
        return c
    if isinstance(c, (int, fmpz)):
        return fmpq(c)
    if isinstance(c, str):
        if "/" in c:
            p, q = c.split("/")
            return fmpq(int(p), int(q))
        return fmpq(int(c))
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return fmpq(int(c.numerator), int(c.denominator))
    raise TypeError(f"cannot convert {c!r} to a rational")


def const(c) -> Poly:
    """Return the constant polynomial ``c``."""
    return CTX.constant(as_rat(c))


def as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    return const(p)


def degree(p: Poly, var: str) -> int:
    """Degree of ``p`` in ``var``; ``-1`` for the zero polynomial."""
    i = _check_var(var)
    if p.is_zero():
        return -1
    return int(p.degrees()[i])


def total_degree(p: Poly) -> int:
    if p.is_zero():
        return -1
    return max(sum(int(e) for e in m) for m in p.monoms())


def variables(p: Poly) -> set[str]:
    """Variables occurring in ``p``."""
    if p.is_zero():
        return set()
    ds = p.degrees()
    return {v for v, i in _INDEX.items() if ds[i] > 0}


def is_free_of(p: Poly, var: str) -> bool:
    return degree(p, var) <= 0


def coefficients(p: Poly, var: str) -> dict[int, Poly]:
    """Map ``k -> coefficient of var^k`` (coefficients free of ``var``)."""
    i = _check_var(var)
    parts: dict[int, dict] = {}
    for mon, c in zip(p.monoms(), p.coeffs()):
        k = int(mon[i])
        m = list(mon)
        m[i] = 0
        parts.setdefault(k, {})[tuple(m)] = c
    return {k: CTX.from_dict(d) for k, d in parts.items()}


def coefficient(p: Poly, var: str, k: int) -> Poly:
    i = _check_var(var)
    d = {}
    for mon, c in zip(p.monoms(), p.coeffs()):
        if mon[i] == k:
            m = list(mon)
            m[i] = 0
            d[tuple(m)] = c
    return CTX.from_dict(d) if d else ZERO


def leading_coeff(p: Poly, var: str) -> Poly:
    """Leading coefficient of ``p`` regarded as a polynomial in ``var``."""
    return coefficient(p, var, degree(p, var))


def from_coefficients(coeffs: dict[int, Poly], var: str) -> Poly:
    v = gen(var)
    out = ZERO
    for k, c in coeffs.items():
        out += c * v**k
    return out


def rational_content(p: Poly) -> fmpq:
    """Positive rational ``c`` with ``p / c`` integer-primitive."""
    if p.is_zero():
        return fmpq(1)
    cs = p.coeffs()
    num = reduce(lambda a, b: a.gcd(b), (c.p for c in cs))
    den = reduce(lambda a, b: a * b // a.gcd(b), (c.q for c in cs))
    return fmpq(abs(num), den)


def primitive(p: Poly) -> Poly:
    """Integer-primitive associate of ``p`` with positive leading coefficient."""
    if p.is_zero():
        return p
    c = rational_content(p)
    if p.leading_coefficient() < 0:
        c = -c
    return p * (1 / c) if c != 1 else p


def normalizer(p: Poly) -> fmpq:
    """The rational ``c`` with ``primitive(p) == p / c``."""
    c = rational_content(p)
    return -c if p.leading_coefficient() < 0 else c


def substitute(p: Poly, **values) -> Poly:
    """Substitute polynomials for variables, e.g. ``substitute(p, x=X + 1)``."""
    args = [W, Z, X, T]
    for var, val in values.items():
        args[_check_var(var)] = as_poly(val)
    return p.compose(*args)


def shift(p: Poly, var: str, h) -> Poly:
    """``p`` with ``var`` replaced by ``var + h``."""
    if h == 0:
        return p
    return substitute(p, **{var: gen(var) + as_rat(h)})


def scale(p: Poly, var: str, c) -> Poly:
    """``p`` with ``var`` replaced by ``c * var``."""
    c = as_rat(c)
    if c == 1:
        return p
    return substitute(p, **{var: gen(var) * c})


def evaluate(p: Poly, **values) -> Poly:
    """Specialize variables to rational numbers."""
    return p.subs({k: as_rat(v) for k, v in values.items()})


def diff(p: Poly, var: str) -> Poly:
    return p.derivative(var)


def integrate(p: Poly, var: str) -> Poly:
    return p.integral(var)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor, integer-primitive with positive leading coefficient.

    Examples
    ========

    >>> from ratel.arith.poly import X, T, poly_gcd
    >>> poly_gcd(X**2 - T**2, X - T)
    x - t
    >>> poly_gcd(0 * X, 2 * X)
    x
    """
    a, b = as_poly(a), as_poly(b)
    if a.is_zero() and b.is_zero():
        return ZERO
    if a.is_zero():
        return primitive(b)
    if b.is_zero():
        return primitive(a)
    return primitive(a.gcd(b))


def resultant(a: Poly, b: Poly, var: str) -> Poly:
    """Resultant of ``a`` and ``b`` with respect to ``var``.

    If one argument is free of ``var`` the usual convention
    ``res(a, c) = c^deg(a)`` applies.
    """
    a, b = as_poly(a), as_poly(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("undefined resultant")
    if a.is_zero() or b.is_zero():
        return ZERO
    da, db = degree(a, var), degree(b, var)
    if da == 0:
        return a**db
    if db == 0:
        return b**da
    return a.resultant(b, var)


def discriminant(p: Poly, var: str) -> Poly:
    return p.discriminant(var)


def squarefree_decomp(p: Poly, var: str) -> list[tuple[Poly, int]]:
    """Squarefree decomposition of ``p`` with respect to ``var``.

    Returns pairs ``(f_i, m_i)`` with ``m_i`` strictly increasing, the
    ``f_i`` squarefree, pairwise coprime and of positive degree in ``var``.
    The cofactor free of ``var`` is the content and is not listed.

    Examples
    ========

    >>> from ratel.arith.poly import X, squarefree_decomp
    >>> squarefree_decomp(X**3 + X**2, "x")
    [(x + 1, 1), (x, 2)]
    """
    if p.is_zero():
        raise ValueError("squarefree decomposition of zero")
    _, facs = p.factor_squarefree()
    grouped: dict[int, Poly] = {}
    for f, m in facs:
        if degree(f, var) > 0:
            grouped[int(m)] = grouped.get(int(m), ONE) * f
    return [(primitive(grouped[m]), m) for m in sorted(grouped)]


class Factorization(NamedTuple):
    """``content * prod(f**m for f, m in factors)``."""

    content: fmpq
    factors: list[tuple[Poly, int]]

    def expand(self) -> Poly:
        out = const(self.content)
        for f, m in self.factors:
            out *= f**m
        return out


def _factor_key(fm):
    f, m = fm
    return (total_degree(f), str(f), m)


def factor_bivariate(p: Poly) -> Factorization:
    """Irreducible factorization over Q with normalized factors.

    Examples
    ========

    >>> from ratel.arith.poly import X, T, factor_bivariate
    >>> factor_bivariate(X**2 - T**2).factors
    [(x + t, 1), (x - t, 1)]
    """
    if p.is_zero():
        raise ValueError("factorization of zero")
    c, facs = p.factor()
    out = []
    for f, m in facs:
        n = normalizer(f)
        c *= n ** int(m)
        out.append((f * (1 / n), int(m)))
    out.sort(key=_factor_key)
    return Factorization(c, out)


def is_irreducible(p: Poly) -> bool:
    if p.is_zero() or p.is_constant():
        return False
    _, facs = p.factor()
    return len(facs) == 1 and facs[0][1] == 1


def to_univariate(p: Poly, var: str) -> flint.fmpq_poly:
    """Convert a polynomial involving only ``var`` to :class:`fmpq_poly`."""
    if variables(p) - {var}:
        raise ValueError(f"{p} is not univariate in {var}")
    cs = coefficients(p, var)
    n = max(cs, default=-1)
    return flint.fmpq_poly([cs[k].leading_coefficient() if k in cs else 0 for k in range(n + 1)])


def from_univariate(u: flint.fmpq_poly, var: str) -> Poly:
    v = gen(var)
    out = ZERO
    for k, c in enumerate(u.coeffs()):
        if c != 0:
            out += fmpq(c) * v**k
    return out


def rational_roots(p: Poly, var: str) -> list[fmpq]:
    """Distinct rational roots of a nonzero univariate polynomial."""
    u = to_univariate(p, var)
    if u.degree() <= 0:
        return []
    return sorted({fmpq(r) for r, _ in u.roots()})


def content_in(p: Poly, var: str) -> Poly:
    """Gcd of the coefficients of ``p`` viewed as a polynomial in ``var``.

    The result is free of ``var``; this is the content over the ring of the
    remaining variables.
    """
    cs = list(coefficients(p, var).values())
    g = ZERO
    for c in cs:
        g = poly_gcd(g, c)
        if g.is_constant():
            return ONE
    return g


def common_roots_in(p: Poly, var: str) -> list[fmpq]:
    """Rational values of ``var`` at which ``p`` vanishes identically.

    ``p`` may involve other variables; the roots returned are those of the
    gcd of its coefficients with respect to the other variables.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    g = ZERO
    for c in _coeffs_free_of(p, var):
        g = poly_gcd(g, c)
        if g.is_constant():
            return []
    return rational_roots(g, var)


def _coeffs_free_of(p: Poly, var: str) -> list[Poly]:
    # coefficients of p as a polynomial in all variables except var
    i = _check_var(var)
    parts: dict[tuple, dict] = {}
    for mon, c in zip(p.monoms(), p.coeffs()):
        key = tuple(e for j, e in enumerate(mon) if j != i)
        m = [0, 0, 0, 0]
        m[i] = mon[i]
        parts.setdefault(key, {})[tuple(m)] = c
    return [CTX.from_dict(d) for d in parts.values()]
