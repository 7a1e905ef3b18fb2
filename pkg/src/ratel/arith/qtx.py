"""Univariate polynomial arithmetic over a rational function field.

A polynomial in ``var`` whose coefficients are rational functions of the
remaining variables is stored as a :class:`RatFunc` whose denominator is
free of ``var``.  Division uses fraction-free pseudo-division on the
numerators so that no intermediate fractions are formed.
"""

from __future__ import annotations

from .poly import ONE, ZERO, Poly, coefficient, degree, gen, poly_gcd
from .ratfunc import RatFunc


def check_poly(a: RatFunc, var: str) -> None:
    if degree(a.den, var) > 0:
        raise ValueError(f"{a} is not a polynomial in {var}")


def pdeg(a: RatFunc, var: str) -> int:
    """Degree in ``var`` of a polynomial over the coefficient field."""
    return degree(a.num, var)


def pcoeff(a: RatFunc, var: str, k: int) -> RatFunc:
    return RatFunc(coefficient(a.num, var, k), a.den)


def plc(a: RatFunc, var: str) -> RatFunc:
    return pcoeff(a, var, pdeg(a, var))


def pcoeffs(a: RatFunc, var: str) -> list[RatFunc]:
    """Dense coefficient list, lowest degree first."""
    return [pcoeff(a, var, k) for k in range(pdeg(a, var) + 1)]


def _pseudo_divmod(an: Poly, bn: Poly, var: str) -> tuple[Poly, Poly, Poly]:
    # scale * an = q * bn + r with scale free of var
    n = degree(bn, var)
    lcb = coefficient(bn, var, n)
    v = gen(var)
    q, r, scale = ZERO, an, ONE
    lcb_const = lcb.is_constant()
    while True:
        m = degree(r, var)
        if m < n:
            break
        lcr = coefficient(r, var, m)
        mono = v ** (m - n)
        if lcb_const:
            c = lcr * (1 / lcb.leading_coefficient())
            r = r - c * mono * bn
            q = q + c * mono
            continue
        g = lcr.gcd(lcb)
        lr, lb = lcr / g, lcb / g
        r = r * lb - lr * mono * bn
        q = q * lb + lr * mono
        scale = scale * lb
    return q, r, scale


def pdivmod(a: RatFunc, b: RatFunc, var: str) -> tuple[RatFunc, RatFunc]:
    """Euclidean division ``a = q*b + r`` with ``deg r < deg b`` in ``var``."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if pdeg(a, var) < pdeg(b, var):
        return RatFunc(), a
    q, r, scale = _pseudo_divmod(a.num, b.num, var)
    # a.num/a.den = (q/scale) * b.num/(a.den) + r/(scale*a.den)
    return RatFunc(q * b.den, scale * a.den), RatFunc(r, scale * a.den)


def prem(a: RatFunc, b: RatFunc, var: str) -> RatFunc:
    return pdivmod(a, b, var)[1]


def pquo(a: RatFunc, b: RatFunc, var: str) -> RatFunc:
    return pdivmod(a, b, var)[0]


def pinvert(a: RatFunc, m: RatFunc, var: str) -> RatFunc:
    """Inverse of ``a`` modulo ``m`` in ``K[var]`` with ``K`` the coefficient field."""
    r0, r1 = m, prem(a, m, var)
    s0, s1 = RatFunc(), RatFunc(1)
    while not r1.is_zero():
        q, r = pdivmod(r0, r1, var)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if pdeg(r0, var) != 0:
        raise ZeroDivisionError(f"{a} is not invertible modulo {m}")
    return prem(s0 / r0, m, var)


def pgcd(a: RatFunc, b: RatFunc, var: str) -> Poly:
    """Gcd in ``K[var]`` returned as a primitive polynomial."""
    return poly_gcd(a.num, b.num)


def pmulmod(a: RatFunc, b: RatFunc, m: RatFunc, var: str) -> RatFunc:
    return prem(a * b, m, var)


def u_adic(a: RatFunc, u: RatFunc, var: str, n: int) -> list[RatFunc]:
    """Digits ``a_0, ..., a_{n-1}`` with ``a = sum a_i u^i`` and ``deg a_i < deg u``."""
    out = []
    for _ in range(n):
        a, r = pdivmod(a, u, var)
        out.append(r)
    if not a.is_zero():
        raise ValueError("u-adic expansion needs more digits")
    return out
