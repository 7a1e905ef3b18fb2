"""Ore polynomials in ``D_t``, ``S_t`` and ``Q_t`` over Q(t).

An :class:`OrePoly` ``e_0 + e_1*d + ... + e_r*d^r`` has rational function
coefficients in ``t`` written to the left of the powers of ``d``.  The
commutation rules are

* ``D_t * a = a * D_t + a'``
* ``S_t * a(t) = a(t+1) * S_t``
* ``Q_t * a(t) = a(q t) * Q_t``
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from flint import fmpq

from .arith.linalg import nullspace_q, nullspace_rf
from .arith.poly import (
    ONE,
    T,
    ZERO,
    Poly,
    as_rat,
    coefficient,
    coefficients,
    common_roots_in,
    degree,
    factor_bivariate,
    gen,
    poly_gcd,
    primitive,
    rational_content,
    rational_roots,
    resultant,
    substitute,
    Z,
)
from .arith.ratfunc import RatFunc

DERIVATION = "D"
SHIFT = "S"
QSHIFT = "Q"


def check_q(q) -> fmpq:
    """Validate a concrete q: a rational different from 0, 1 and -1."""
    if q is None:
        raise ValueError("q is required for q-shift operators")
    q = as_rat(q)
    if q == 0 or q == 1 or q == -1:
        raise ValueError(f"invalid parameter q = {q}: need q not in {{0, 1, -1}}")
    return q


@dataclass(frozen=True)
class OreKind:
    """Operator kind: ``D`` (derivation), ``S`` (shift) or ``Q`` (q-shift)."""

    tag: str
    q: fmpq | None = None

    def __post_init__(self):
        if self.tag not in (DERIVATION, SHIFT, QSHIFT):
            raise ValueError(f"unknown operator kind {self.tag!r}")
        if self.tag == QSHIFT:
            object.__setattr__(self, "q", check_q(self.q))
        elif self.q is not None:
            object.__setattr__(self, "q", None)

    @property
    def symbol(self) -> str:
        return {DERIVATION: "Dt", SHIFT: "St", QSHIFT: "Qt"}[self.tag]

    def sigma(self, a: RatFunc, n: int = 1) -> RatFunc:
        """The automorphism ``a(t) -> a(t+n)`` or ``a(q^n t)``; identity for D."""
        if n == 0 or self.tag == DERIVATION or a.is_free_of("t"):
            return a
        if self.tag == SHIFT:
            return a.shift("t", n)
        return a.scale("t", self.q**n)

    def act(self, f: RatFunc, var: str = "t") -> RatFunc:
        """Apply the operator symbol once to ``f``."""
        if self.tag == DERIVATION:
            return f.diff(var)
        if f.is_free_of(var):
            return f
        if self.tag == SHIFT:
            return f.shift(var, 1)
        return f.scale(var, self.q)


D_KIND = OreKind(DERIVATION)
S_KIND = OreKind(SHIFT)


def q_kind(q) -> OreKind:
    return OreKind(QSHIFT, as_rat(q))


class OrePoly:
    """Skew polynomial ``sum(coeffs[i] * d^i)``.

    Examples
    ========

    >>> from ratel.ore import OrePoly, D_KIND
    >>> from ratel.arith import RatFunc, T
    >>> D = OrePoly.gen(D_KIND)
    >>> D * OrePoly([RatFunc(T)], D_KIND)
    OrePoly([1, t], D)
    """

    __slots__ = ("kind", "coeffs")

    def __init__(self, coeffs: Sequence, kind: OreKind):
        cs = [RatFunc.coerce(c) for c in coeffs]
        for c in cs:
            if not c.is_free_of("x") or not c.is_free_of("z") or not c.is_free_of("w"):
                raise ValueError(f"operator coefficient {c} must depend on t only")
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("OrePoly is immutable")

    @classmethod
    def gen(cls, kind: OreKind) -> "OrePoly":
        return cls([0, 1], kind)

    @classmethod
    def scalar(cls, c, kind: OreKind) -> "OrePoly":
        return cls([c], kind)

    @property
    def order(self) -> int:
        """Order, ``-1`` for the zero operator."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> RatFunc:
        return self.coeffs[-1]

    def coeff(self, i: int) -> RatFunc:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else RatFunc()

    def _check(self, other: "OrePoly"):
        if not isinstance(other, OrePoly):
            raise TypeError(f"expected an OrePoly, got {type(other).__name__}")
        if other.kind != self.kind:
            raise ValueError(f"operator kind mismatch: {self.kind} vs {other.kind}")

    def __add__(self, other):
        if not isinstance(other, OrePoly):
            other = OrePoly.scalar(other, self.kind)
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return OrePoly([self.coeff(i) + other.coeff(i) for i in range(n)], self.kind)

    __radd__ = __add__

    def __neg__(self):
        return OrePoly([-c for c in self.coeffs], self.kind)

    def __sub__(self, other):
        if not isinstance(other, OrePoly):
            other = OrePoly.scalar(other, self.kind)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, OrePoly):
            return ore_mul(self, other)
        return ore_mul(self, OrePoly.scalar(other, self.kind))

    def __rmul__(self, other):
        c = RatFunc.coerce(other)
        return OrePoly([c * a for a in self.coeffs], self.kind)

    def __pow__(self, n: int):
        out = OrePoly.scalar(1, self.kind)
        for _ in range(int(n)):
            out = ore_mul(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, OrePoly):
            return NotImplemented
        return self.kind == other.kind and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.kind, self.coeffs))

    def __repr__(self):
        return f"OrePoly([{', '.join(str(c) for c in self.coeffs)}], {self.kind.tag})"

    def __call__(self, f) -> RatFunc:
        return ore_apply(self, f)

    def monic(self) -> "OrePoly":
        if self.is_zero():
            return self
        inv = self.lc().inverse()
        return OrePoly([inv * c for c in self.coeffs], self.kind)

    def cleared(self) -> "OrePoly":
        """Left multiple by a rational function with primitive polynomial coefficients.

        The coefficients are integer polynomials in ``t`` without common
        factor and the leading coefficient of the highest-order term is
        positive.
        """
        if self.is_zero():
            return self
        den = ONE
        for c in self.coeffs:
            den = den * c.den / den.gcd(c.den)
        polys = [c.num * (den / c.den) for c in self.coeffs]
        g = polys[-1]
        for p in polys[:-1]:
            if not p.is_zero():
                g = g.gcd(p)
        if not g.is_constant():
            polys = [p / g for p in polys]
        cont = fmpq(0)
        for p in polys:
            if not p.is_zero():
                c = rational_content(p)
                cont = c if cont == 0 else _rat_gcd(cont, c)
        scale = (-1 if polys[-1].leading_coefficient() < 0 else 1) / cont
        return OrePoly([RatFunc(p * scale) for p in polys], self.kind)

    def polynomial_coeffs(self) -> list[Poly]:
        """Coefficients of :meth:`cleared` as polynomials."""
        return [c.num for c in self.cleared().coeffs]


def _rat_gcd(a: fmpq, b: fmpq) -> fmpq:
    num = a.p.gcd(b.p)
    den = a.q * b.q // a.q.gcd(b.q)
    return fmpq(num, den)


def _skew_term(kind: OreKind, i: int, b: RatFunc) -> list[RatFunc]:
    """Coefficients of ``d^i * b`` as an operator."""
    if kind.tag == DERIVATION:
        out = [RatFunc()] * (i + 1)
        deriv = b
        for k in range(i + 1):
            if deriv.is_zero():
                break
            out[i - k] = deriv * comb(i, k)
            deriv = deriv.diff("t")
        return out
    out = [RatFunc()] * (i + 1)
    out[i] = kind.sigma(b, i)
    return out


def ore_mul(A: OrePoly, B: OrePoly) -> OrePoly:
    """Noncommutative product ``A * B``.

    Examples
    ========

    >>> from ratel.ore import OrePoly, S_KIND, ore_mul
    >>> from ratel.arith import T
    >>> ore_mul(OrePoly.gen(S_KIND), OrePoly([T], S_KIND))
    OrePoly([0, t + 1], S)
    """
    A._check(B)
    if A.is_zero() or B.is_zero():
        return OrePoly([], A.kind)
    out = [RatFunc()] * (A.order + B.order + 1)
    for i, a in enumerate(A.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(B.coeffs):
            if b.is_zero():
                continue
            for k, c in enumerate(_skew_term(A.kind, i, b)):
                if not c.is_zero():
                    out[k + j] = out[k + j] + a * c
    return OrePoly(out, A.kind)


def ore_apply(A: OrePoly, f, var: str = "t") -> RatFunc:
    """Apply ``A`` to a rational function; the operator acts on ``var``."""
    f = RatFunc.coerce(f)
    out = RatFunc()
    cur = f
    for i, c in enumerate(A.coeffs):
        if i > 0:
            cur = A.kind.act(cur, var)
        if not c.is_zero():
            out = out + c * cur
    return out


def ore_rdiv(A: OrePoly, B: OrePoly) -> tuple[OrePoly, OrePoly]:
    """Right division ``A = Q*B + R`` with ``order(R) < order(B)``."""
    A._check(B)
    if B.is_zero():
        raise ZeroDivisionError("right division by the zero operator")
    kind = A.kind
    n = B.order
    lcb = B.lc()
    quo = [RatFunc()] * max(A.order - n + 1, 0)
    R = A
    while R.order >= n:
        m = R.order
        c = R.lc() / kind.sigma(lcb, m - n)
        quo[m - n] = c
        term = [RatFunc()] * (m - n) + [c]
        R = R - ore_mul(OrePoly(term, kind), B)
        if R.order >= m:
            raise ArithmeticError("right division failed to reduce the order")
    return OrePoly(quo, kind), R


def ore_rrem(A: OrePoly, B: OrePoly) -> OrePoly:
    return ore_rdiv(A, B)[1]


def gcrd(A: OrePoly, B: OrePoly) -> OrePoly:
    """Monic greatest common right divisor."""
    A._check(B)
    if A.is_zero() and B.is_zero():
        raise ValueError("gcrd of two zero operators")
    while not B.is_zero():
        A, B = B, ore_rrem(A, B)
    return A.monic()


def lclm(A: OrePoly, B: OrePoly) -> OrePoly:
    """Monic least common left multiple, found by linear algebra.

    Examples
    ========

    >>> from ratel.ore import OrePoly, S_KIND, lclm
    >>> lclm(OrePoly([-1, 1], S_KIND), OrePoly([-2, 1], S_KIND))
    OrePoly([2, -3, 1], S)
    """
    A._check(B)
    if A.is_zero() or B.is_zero():
        raise ValueError("lclm of a zero operator")
    kind = A.kind
    a, b = A.order, B.order
    d = OrePoly.gen(kind)
    rem_a = [OrePoly.scalar(1, kind) if a > 0 else OrePoly([], kind)]
    rem_b = [OrePoly.scalar(1, kind) if b > 0 else OrePoly([], kind)]
    for k in range(1, a + b + 1):
        rem_a.append(ore_rrem(ore_mul(d, rem_a[-1]), A))
        rem_b.append(ore_rrem(ore_mul(d, rem_b[-1]), B))
        if k < max(a, b):
            continue
        # columns: d^0..d^k; rows: coefficients of both remainders
        rows = []
        for i in range(a):
            rows.append([r.coeff(i) for r in rem_a])
        for i in range(b):
            rows.append([r.coeff(i) for r in rem_b])
        ns = nullspace_rf(rows, k + 1)
        if ns:
            v = min(ns, key=lambda vec: max(i for i, e in enumerate(vec) if not e.is_zero()))
            return OrePoly(v, kind).monic()
    raise ArithmeticError("lclm search exceeded order(A) + order(B)")


# ---------------------------------------------------------------------------
# rational solutions


def _poly_coeffs(L: OrePoly) -> list[Poly]:
    return [c.num for c in L.cleared().coeffs]


def _falling(s: Poly, i: int) -> Poly:
    out = ONE
    for k in range(i):
        out *= s - k
    return out


def _nonneg_int_roots(p: Poly, var: str) -> list[int]:
    return [int(r.p) for r in common_roots_in(p, var) if r.q == 1 and r >= 0]


def _int_roots(p: Poly, var: str) -> list[int]:
    return [int(r.p) for r in common_roots_in(p, var) if r.q == 1]


def _solve_ansatz(L: OrePoly, basis: list[RatFunc]) -> list[RatFunc]:
    """Q-linear combinations of ``basis`` annihilated by ``L``."""
    if not basis:
        return []
    images = [ore_apply(L, b) for b in basis]
    den = ONE
    for im in images:
        den = den * im.den / den.gcd(im.den)
    nums = [im.num * (den / im.den) for im in images]
    monos: dict[tuple, int] = {}
    entries = []
    for j, p in enumerate(nums):
        for m, c in zip(p.monoms(), p.coeffs()):
            key = tuple(m)
            if key not in monos:
                monos[key] = len(monos)
            entries.append((monos[key], j, c))
    rows = [[fmpq(0)] * len(basis) for _ in range(len(monos))]
    for i, j, c in entries:
        rows[i][j] = c
    sols = []
    for v in nullspace_q(rows, len(basis)):
        y = RatFunc()
        for c, b in zip(v, basis):
            if c != 0:
                y = y + b * c
        sols.append(y)
    return sols


def _normalize_basis(sols: list[RatFunc]) -> list[RatFunc]:
    out = []
    for y in sols:
        if y.is_zero():
            continue
        lc = y.num.leading_coefficient()
        out.append(y * (1 / lc))
    return out


def _strip_trailing(L: OrePoly) -> tuple[OrePoly, int]:
    k = 0
    while k < len(L.coeffs) and L.coeffs[k].is_zero():
        k += 1
    return OrePoly(L.coeffs[k:], L.kind), k


def _valuation(a: Poly, p: Poly) -> tuple[int, Poly]:
    v = 0
    while True:
        q, r = divmod(a, p)
        if not r.is_zero():
            return v, a
        a, v = q, v + 1


def _pole_bound_diff(cs: list[Poly], p: Poly) -> int:
    """Largest pole order at roots of ``p`` allowed by the local indicial equation."""
    vals = []
    for i, a in enumerate(cs):
        if a.is_zero():
            continue
        v, b = _valuation(a, p)
        vals.append((v - i, v, i, b))
    wmin = min(w for w, *_ in vals)
    dp = p.derivative("t")
    s = Z
    ind = ZERO
    for w, v, i, b in vals:
        if w == wmin:
            ind += b * dp**v * _falling(s, i)
    # reduce the coefficients (in t) modulo p
    red = ZERO
    for k, c in coefficients(ind, "z").items():
        red += divmod(c, p)[1] * Z**k
    if red.is_zero():
        return 0
    roots = _int_roots(red, "z")
    return max([0] + [-r for r in roots])


def _rational_solutions_diff(L: OrePoly) -> list[RatFunc]:
    cs = _poly_coeffs(L)
    U = ONE
    for p, _ in factor_bivariate(cs[-1]).factors:
        if degree(p, "t") <= 0:
            continue
        m = _pole_bound_diff(cs, p)
        U *= p**m
    Lt = ore_mul(L, OrePoly([RatFunc(1, U)], L.kind))
    bs = _poly_coeffs(Lt)
    m = max(degree(b, "t") - i for i, b in enumerate(bs) if not b.is_zero())
    s = Z
    ind = ZERO
    for i, b in enumerate(bs):
        if not b.is_zero() and degree(b, "t") - i == m:
            ind += b.leading_coefficient() * _falling(s, i)
    if ind.is_zero():
        raise ArithmeticError("degenerate indicial polynomial at infinity")
    roots = _nonneg_int_roots(ind, "z")
    if not roots:
        return []
    D = max(roots)
    basis = [RatFunc(T**k, U) for k in range(D + 1)]
    return _solve_ansatz(L, basis)


def _shift_universal_denominator(a_r: Poly, a_0: Poly, r: int) -> Poly:
    A = substitute(a_r, t=T - r)
    B = a_0
    R = resultant(A, substitute(B, t=T + Z), "t")
    hs = sorted({h for h in _nonneg_int_roots(R, "z")}, reverse=True) if not R.is_zero() else []
    U = ONE
    for h in hs:
        d = poly_gcd(A, substitute(B, t=T + h))
        if degree(d, "t") <= 0:
            continue
        A = A / d
        B = B / substitute(d, t=T - h)
        for i in range(h + 1):
            U *= substitute(d, t=T - i)
    return primitive(U)


def _rational_solutions_shift(L: OrePoly) -> list[RatFunc]:
    cs = _poly_coeffs(L)
    r = len(cs) - 1
    U = _shift_universal_denominator(cs[-1], cs[0], r)
    Lt = ore_mul(L, OrePoly([RatFunc(1, U)], L.kind))
    bs = _poly_coeffs(Lt)
    # rewrite in terms of Delta = S - 1: sum_j c_j Delta^j, c_j = sum_i C(i, j) b_i
    cj = []
    for j in range(len(bs)):
        acc = ZERO
        for i in range(j, len(bs)):
            acc += bs[i] * comb(i, j)
        cj.append(acc)
    m = max(degree(c, "t") - j for j, c in enumerate(cj) if not c.is_zero())
    ind = ZERO
    for j, c in enumerate(cj):
        if not c.is_zero() and degree(c, "t") - j == m:
            ind += c.leading_coefficient() * _falling(Z, j)
    roots = _nonneg_int_roots(ind, "z")
    if not roots:
        return []
    D = max(roots)
    basis = [RatFunc(T**k, U) for k in range(D + 1)]
    return _solve_ansatz(L, basis)


def q_power_exponent(y: fmpq, q: fmpq) -> int | None:
    """Integer ``h`` with ``q^h == y``, or ``None``."""
    y, q = fmpq(y), fmpq(q)
    if y == 1:
        return 0
    if y == 0:
        return None
    import math

    ly = math.log(abs(float(y.p))) - math.log(float(y.q))
    lq = math.log(abs(float(q.p))) - math.log(float(q.q))
    h0 = round(ly / lq)
    for h in (h0 - 1, h0, h0 + 1):
        if q**h == y:
            return h
    return None


def _q_roots(p: Poly, q: fmpq) -> list[int]:
    """Integers ``h`` such that ``q^h`` is a common root in ``z`` of ``p``."""
    out = []
    for r in common_roots_in(p, "z"):
        h = q_power_exponent(r, q)
        if h is not None:
            out.append(h)
    return out


def _strip_t(p: Poly) -> Poly:
    while not p.is_zero() and coefficient(p, "t", 0).is_zero():
        p = p / T
    return p


def _q_universal_denominator(a_r: Poly, a_0: Poly, r: int, q: fmpq) -> Poly:
    A = _strip_t(substitute(a_r, t=T * q ** (-r)))
    B = _strip_t(a_0)
    if degree(A, "t") <= 0 or degree(B, "t") <= 0:
        return ONE
    R = resultant(A, substitute(B, t=T * Z), "t")
    hs = sorted({h for h in _q_roots(R, q) if h >= 0}, reverse=True) if not R.is_zero() else []
    U = ONE
    for h in hs:
        d = poly_gcd(A, substitute(B, t=T * q**h))
        if degree(d, "t") <= 0:
            continue
        A = A / d
        B = B / substitute(d, t=T * q ** (-h))
        for i in range(h + 1):
            U *= substitute(d, t=T * q ** (-i))
    return primitive(U)


def _rational_solutions_q(L: OrePoly) -> list[RatFunc]:
    q = L.kind.q
    cs = _poly_coeffs(L)
    r = len(cs) - 1
    U = _q_universal_denominator(cs[-1], cs[0], r, q)
    Lt = ore_mul(L, OrePoly([RatFunc(1, U)], L.kind))
    bs = _poly_coeffs(Lt)
    lows = [min(int(m[3]) for m in b.monoms()) for b in bs if not b.is_zero()]
    highs = [degree(b, "t") for b in bs if not b.is_zero()]
    smin, smax = min(lows), max(highs)
    i0 = ZERO
    iinf = ZERO
    for i, b in enumerate(bs):
        i0 += coefficient(b, "t", smin) * Z**i
        iinf += coefficient(b, "t", smax) * Z**i
    lo = _q_roots(i0, q)
    hi = _q_roots(iinf, q)
    if not lo or not hi:
        return []
    kmin, kmax = min(lo), max(hi)
    if kmin > kmax:
        return []
    basis = []
    for k in range(kmin, kmax + 1):
        basis.append(RatFunc(T**k, U) if k >= 0 else RatFunc(1, U * T ** (-k)))
    return _solve_ansatz(L, basis)


def rational_solutions(L: OrePoly) -> list[RatFunc]:
    """A Q-basis of the rational solutions of ``L(y) = 0``.

    Examples
    ========

    >>> from ratel.ore import OrePoly, S_KIND, rational_solutions
    >>> from ratel.arith import RatFunc, T
    >>> rational_solutions(OrePoly([RatFunc(-(T + 1), T), 1], S_KIND))
    [RatFunc(t, 1)]
    >>> rational_solutions(OrePoly([-2, 1], S_KIND))
    []
    """
    if L.is_zero():
        raise ValueError("rational solutions of the zero operator")
    if L.order == 0:
        return []
    if L.kind.tag == DERIVATION:
        return _normalize_basis(_rational_solutions_diff(L))
    L0, k = _strip_trailing(L)
    if L0.order == 0:
        # L = c * d^k: only y = 0 is killed by an automorphism power
        return []
    sols = _rational_solutions_shift(L0) if L.kind.tag == SHIFT else _rational_solutions_q(L0)
    # L = L0 * d^k, so y solves L iff sigma^k(y) solves L0
    out = [L.kind.sigma(y, -k) for y in sols]
    return _normalize_basis(out)
