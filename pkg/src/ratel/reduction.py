"""Residues and residual forms with respect to ``D_x``, ``Delta_x`` and ``Delta_{q,x}``.

Every rational function ``f`` in ``t, x`` is written as

    f = d(g) + r

where ``d`` is one of

* ``"dx"``: the derivation ``D_x``,
* ``"sx"``: the difference ``Delta_x(g) = g(x+1) - g(x)``,
* ``"qx"``: the q-difference ``Delta_{q,x}(g) = g(qx) - g(x)``,

and ``r`` is a *residual form*: a sum of proper fractions ``A/u^j`` over
irreducible ``u`` that are pairwise unrelated by the relevant x-action,
plus, in the q-case, a constant ``c`` in ``Q(t)`` (the residue at
infinity).  ``f`` is exact (integrable, summable, q-summable) iff ``r = 0``.

The orbit structure is read off the irreducible factors of the denominator:
two factors lie in the same orbit when one is an x-shift (or an x-dilation
by a power of q) of the other.  All contributions of an orbit are moved onto
one representative factor by telescoping identities, so the numerators of
the residual form carry the (discrete, q-discrete) residues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from flint import fmpq

from .arith.poly import (
    ONE,
    X,
    Z,
    Poly,
    as_rat,
    coefficient,
    common_roots_in,
    const,
    degree,
    factor_bivariate,
    poly_gcd,
    primitive,
    resultant,
    scale,
    shift,
    substitute,
    total_degree,
)
from .arith.qtx import pdeg, pdivmod, pinvert, pquo, prem
from .arith.ratfunc import RatFunc
from .ore import check_q, q_power_exponent

DX = "dx"
SX = "sx"
QX = "qx"
CASES = (DX, SX, QX)

POINT = "point"
ZORBIT = "zOrbit"
QORBIT = "qOrbit"
QINFINITY = "qInfinity"
_ORBIT_KIND = {DX: POINT, SX: ZORBIT, QX: QORBIT}


def check_case(case: str, q=None) -> fmpq | None:
    if case not in CASES:
        raise ValueError(f"unknown x-operator {case!r}; expected one of {CASES}")
    if case == QX:
        return check_q(q)
    return None


def apply_dx(g, case: str, q=None) -> RatFunc:
    """Apply the x-operator of ``case`` to ``g``."""
    g = RatFunc.coerce(g)
    q = check_case(case, q)
    if case == DX:
        return g.diff("x")
    if case == SX:
        return g.shift("x", 1) - g
    return g.scale("x", q) - g


@dataclass(frozen=True)
class ResidualTerm:
    """A proper fraction ``numerator / u^j`` of a residual form."""

    u: Poly
    j: int
    numerator: RatFunc

    def to_ratfunc(self) -> RatFunc:
        return self.numerator / RatFunc(self.u**self.j)


@dataclass(frozen=True)
class ResidualForm:
    """Canonical remainder of a rational function modulo the image of ``d``."""

    case: str
    terms: tuple[ResidualTerm, ...] = ()
    infinity: RatFunc = field(default_factory=RatFunc)
    q: fmpq | None = None

    def to_ratfunc(self) -> RatFunc:
        out = RatFunc(self.infinity)
        for term in self.terms:
            out = out + term.to_ratfunc()
        return out

    def is_zero(self) -> bool:
        return not self.terms and self.infinity.is_zero()

    def denominator(self) -> Poly:
        out = ONE
        for term in self.terms:
            out *= term.u
        return out


@dataclass(frozen=True)
class ResidueData:
    """A symbolic residue.

    For ``kind`` other than ``qInfinity`` the residue at each root ``beta``
    of ``u`` (an orbit representative) of the pole of order ``multiplicity``
    is ``value(t, beta)``; ``value`` is reduced modulo ``u``.  For
    ``qInfinity`` the field ``u`` is ``None`` and ``value`` is the constant
    ``c`` in ``Q(t)``.
    """

    kind: str
    u: Poly | None
    value: RatFunc
    multiplicity: int


# ---------------------------------------------------------------------------
# orbit tables


def _shift_offset(p: Poly, rep: Poly) -> int | None:
    """Integer ``h`` with ``p(x) = rep(x + h)``, or ``None``."""
    n = degree(p, "x")
    if n != degree(rep, "x") or degree(p, "t") != degree(rep, "t"):
        return None
    lp, lr = coefficient(p, "x", n), coefficient(rep, "x", n)
    if lp != lr:
        return None
    diff = RatFunc(coefficient(p, "x", n - 1) - coefficient(rep, "x", n - 1), lr * n)
    if not diff.is_constant():
        return None
    h = diff.constant_value()
    if h.q != 1:
        return None
    h = int(h.p)
    return h if shift(rep, "x", h) == p else None


def _q_offset(p: Poly, rep: Poly, q: fmpq) -> tuple[int, fmpq] | None:
    """``(h, c)`` with ``p(x) = c * rep(q^h x)``, or ``None``."""
    n = degree(p, "x")
    if n != degree(rep, "x") or degree(p, "t") != degree(rep, "t"):
        return None
    p0, r0 = coefficient(p, "x", 0), coefficient(rep, "x", 0)
    if p0.is_zero() or r0.is_zero():
        return None
    ratio = RatFunc(coefficient(p, "x", n) * r0, coefficient(rep, "x", n) * p0)
    if not ratio.is_constant():
        return None
    hn = q_power_exponent(ratio.constant_value(), q)
    if hn is None or hn % n:
        return None
    h = hn // n
    c = RatFunc(p0, r0)
    if not c.is_constant():
        return None
    c = c.constant_value()
    return (h, c) if scale(rep, "x", q**h) * c == p else None


class OrbitTable:
    """Assigns each irreducible factor to an orbit representative.

    ``locate(p)`` returns ``(rep, h, c)`` with ``p(x) = rep(x + h)`` in the
    shift case, ``p(x) = c * rep(q^h x)`` in the q-case and ``p = rep`` for
    ``D_x``.  Representatives are fixed at first appearance.
    """

    def __init__(self, case: str, q=None):
        self.case = case
        self.q = check_case(case, q)
        self.reps: list[Poly] = []
        self._where: dict[str, tuple[Poly, int, fmpq]] = {}

    def locate(self, p: Poly) -> tuple[Poly, int, fmpq]:
        key = str(p)
        hit = self._where.get(key)
        if hit is not None:
            return hit
        found = None
        if self.case != DX:
            for rep in self.reps:
                if self.case == SX:
                    h = _shift_offset(p, rep)
                    if h is not None:
                        found = (rep, h, fmpq(1))
                        break
                else:
                    hc = _q_offset(p, rep, self.q)
                    if hc is not None:
                        found = (rep, hc[0], hc[1])
                        break
        if found is None:
            self.reps.append(p)
            found = (p, 0, fmpq(1))
        self._where[key] = found
        return found

    def canonicalize(self) -> None:
        """Re-base every orbit on its member of least offset."""
        members: dict[str, list[tuple[Poly, int, fmpq]]] = {}
        for key, (rep, h, c) in self._where.items():
            members.setdefault(str(rep), []).append((self._poly_of(key, rep, h, c), h, c))
        new_where = {}
        new_reps = []
        for rep in self.reps:
            group = members.get(str(rep), [(rep, 0, fmpq(1))])
            base, hb, cb = min(group, key=lambda m: m[1])
            new_reps.append(base)
            for p, h, c in group:
                new_where[str(p)] = (base, h - hb, c / cb)
        self.reps = new_reps
        self._where = new_where

    def _poly_of(self, key, rep, h, c) -> Poly:
        if self.case == SX:
            return shift(rep, "x", h)
        if self.case == QX:
            return scale(rep, "x", self.q**h) * c
        return rep


# ---------------------------------------------------------------------------
# the reduction engine


def _antidifference(P: RatFunc) -> RatFunc:
    """Polynomial ``G`` in x with ``G(x+1) - G(x) = P``."""
    out = RatFunc()
    while not P.is_zero():
        k = pdeg(P, "x")
        lc = RatFunc(coefficient(P.num, "x", k), P.den)
        term = lc * RatFunc(X ** (k + 1)) / (k + 1)
        out = out + term
        P = P - (term.shift("x", 1) - term)
    return out


def _partial_fractions(A: RatFunc, factors: list[tuple[Poly, int]]) -> list[tuple[Poly, int, RatFunc]]:
    """Split ``A / prod(p^m)`` (proper in x) into ``sum A_i / p_i^m_i``."""
    if len(factors) == 1:
        p, m = factors[0]
        return [(p, m, A)]
    out = []
    powers = [RatFunc(p**m) for p, m in factors]
    total = ONE
    for p, m in factors:
        total *= p**m
    for (p, m), Pi in zip(factors, powers):
        cof = RatFunc(total / Pi.num)
        inv = pinvert(cof, Pi, "x")
        Ai = prem(prem(A, Pi, "x") * inv, Pi, "x")
        out.append((p, m, Ai))
    return out


class Reducer:
    """Reduction engine sharing one orbit table across calls.

    Sharing the table keeps the residual forms of several rational
    functions expressed on the same representatives, which makes them
    directly comparable coordinate-wise.
    """

    def __init__(self, case: str, q=None, table: OrbitTable | None = None):
        self.case = case
        self.q = check_case(case, q)
        self.table = table if table is not None else OrbitTable(case, self.q)
        self._dinv: dict[str, RatFunc] = {}

    def _x_factors(self, f: RatFunc):
        fac = factor_bivariate(f.den)
        tpart = const(fac.content)
        xf = []
        for p, m in fac.factors:
            if degree(p, "x") > 0:
                xf.append((p, m))
            else:
                tpart *= p**m
        return tpart, xf

    def reduce(self, f: RatFunc, canonical: bool = False):
        """Return ``(g, terms, c)`` with ``terms`` keyed by representative.

        ``terms`` maps ``str(rep)`` to ``(rep, J, N)`` meaning ``N / rep^J``.
        """
        f = RatFunc.coerce(f)
        if f.is_zero():
            return RatFunc(), {}, RatFunc()
        tpart, xf = self._x_factors(f)
        a = RatFunc(f.num, tpart)
        if canonical and self.case != DX:
            for p, _ in sorted(xf, key=lambda fm: (total_degree(fm[0]), str(fm[0]))):
                if not (self.case == QX and p == X):
                    self.table.locate(p)
            self.table.canonicalize()
        if xf:
            B = ONE
            for p, m in xf:
                B *= p**m
            P, A = pdivmod(a, RatFunc(B), "x")
            parts = _partial_fractions(A, xf) if not A.is_zero() else []
        else:
            P, parts = a, []
        handler = {DX: self._reduce_dx, SX: self._reduce_sx, QX: self._reduce_qx}[self.case]
        return handler(P, parts)

    # -- D_x: Hermite reduction

    def _inv_dp(self, p: Poly) -> RatFunc:
        key = str(p)
        inv = self._dinv.get(key)
        if inv is None:
            inv = pinvert(RatFunc(p.derivative("x")), RatFunc(p), "x")
            self._dinv[key] = inv
        return inv

    def _reduce_dx(self, P: RatFunc, parts):
        g = RatFunc(P.num.integral("x"), P.den) if not P.is_zero() else RatFunc()
        terms = {}
        for p, m, A in parts:
            pr = RatFunc(p)
            dp = RatFunc(p.derivative("x"))
            while m > 1 and not A.is_zero():
                inv = self._inv_dp(p)
                B = prem(-A * inv / (m - 1), pr, "x")
                C = pquo(A + B * dp * (m - 1), pr, "x")
                g = g + B / RatFunc(p ** (m - 1))
                A = C - B.diff("x")
                m -= 1
            if m > 1:
                continue
            self._add(terms, p, 1, A)
        return g, self._finish(terms), RatFunc()

    # -- Delta_x: Abramov-style reduction

    def _reduce_sx(self, P: RatFunc, parts):
        g = _antidifference(P) if not P.is_zero() else RatFunc()
        terms = {}
        for p, m, A in parts:
            rep, h, _ = self.table.locate(p)
            if h == 0:
                self._add(terms, rep, m, A)
                continue
            G = A.shift("x", -h)
            Gx = G / RatFunc(rep**m)
            if h > 0:
                for i in range(h):
                    g = g + Gx.shift("x", i)
            else:
                for i in range(h, 0):
                    g = g - Gx.shift("x", i)
            self._add(terms, rep, m, G)
        return g, self._finish(terms), RatFunc()

    # -- Delta_{q,x}

    def _reduce_qx(self, P: RatFunc, parts):
        q = self.q
        g = RatFunc()
        laurent: dict[int, RatFunc] = {}
        for k in range(pdeg(P, "x") + 1):
            c = RatFunc(coefficient(P.num, "x", k), P.den)
            if not c.is_zero():
                laurent[k] = c
        terms = {}
        for p, m, A in parts:
            if p == X:
                for k in range(pdeg(A, "x") + 1):
                    c = RatFunc(coefficient(A.num, "x", k), A.den)
                    if not c.is_zero():
                        laurent[k - m] = laurent.get(k - m, RatFunc()) + c
                continue
            rep, h, c = self.table.locate(p)
            if h == 0 and c == 1:
                self._add(terms, rep, m, A)
                continue
            G = A.scale("x", q ** (-h)) * (1 / c**m)
            Gx = G / RatFunc(rep**m)
            if h > 0:
                for i in range(h):
                    g = g + Gx.scale("x", q**i)
            else:
                for i in range(h, 0):
                    g = g - Gx.scale("x", q**i)
            self._add(terms, rep, m, G)
        cinf = RatFunc()
        for k, c in laurent.items():
            if k == 0:
                cinf = cinf + c
            elif not c.is_zero():
                g = g + c * RatFunc(X**k if k > 0 else ONE, ONE if k > 0 else X ** (-k)) / (q**k - 1)
        return g, self._finish(terms), cinf

    # -- bookkeeping

    @staticmethod
    def _add(terms, rep: Poly, m: int, A: RatFunc):
        if A.is_zero():
            return
        slot = terms.setdefault(str(rep), (rep, {}))[1]
        slot[m] = slot.get(m, RatFunc()) + A

    @staticmethod
    def _finish(terms):
        out = {}
        for key, (rep, by_m) in terms.items():
            J = max(by_m)
            N = RatFunc()
            for m, A in by_m.items():
                N = N + A * RatFunc(rep ** (J - m))
            r = RatFunc(rep)
            while J > 0 and not N.is_zero():
                quo, rem = pdivmod(N, r, "x")
                if not rem.is_zero():
                    break
                N, J = quo, J - 1
            if N.is_zero() or J == 0:
                continue
            out[key] = (rep, J, N)
        return out


def _sort_key(rep: Poly):
    return (total_degree(rep), degree(rep, "x"), str(rep))


def _residual_form(case: str, q, terms: dict, c: RatFunc) -> ResidualForm:
    items = sorted(terms.values(), key=lambda e: _sort_key(e[0]))
    return ResidualForm(case, tuple(ResidualTerm(u, j, N) for u, j, N in items), c, q)


def reduce(f, case: str, q=None) -> tuple[RatFunc, ResidualForm]:
    """Return ``(g, r)`` with ``f = d(g) + r`` for the x-operator ``case``."""
    red = Reducer(case, q)
    g, terms, c = red.reduce(RatFunc.coerce(f), canonical=True)
    return g, _residual_form(case, red.q, terms, c)


def hermite_reduce(f) -> tuple[RatFunc, ResidualForm]:
    """Hermite reduction: ``f = D_x(g) + r`` with ``r`` having squarefree denominator.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.reduction import hermite_reduce
    >>> g, r = hermite_reduce(RatFunc(2 * X, (X**2 - T)**2))
    >>> g, r.is_zero()
    (RatFunc(-1, x^2 - t), True)
    """
    return reduce(f, DX)


def abramov_reduce(f) -> tuple[RatFunc, ResidualForm]:
    """Reduction modulo ``Delta_x``: ``f = Delta_x(g) + r`` with shift-free ``r``.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X
    >>> from ratel.reduction import abramov_reduce
    >>> g, r = abramov_reduce(RatFunc(1, X * (X + 1)))
    >>> g, r.is_zero()
    (RatFunc(-1, x), True)
    """
    return reduce(f, SX)


def q_reduce(f, q) -> tuple[RatFunc, ResidualForm]:
    """Reduction modulo ``Delta_{q,x}``; the residue at infinity is ``r.infinity``."""
    return reduce(f, QX, q)


def is_exact(f, case: str, q=None) -> tuple[bool, RatFunc | None]:
    """Decide whether ``f = d(g)`` for some rational ``g`` and return ``g``."""
    g, r = reduce(f, case, q)
    if r.is_zero():
        return True, g
    return False, None


# ---------------------------------------------------------------------------
# residues


def laurent_coefficients(u: Poly, J: int, A: RatFunc) -> list[RatFunc]:
    """Coefficients of ``(x - beta)^-j`` in ``A/u^J`` at a generic root ``beta`` of ``u``.

    Returns ``[rho_1, ..., rho_J]`` as polynomials reduced modulo ``u``;
    the coefficient at the root ``beta`` is ``rho_j(t, beta)``.
    """
    U = RatFunc(u)

    def red(e):
        return prem(e, U, "x")

    # Taylor data: u(x + e) = e * W(e) modulo u, A(x + e) = sum a_k e^k
    w = []
    d = U
    fact = 1
    for k in range(1, J + 1):
        d = d.diff("x")
        fact *= k
        w.append(red(d / fact))
    a = []
    d = A
    fact = 1
    for k in range(J):
        if k:
            d = d.diff("x")
            fact *= k
        a.append(red(d / fact))
    v0 = pinvert(w[0], U, "x")
    V = [v0]
    for n in range(1, J):
        acc = RatFunc()
        for k in range(1, n + 1):
            acc = acc + w[k] * V[n - k]
        V.append(red(-v0 * acc))
    # V^J truncated at e^J
    P = [RatFunc(1)] + [RatFunc()] * (J - 1)
    for _ in range(J):
        P = [red(sum((P[i] * V[n - i] for i in range(n + 1)), RatFunc())) for n in range(J)]
    S = [red(sum((a[i] * P[n - i] for i in range(n + 1)), RatFunc())) for n in range(J)]
    return [S[J - j] for j in range(1, J + 1)]


def residues(f, case: str, q=None) -> list[ResidueData]:
    """Residues of ``f`` read off its residual form.

    One entry per orbit representative and pole order with a nonzero
    value; in the q-case the residue at infinity is appended.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.reduction import residues
    >>> [(r.u, r.value, r.multiplicity) for r in residues(RatFunc(1, X**2 - T), "dx")]
    [(x^2 - t, RatFunc(1/2*x, t), 1)]
    """
    _, r = reduce(f, case, q)
    out = []
    kind = _ORBIT_KIND[case]
    for term in r.terms:
        for j, v in enumerate(laurent_coefficients(term.u, term.j, term.numerator), 1):
            if not v.is_zero():
                out.append(ResidueData(kind, term.u, v, j))
    if case == QX:
        out.append(ResidueData(QINFINITY, None, r.infinity, 0))
    return out


# ---------------------------------------------------------------------------
# dispersion


def dispersion(b: Poly) -> int:
    """Largest integer ``i >= 0`` with ``gcd(b(x), b(x+i))`` nonconstant in x.

    Computed from the integer roots in ``z`` of ``res_x(b(x), b(x+z))``.

    Examples
    ========

    >>> from ratel.arith import X, T
    >>> from ratel.reduction import dispersion
    >>> dispersion(X * (X + 3)), dispersion(X**2 - T)
    (3, 0)
    """
    if degree(b, "x") <= 0:
        raise ValueError("dispersion needs positive x-degree")
    R = resultant(b, substitute(b, x=X + Z), "x")
    if R.is_zero():
        raise ArithmeticError("unexpected vanishing resultant")
    best = 0
    for r in common_roots_in(R, "z"):
        if r.q != 1 or r <= 0:
            continue
        i = int(r.p)
        if i > best and degree(poly_gcd(b, shift(b, "x", i)), "x") > 0:
            best = i
    return best


def q_dispersion(b: Poly, q) -> int | float:
    """Largest ``i >= 0`` with ``gcd(b(x), b(q^i x))`` nonconstant in x.

    Monomials ``c*x^n`` have infinite q-dispersion.
    """
    q = check_q(q)
    if degree(b, "x") <= 0:
        raise ValueError("q-dispersion needs positive x-degree")
    if len(b) == 1 or all(coefficient(b, "x", k).is_zero() for k in range(degree(b, "x"))):
        return math.inf
    bt = b
    while coefficient(bt, "x", 0).is_zero():
        bt = bt / X
    if degree(bt, "x") <= 0:
        return math.inf
    R = resultant(bt, substitute(bt, x=X * Z), "x")
    if R.is_zero():
        raise ArithmeticError("unexpected vanishing resultant")
    best = 0
    for r in common_roots_in(R, "z"):
        i = q_power_exponent(r, q)
        if i is None or i <= best:
            continue
        if degree(poly_gcd(bt, scale(bt, "x", q**i)), "x") > 0:
            best = i
    return best


__all__ = [
    "DX", "SX", "QX", "CASES", "POINT", "ZORBIT", "QORBIT", "QINFINITY",
    "ResidualTerm", "ResidualForm", "ResidueData", "OrbitTable", "Reducer",
    "apply_dx", "reduce", "hermite_reduce", "abramov_reduce", "q_reduce",
    "is_exact", "residues", "laurent_coefficients", "dispersion", "q_dispersion",
]
