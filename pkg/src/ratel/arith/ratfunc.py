"""Reduced rational functions over Q."""

from __future__ import annotations

from flint import fmpq, fmpz

from .poly import (
    ONE,
    ZERO,
    Poly,
    as_poly,
    as_rat,
    coefficients,
    degree,
    gen,
    normalizer,
    substitute,
    variables,
)


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return ZERO, ONE
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_constant():
            num = num / g
            den = den / g
    c = normalizer(den)
    if c != 1:
        ic = 1 / c
        num = num * ic
        den = den * ic
    return num, den


class RatFunc:
    """A rational function ``num/den`` in lowest terms.

    The denominator is integer-primitive with positive leading coefficient,
    so two equal rational functions have identical representations.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> f = RatFunc(2 * X, X**2 - T)
    >>> f
    RatFunc(2*x, x^2 - t)
    >>> f.diff("x")
    RatFunc(-2*x^2 - 2*t, x^4 - 2*x^2*t + t^2)
    """

    __slots__ = ("num", "den")

    num: Poly
    den: Poly

    def __init__(self, num=0, den=1, *, _reduced: bool = False):
        if isinstance(num, RatFunc):
            if not (isinstance(den, int) and den == 1):
                q = num / den
                num, den = q.num, q.den
            else:
                num, den = num.num, num.den
            _reduced = True
        num, den = as_poly(num), as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def __reduce__(self):
        return (_rebuild, (_pack(self.num), _pack(self.den)))

    @classmethod
    def coerce(cls, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, (int, fmpz, fmpq, Poly, str)):
            return cls(as_poly(as_rat(value) if isinstance(value, str) else value))
        raise TypeError(f"cannot convert {value!r} to RatFunc")

    # predicates

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == 1 and self.den == 1

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self, var: str | None = None) -> bool:
        """True if the denominator is constant (or free of ``var``)."""
        if var is None:
            return self.den.is_constant()
        return degree(self.den, var) <= 0

    def variables(self) -> set[str]:
        return variables(self.num) | variables(self.den)

    def is_free_of(self, var: str) -> bool:
        return var not in self.variables()

    def degree(self, var: str) -> tuple[int, int]:
        return degree(self.num, var), degree(self.den, var)

    def constant_value(self) -> fmpq:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.leading_coefficient() / self.den.leading_coefficient() if not self.is_zero() else fmpq(0)

    # arithmetic

    def __add__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if o.den.is_constant() or self.den.is_constant():
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        g = self.den.gcd(o.den)
        if g.is_constant():
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        d1, d2 = self.den / g, o.den / g
        return RatFunc(self.num * d2 + o.num * d1, d1 * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, fmpz, fmpq)):
            if other == 0:
                return RatFunc()
            c = fmpq(other)
            return RatFunc(self.num * c, self.den, _reduced=True)
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RatFunc()
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if not d2.is_constant() and not n1.is_constant():
            g = n1.gcd(d2)
            if not g.is_constant():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_constant() and not n2.is_constant():
            g = n2.gcd(d1)
            if not g.is_constant():
                n2, d1 = n2 / g, d1 / g
        num, den = n1 * n2, d1 * d2
        c = normalizer(den)
        if c != 1:
            num, den = num * (1 / c), den * (1 / c)
        return RatFunc(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.den, self.num, _reduced=False)

    def __truediv__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __repr__(self):
        return f"RatFunc({self.num}, {self.den})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    # calculus and substitutions

    def diff(self, var: str) -> "RatFunc":
        n, d = self.num, self.den
        dn, dd = n.derivative(var), d.derivative(var)
        if dd.is_zero():
            return RatFunc(dn, d)
        return RatFunc(dn * d - n * dd, d * d)

    def subs(self, **values) -> "RatFunc":
        """Substitute polynomials or rational functions for variables."""
        polys = {}
        fracs = {}
        for k, v in values.items():
            if isinstance(v, RatFunc):
                if v.den == 1:
                    polys[k] = v.num
                else:
                    fracs[k] = v
            else:
                polys[k] = as_poly(v)
        num, den = self.num, self.den
        if polys:
            num, den = substitute(num, **polys), substitute(den, **polys)
        out = RatFunc(num, den)
        for k, v in fracs.items():
            out = _compose_fraction(out, k, v)
        return out

    def shift(self, var: str, h) -> "RatFunc":
        if h == 0:
            return self
        return self.subs(**{var: gen(var) + as_rat(h)})

    def scale(self, var: str, c) -> "RatFunc":
        c = as_rat(c)
        if c == 1:
            return self
        return self.subs(**{var: gen(var) * c})

    def evaluate(self, **values) -> "RatFunc":
        """Specialize variables to rationals; raises on a vanishing denominator."""
        vals = {k: as_rat(v) for k, v in values.items()}
        den = self.den.subs(vals)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes at {values}")
        return RatFunc(self.num.subs(vals), den)


def _compose_poly(p: Poly, var: str, a: Poly, b: Poly, d: int) -> Poly:
    # b^d * p(a/b) for d >= deg_var p
    out = ZERO
    for k, c in coefficients(p, var).items():
        out += c * a**k * b ** (d - k)
    return out


def _compose_fraction(f: RatFunc, var: str, v: RatFunc) -> RatFunc:
    a, b = v.num, v.den
    dn, dd = degree(f.num, var), degree(f.den, var)
    num = _compose_poly(f.num, var, a, b, dn)
    den = _compose_poly(f.den, var, a, b, dd)
    if dd > dn:
        num *= b ** (dd - dn)
    elif dn > dd:
        den *= b ** (dn - dd)
    return RatFunc(num, den)


def _pack(p: Poly):
    return [(tuple(int(e) for e in m), int(c.p), int(c.q)) for m, c in zip(p.monoms(), p.coeffs())]


def _unpack(data) -> Poly:
    from .poly import CTX

    return CTX.from_dict({m: fmpq(p, q) for m, p, q in data})


def _rebuild(num, den) -> RatFunc:
    return RatFunc(_unpack(num), _unpack(den), _reduced=True)


def rf(num=0, den=1) -> RatFunc:
    """Shorthand constructor."""
    return RatFunc(num, den)
