"""Truncated power series in ``t``."""

from __future__ import annotations

from dataclasses import dataclass

from flint import fmpq

from .poly import ONE, ZERO, Poly, coefficients
from .ratfunc import RatFunc


@dataclass(frozen=True)
class SeriesVec:
    """Coefficients ``c_0, ..., c_N`` of a power series in ``t`` truncated at ``t^(N+1)``."""

    coefficients: tuple[fmpq, ...]
    variable: str = "t"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(fmpq(c) for c in self.coefficients))
        if not self.coefficients:
            raise ValueError("a truncated series needs at least one coefficient")

    @property
    def order(self) -> int:
        """Truncation order ``N``."""
        return len(self.coefficients) - 1

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, n):
        return self.coefficients[n]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)


def series_expand(f: RatFunc, N: int, var: str = "t") -> list[RatFunc]:
    """Coefficients ``a_0, ..., a_N`` of the ``var``-adic expansion of ``f``.

    The coefficients are rational functions of the remaining variables.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T, series_expand
    >>> series_expand(RatFunc(1, 1 - T - X), 2)
    [RatFunc(-1, x - 1), RatFunc(1, x^2 - 2*x + 1), RatFunc(-1, x^3 - 3*x^2 + 3*x - 1)]
    """
    if N < 0:
        raise ValueError("truncation order must be nonnegative")
    a = coefficients(f.num, var)
    b = coefficients(f.den, var)
    b0 = b.get(0)
    if b0 is None:
        raise ValueError("not t-adically regular" if var == "t" else f"not {var}-adically regular")
    P: list[Poly] = []
    pw = [ONE]
    for n in range(N + 1):
        pw.append(pw[-1] * b0)
        acc = a.get(n, ZERO) * pw[n]
        for k in range(1, n + 1):
            bk = b.get(k)
            if bk is not None:
                acc -= bk * P[n - k] * pw[k - 1]
        P.append(acc)
    return [RatFunc(P[n], pw[n + 1]) for n in range(N + 1)]


def series_of(f: RatFunc, N: int, var: str = "t") -> SeriesVec:
    """Rational coefficients of a univariate ``f`` expanded at ``var = 0``."""
    if f.variables() - {var}:
        raise ValueError(f"{f} is not univariate in {var}")
    return SeriesVec(tuple(c.constant_value() for c in series_expand(f, N, var)), var)

