"""Random inputs for property and acceptance tests."""

from __future__ import annotations

import random

from ratel.arith import RatFunc, T, X
from ratel.arith.poly import degree
from ratel.telescoping import TelescoperCase

ALL_CASES = [
    TelescoperCase("dt", "dx"),
    TelescoperCase("dt", "sx"),
    TelescoperCase("dt", "qx", 2),
    TelescoperCase("st", "dx"),
    TelescoperCase("st", "sx"),
    TelescoperCase("st", "qx", 2),
    TelescoperCase("qt", "dx", 2),
    TelescoperCase("qt", "sx", 3),
    TelescoperCase("qt", "qx", 2),
]


def nonzero(rng: random.Random, lo: int = -3, hi: int = 3) -> int:
    while True:
        c = rng.randint(lo, hi)
        if c:
            return c


def random_poly(rng: random.Random, max_deg: int, density: float = 0.5, vars=("t", "x")):
    """Random integer polynomial of total degree <= max_deg in t and x."""
    p = 0 * T
    for i in range(max_deg + 1):
        for j in range(max_deg + 1 - i):
            if "x" not in vars and j:
                continue
            if "t" not in vars and i:
                continue
            if rng.random() < density:
                p += rng.randint(-4, 4) * T**i * X**j
    return p


def random_ratfunc(rng: random.Random, max_deg: int = 4, need_x: bool = True) -> RatFunc:
    while True:
        num = random_poly(rng, max_deg)
        den = random_poly(rng, max_deg)
        if den.is_zero() or num.is_zero():
            continue
        f = RatFunc(num, den)
        if need_x and degree(f.den, "x") <= 0:
            continue
        return f


def _constant_root_factor(rng):
    if rng.random() < 0.5:
        return X + rng.randint(-3, 3)
    return X**2 + rng.randint(-3, 3) * X + nonzero(rng)


def _integer_linear_factor(rng):
    mu, lam = nonzero(rng, 1, 3), nonzero(rng, -3, 3)
    base = mu * X - lam * T
    if rng.random() < 0.7:
        return base + rng.randint(-3, 3)
    return base**2 + nonzero(rng, 1, 3)


def _q_integer_linear_factor(rng):
    a, b = rng.randint(1, 2), rng.randint(1, 2)
    return X**a - nonzero(rng) * T**b


def admissible_factor(rng: random.Random, case: TelescoperCase):
    """An x-dependent factor of a shape compatible with ``case``."""
    if not case.mixed and rng.random() < 0.75:
        if case.dt == "dt":
            return random_poly(rng, 2) + X
        if case.dt == "st":
            return _integer_linear_factor(rng)
        return _q_integer_linear_factor(rng)
    return _constant_root_factor(rng)


def admissible_ratfunc(rng: random.Random, case: TelescoperCase, max_deg: int = 4) -> RatFunc:
    """Random ``num/den`` of total degrees <= max_deg with admissible x-factors."""
    while True:
        den = admissible_factor(rng, case)
        while den.total_degree() < max_deg and rng.random() < 0.6:
            cand = den * (admissible_factor(rng, case) if rng.random() < 0.7 else T + nonzero(rng))
            if cand.total_degree() > max_deg:
                break
            den = cand
        num = random_poly(rng, max_deg)
        if num.is_zero() or den.is_zero() or degree(den, "x") <= 0:
            continue
        f = RatFunc(num, den)
        if degree(f.den, "x") <= 0:
            continue
        return f
