"""Independent reference computations used by the tests.

Nothing here calls into the reduction or telescoping code: values come from
sympy, from closed forms or from brute force.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import sympy as sp

from ratel.arith import RatFunc

t, x, z = sp.symbols("t x z")


def to_sympy(f) -> sp.Expr:
    """Convert a Poly or RatFunc via its printed form."""
    if isinstance(f, RatFunc):
        return sp.sympify(str(f.num).replace("^", "**"), locals={"t": t, "x": x}) / sp.sympify(
            str(f.den).replace("^", "**"), locals={"t": t, "x": x}
        )
    return sp.sympify(str(f).replace("^", "**"), locals={"t": t, "x": x, "z": z})


def same(a, b) -> bool:
    return sp.simplify(sp.together(to_sympy(a) - (to_sympy(b) if not isinstance(b, sp.Expr) else b))) == 0


def central_binomials(N: int) -> list[int]:
    return [comb(2 * n, n) for n in range(N + 1)]


def words_by_transfer(n: int) -> int:
    """Words with #00 = #01 counted by dynamic programming over (last letter, #00 - #01)."""
    if n == 0:
        return 1
    states = {(0, 0): 1, (1, 0): 1}
    for _ in range(n - 1):
        nxt = {}
        for (last, d), c in states.items():
            for b in (0, 1):
                nd = d + (1 if (last, b) == (0, 0) else -1 if (last, b) == (0, 1) else 0)
                nxt[(b, nd)] = nxt.get((b, nd), 0) + c
        states = nxt
    return sum(c for (_, d), c in states.items() if d == 0)


def words_by_listing(n: int) -> int:
    """Plain enumeration with string searches (overlapping counts)."""
    count = 0
    for w in itertools.product("01", repeat=n):
        s = "".join(w)
        c00 = sum(1 for i in range(n - 1) if s[i:i + 2] == "00")
        c01 = sum(1 for i in range(n - 1) if s[i:i + 2] == "01")
        count += c00 == c01
    return count


def bivariate_diagonal(f, N: int) -> list[Fraction]:
    """Diagonal coefficients from sympy's iterated Taylor expansion."""
    e = to_sympy(f)
    st = sp.series(e, t, 0, N + 1).removeO()
    out = []
    for n in range(N + 1):
        cn = sp.expand(st).coeff(t, n)
        cx = sp.series(cn, x, 0, n + 1).removeO()
        out.append(Fraction(str(sp.expand(cx).coeff(x, n))))
    return out


def continuous_residue_at(f, root) -> sp.Expr:
    """Residue of ``f`` in ``x`` at ``root`` from sympy's Laurent expansion."""
    return sp.simplify(sp.residue(to_sympy(f), x, root))


def linear_partial_fractions(f) -> dict[tuple[sp.Expr, int], sp.Expr]:
    """``{(beta, j): coefficient of 1/(x - beta)^j}`` for denominators split over Q(t)."""
    e = sp.apart(sp.together(to_sympy(f)), x)
    out: dict = {}
    for term in sp.Add.make_args(e):
        num, den = sp.fraction(sp.factor(term))
        if not den.has(x):
            continue
        coeff, dep = den.as_independent(x, as_Add=False)
        base, j = dep.as_base_exp()
        num = num / coeff
        lc = sp.Poly(base, x).LC()
        beta = sp.solve(base, x)[0]
        key = (sp.simplify(beta), int(j))
        out[key] = sp.simplify(out.get(key, 0) + num / lc**j)
    return out


def discrete_orbit_residues(f) -> dict[tuple[sp.Expr, int], sp.Expr]:
    """Discrete residues per integer orbit and order, with the orbit labelled by
    its root of least shift: ``beta`` and ``beta + k`` share an orbit."""
    pf = linear_partial_fractions(f)
    orbits: dict = {}
    for (beta, j), c in pf.items():
        for (rep, jj) in list(orbits):
            if jj == j and sp.simplify(beta - rep).is_integer:
                k = int(sp.simplify(beta - rep))
                if k < 0:
                    orbits[(beta, j)] = orbits.pop((rep, jj)) + c
                else:
                    orbits[(rep, jj)] += c
                break
        else:
            orbits[(beta, j)] = c
    return {k: sp.simplify(v) for k, v in orbits.items()}


def brute_dispersion(b) -> int:
    """Largest integer distance between roots, from sympy's roots."""
    roots = list(sp.roots(sp.Poly(to_sympy(b), x)).keys())
    best = 0
    for r1, r2 in itertools.product(roots, repeat=2):
        d = sp.simplify(r1 - r2)
        if d.is_integer and d > best:
            best = int(d)
    return best


def brute_q_dispersion(b, q) -> int | float:
    roots = list(sp.roots(sp.Poly(to_sympy(b), x)).keys())
    if any(r == 0 for r in roots):
        return float("inf")
    q = sp.Rational(str(q))
    best = 0
    for r1, r2 in itertools.product(roots, repeat=2):
        ratio = sp.simplify(r1 / r2)
        if ratio.is_rational and ratio != 0:
            for k in range(0, 64):
                if ratio == q**k:
                    best = max(best, k)
    return best
