"""Exact linear algebra over Q and over Q(t)."""

from __future__ import annotations

import random

from flint import fmpq, fmpq_mat

from .poly import as_rat
from .ratfunc import RatFunc


def _to_mat(rows: list[list[fmpq]], ncols: int) -> fmpq_mat:
    return fmpq_mat(len(rows), ncols, [as_rat(v) for row in rows for v in row])


def rank_q(rows: list[list[fmpq]], ncols: int) -> int:
    if not rows:
        return 0
    return _to_mat(rows, ncols).rank()


def nullspace_q(rows: list[list[fmpq]], ncols: int) -> list[list[fmpq]]:
    """Basis of ``{v : M v = 0}`` over Q, in reduced echelon form."""
    if not rows:
        return [[fmpq(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, rank = _to_mat(rows, ncols).rref()
    pivots = []
    r = 0
    for c in range(ncols):
        if r < rank and R[r, c] != 0:
            pivots.append(c)
            r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [fmpq(0)] * ncols
        v[f] = fmpq(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(v)
    return basis


def _specialize(rows: list[list[RatFunc]], point: dict) -> list[list[fmpq]] | None:
    out = []
    for row in rows:
        vals = []
        for e in row:
            if e.is_zero():
                vals.append(fmpq(0))
                continue
            d = e.den.subs(point)
            if d.is_zero():
                return None
            n = e.num.subs(point)
            vals.append(fmpq(0) if n.is_zero() else n.leading_coefficient() / d.leading_coefficient())
        out.append(vals)
    return out


def specialized_rank(rows: list[list[RatFunc]], ncols: int, var: str = "t",
                     seed: int = 20240917, tries: int = 8) -> int:
    """Rank of the matrix at a random rational value of ``var``.

    A specialization never increases the rank, so the value is a lower bound
    for the generic rank and equals it outside finitely many points.
    """
    rng = random.Random(seed)
    best = 0
    for _ in range(tries):
        point = {var: fmpq(rng.randint(-10**6, 10**6), rng.randint(1, 10**3))}
        m = _specialize(rows, point)
        if m is None:
            continue
        best = max(best, rank_q(m, ncols))
        if best == min(len(rows), ncols):
            break
    return best


def _size(e: RatFunc) -> int:
    return len(e.num) + len(e.den)


def nullspace_rf(rows: list[list[RatFunc]], ncols: int) -> list[list[RatFunc]]:
    """Basis of the right nullspace over the rational function field.

    Gauss-Jordan elimination with pivots chosen by smallest expression size.
    """
    m = [list(r) for r in rows if any(not e.is_zero() for e in r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        cand = [i for i in range(r, len(m)) if not m[i][c].is_zero()]
        if not cand:
            continue
        p = min(cand, key=lambda i: _size(m[i][c]))
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [e * inv for e in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b if not b.is_zero() else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [RatFunc()] * ncols
        v[f] = RatFunc(1)
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis
