"""Existence and construction of telescopers for rational functions.

A telescoper for ``f(t, x)`` is a nonzero operator ``L`` in ``d_t`` with
coefficients in Q(t) such that ``L(f) = d_x(g)`` for a rational ``g``, the
certificate.  Here ``d_t`` is one of ``D_t``, ``S_t``, ``Q_t`` and ``d_x``
one of ``D_x``, ``Delta_x``, ``Delta_{q,x}``, giving nine cases.

Existence is decided on the residual form of ``f``: a telescoper exists iff
every irreducible factor of the residual denominator has the shape required
by the case (constant roots for the six mixed cases, roots ``r*t + c`` for
``(S_t, Delta_x)``, roots ``c*t^r`` for ``(Q_t, Delta_{q,x})``, and no
condition for ``(D_t, D_x)``).

Telescopers are built by an ansatz over increasing order: the residual
forms of ``d_t^l f`` are computed on a shared orbit table and the
telescoper coefficients span the kernel of the resulting linear system.
The first order with a nontrivial kernel gives the minimal telescoper.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from flint import fmpq

from .arith.linalg import nullspace_rf, specialized_rank
from .arith.poly import (
    ONE,
    X,
    Z,
    Poly,
    as_rat,
    coefficient,
    degree,
    is_irreducible,
    primitive,
    resultant,
    scale,
    shift,
    squarefree_decomp,
)
from .arith.qtx import pcoeff, pdeg, pinvert, prem
from .arith.ratfunc import RatFunc
from .ore import (
    D_KIND,
    S_KIND,
    OreKind,
    OrePoly,
    check_q,
    ore_apply,
    ore_rdiv,
    q_kind,
    rational_solutions,
)
from .reduction import DX, QX, SX, Reducer, apply_dx, check_case, reduce

log = logging.getLogger(__name__)

DT = "dt"
ST = "st"
QT = "qt"
T_OPERATORS = (DT, ST, QT)

CONSTANT_ROOT = "constantRoot"
INTEGER_LINEAR = "integerLinear"
Q_INTEGER_LINEAR = "qIntegerLinear"
T_ONLY = "tOnly"
OBSTRUCTION = "obstruction"

_NAMES = {DT: "D_t", ST: "S_t", QT: "Q_t", DX: "D_x", SX: "Delta_x", QX: "Delta_qx"}


class NoTelescoperError(ValueError):
    """Raised when the existence decider answers no."""

    def __init__(self, obstructions):
        self.obstructions = tuple(obstructions)
        names = ", ".join(str(u) for u in self.obstructions)
        super().__init__(f"no telescoper exists; obstruction factors: {names}")


class OrderBoundExceeded(RuntimeError):
    """Raised when the requested maximal order is below the needed order."""

    def __init__(self, max_order: int, bound: int):
        self.max_order = max_order
        self.bound = bound
        super().__init__(
            f"order bound exceeded: no telescoper of order <= {max_order}; internal bound is {bound}"
        )


@dataclass(frozen=True)
class TelescoperCase:
    """One of the nine operator pairs ``(d_t, d_x)``."""

    dt: str
    dx: str
    q: fmpq | None = None

    def __post_init__(self):
        if self.dt not in T_OPERATORS:
            raise ValueError(f"unknown t-operator {self.dt!r}; expected one of {T_OPERATORS}")
        check_case(self.dx, self.q if self.dx == QX else None)
        if self.dt == QT or self.dx == QX:
            object.__setattr__(self, "q", check_q(self.q))
        else:
            object.__setattr__(self, "q", None)

    @property
    def kind(self) -> OreKind:
        if self.dt == DT:
            return D_KIND
        if self.dt == ST:
            return S_KIND
        return q_kind(self.q)

    @property
    def x_q(self) -> fmpq | None:
        return self.q if self.dx == QX else None

    @property
    def mixed(self) -> bool:
        return (self.dt, self.dx) not in ((DT, DX), (ST, SX), (QT, QX))

    def label(self) -> str:
        return f"({_NAMES[self.dt]}, {_NAMES[self.dx]})"

    def apply_dt(self, f: RatFunc) -> RatFunc:
        return self.kind.act(f, "t")


@dataclass(frozen=True)
class FactorShape:
    """Shape of the roots of an irreducible factor ``u`` as functions of ``t``."""

    u: Poly
    shape: str
    lam: int | None = None
    mu: int | None = None
    weight: int | None = None


@dataclass(frozen=True)
class Decision:
    answer: bool
    shapes: tuple[FactorShape, ...] = ()
    obstructions: tuple[Poly, ...] = ()


@dataclass(frozen=True)
class TelescoperResult:
    L: OrePoly
    certificate: RatFunc
    case: TelescoperCase
    minimal: bool
    order_trace: tuple[tuple[int, int], ...] = field(default_factory=tuple)
    bound: int | None = None

    @property
    def order(self) -> int:
        return self.L.order


# ---------------------------------------------------------------------------
# factor shapes


def _has_constant_roots(u: Poly) -> bool:
    n = degree(u, "x")
    lc = coefficient(u, "x", n)
    for k in range(n):
        c = coefficient(u, "x", k)
        if not c.is_zero() and not RatFunc(c, lc).is_constant():
            return False
    return True


def _integer_linear(u: Poly) -> FactorShape:
    n = degree(u, "x")
    an = coefficient(u, "x", n)
    if not an.is_constant():
        return FactorShape(u, OBSTRUCTION)
    s = RatFunc(coefficient(u, "x", n - 1), an)
    if not s.is_polynomial() or degree(s.num, "t") > 1:
        return FactorShape(u, OBSTRUCTION)
    r = -RatFunc(coefficient(s.num, "t", 1), s.den).constant_value() / n
    if r == 0:
        return FactorShape(u, OBSTRUCTION)
    lam, mu = int(r.p), int(r.q)
    moved = shift(shift(u, "t", mu), "x", lam)
    if moved != u:
        return FactorShape(u, OBSTRUCTION)
    return FactorShape(u, INTEGER_LINEAR, lam, mu)


def _q_integer_linear(u: Poly, q: fmpq) -> FactorShape:
    mons = [(int(m[3]), int(m[2])) for m in u.monoms()]
    a1, b1 = mons[0]
    r = None
    for a2, b2 in mons[1:]:
        if b2 != b1:
            r = -fmpq(a1 - a2, b1 - b2)
            break
    if r is None or r == 0:
        return FactorShape(u, OBSTRUCTION)
    lam, mu = int(r.p), int(r.q)
    e = mu * a1 + lam * b1
    if any(mu * a + lam * b != e for a, b in mons):
        return FactorShape(u, OBSTRUCTION)
    moved = scale(scale(u, "t", q**mu), "x", q**lam)
    if moved != u * q**e:
        return FactorShape(u, OBSTRUCTION)
    return FactorShape(u, Q_INTEGER_LINEAR, lam, mu, e)


def classify_factor(u: Poly, case: TelescoperCase, check: bool = True) -> FactorShape:
    """Classify an irreducible ``u`` against the shape required by ``case``.

    Examples
    ========

    >>> from ratel.arith import X, T
    >>> from ratel.telescoping import TelescoperCase, classify_factor
    >>> classify_factor(2 * X - T, TelescoperCase("st", "sx"))
    FactorShape(u=2*x - t, shape='integerLinear', lam=1, mu=2, weight=None)
    >>> classify_factor(X**2 - T, TelescoperCase("qt", "qx", 2)).shape
    'qIntegerLinear'
    """
    if degree(u, "x") <= 0:
        return FactorShape(u, T_ONLY)
    if check and not is_irreducible(u):
        raise ValueError("classify requires irreducible factor")
    if (case.dt, case.dx) == (DT, DX):
        raise ValueError("every factor is admissible for (D_t, D_x); there is no shape to test")
    if _has_constant_roots(u):
        if (case.dt, case.dx) == (QT, QX):
            return FactorShape(u, CONSTANT_ROOT, 0, 1, 0)
        return FactorShape(u, CONSTANT_ROOT, 0, 1)
    if case.mixed:
        return FactorShape(u, OBSTRUCTION)
    if case.dt == ST:
        return _integer_linear(u)
    return _q_integer_linear(u, case.q)


def exists_telescoper(f, case: TelescoperCase) -> Decision:
    """Decide whether ``f`` has a telescoper of type ``case``.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.telescoping import TelescoperCase, exists_telescoper
    >>> exists_telescoper(RatFunc(1, T**2 + X**2), TelescoperCase("st", "sx")).answer
    False
    >>> exists_telescoper(RatFunc(1, 2 * X - T), TelescoperCase("st", "sx")).answer
    True
    """
    f = RatFunc.coerce(f)
    if (case.dt, case.dx) == (DT, DX):
        return Decision(True)
    _, r = reduce(f, case.dx, case.x_q)
    shapes = tuple(classify_factor(term.u, case, check=False) for term in r.terms)
    obstructions = tuple(s.u for s in shapes if s.shape == OBSTRUCTION)
    return Decision(not obstructions, shapes, obstructions)


# ---------------------------------------------------------------------------
# order bounds


def rothstein_trager(a: RatFunc, b: Poly) -> Poly:
    """``res_x(b, a - z*D_x(b))`` for a proper ``a/b`` with squarefree ``b``.

    ``a`` may have a denominator in ``t``; it is cleared first.
    """
    num = a.num
    return resultant(b, num - Z * b.derivative("x") * a.den, "x")


def _order_bound(case: TelescoperCase, r) -> int:
    """Order of the telescoper built from first-order pieces and LCLMs."""
    if (case.dt, case.dx) == (DT, DX):
        total = 0
        for term in r.terms:
            R = rothstein_trager(term.numerator, term.u)
            total += sum(degree(p, "z") for p, _ in squarefree_decomp(R, "z"))
        return total
    total = 0
    for term in r.terms:
        s = classify_factor(term.u, case, check=False)
        mu = s.mu or 1
        total += mu * term.j * degree(term.u, "x")
    if not r.infinity.is_zero():
        total += 1
    return total


# ---------------------------------------------------------------------------
# the ansatz engine


class _Ansatz:
    """Residual forms of ``d_t^l f`` for ``l = 0, 1, ...`` on one orbit table."""

    def __init__(self, f: RatFunc, case: TelescoperCase):
        self.case = case
        self.red = Reducer(case.dx, case.x_q)
        self.levels: list[tuple[dict, RatFunc]] = []
        self.certs: list[RatFunc] = []
        g, terms, c = self.red.reduce(f)
        self._push(g, terms, c)

    def _push(self, g, terms, c):
        self.levels.append((terms, c))
        self.certs.append(g)

    def residual(self, level: int) -> RatFunc:
        terms, c = self.levels[level]
        out = RatFunc(c)
        for rep, J, N in terms.values():
            out = out + N / RatFunc(rep**J)
        return out

    def extend(self):
        nxt = self.case.apply_dt(self.residual(len(self.levels) - 1))
        g, terms, c = self.red.reduce(nxt)
        self._push(g, terms, c)

    def matrix(self, rho: int) -> list[list[RatFunc]]:
        while len(self.levels) <= rho:
            self.extend()
        reps: dict[str, tuple[Poly, int]] = {}
        for terms, _ in self.levels[: rho + 1]:
            for key, (rep, J, _) in terms.items():
                old = reps.get(key)
                reps[key] = (rep, max(J, old[1] if old else 0))
        rows: list[list[RatFunc]] = []
        for key, (rep, Jmax) in reps.items():
            n = Jmax * degree(rep, "x")
            cols = []
            for terms, _ in self.levels[: rho + 1]:
                entry = terms.get(key)
                if entry is None:
                    cols.append(None)
                    continue
                _, J, N = entry
                cols.append(N * RatFunc(rep ** (Jmax - J)) if J < Jmax else N)
            for i in range(n):
                rows.append([RatFunc() if col is None else pcoeff(col, "x", i) for col in cols])
        if self.case.dx == QX:
            rows.append([c for _, c in self.levels[: rho + 1]])
        return [row for row in rows if any(not e.is_zero() for e in row)]

    def certificate(self, e: list[RatFunc]) -> RatFunc:
        # G_0 = g_0, G_l = d_t(G_{l-1}) + g_l; certificate = sum e_l G_l
        out = RatFunc()
        G = RatFunc()
        for l, el in enumerate(e):
            G = self.certs[l] if l == 0 else self.case.apply_dt(G) + self.certs[l]
            if not el.is_zero():
                out = out + el * G
        return out


def _kernel(rows: list[list[RatFunc]], ncols: int) -> list[list[RatFunc]]:
    if not rows:
        return [[RatFunc(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    if specialized_rank(rows, ncols) == ncols:
        return []
    return nullspace_rf(rows, ncols)


def find_telescoper(f, case: TelescoperCase, max_order: int | None = None,
                    method: str = "ansatz") -> TelescoperResult:
    """Minimal telescoper of ``f`` with a certificate.

    ``method="annihilator"`` is available for ``(D_t, D_x)`` and builds the
    operator from the Rothstein-Trager resultant of the residual form.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.telescoping import TelescoperCase, find_telescoper
    >>> res = find_telescoper(RatFunc(1, X**2 - T), TelescoperCase("dt", "dx"))
    >>> res.L.cleared(), res.certificate
    (OrePoly([1, 2*t], D), RatFunc(-1/2*x, x^2*t - t^2))
    """
    f = RatFunc.coerce(f)
    dec = exists_telescoper(f, case)
    if not dec.answer:
        raise NoTelescoperError(dec.obstructions)
    if method == "annihilator":
        return _find_by_annihilator(f, case, max_order)
    if method != "ansatz":
        raise ValueError(f"unknown method {method!r}")
    ans = _Ansatz(f, case)
    bound = _order_bound(case, _residual_form_of(ans, case))
    limit = bound if max_order is None else min(bound, max_order)
    trace = []
    for rho in range(limit + 1):
        rows = ans.matrix(rho)
        ker = _kernel(rows, rho + 1)
        trace.append((rho, len(ker)))
        log.debug("order %d: %d equations, nullity %d", rho, len(rows), len(ker))
        if ker:
            v = ker[0]
            if v[rho].is_zero():
                raise ArithmeticError("kernel vector without leading coefficient")
            inv = v[rho].inverse()
            e = [c * inv for c in v]
            L = OrePoly(e, case.kind)
            g = ans.certificate(e)
            return TelescoperResult(L, g, case, True, tuple(trace), bound)
    if max_order is not None and max_order < bound:
        raise OrderBoundExceeded(max_order, bound)
    raise ArithmeticError(f"no telescoper found up to the bound {bound}")


def _residual_form_of(ans: _Ansatz, case: TelescoperCase):
    from .reduction import ResidualForm, ResidualTerm

    terms, c = ans.levels[0]
    return ResidualForm(case.dx, tuple(ResidualTerm(u, J, N) for u, J, N in terms.values()), c, case.x_q)


def verify_telescoper(f, L: OrePoly, g, case: TelescoperCase) -> bool:
    """Check ``L(f) = d_x(g)`` exactly.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.ore import OrePoly, D_KIND
    >>> from ratel.telescoping import TelescoperCase, verify_telescoper
    >>> L = OrePoly([1, 2 * T], D_KIND)
    >>> verify_telescoper(RatFunc(1, X**2 - T), L, RatFunc(-X, X**2 - T), TelescoperCase("dt", "dx"))
    True
    """
    if L.kind != case.kind:
        raise ValueError("operator kind does not match the case")
    f, g = RatFunc.coerce(f), RatFunc.coerce(g)
    if L.is_zero():
        return False
    return ore_apply(L, f) == apply_dx(g, case.dx, case.x_q)


# ---------------------------------------------------------------------------
# (D_t, D_x) through algebraic residues


def minimal_annihilator_diff(R: Poly) -> OrePoly:
    """Minimal monic ``L`` in ``D_t`` killing every root ``z(t)`` of ``R(t, z)``.

    Examples
    ========

    >>> from ratel.arith import Z, T
    >>> from ratel.telescoping import minimal_annihilator_diff
    >>> minimal_annihilator_diff(Z**2 - T)
    OrePoly([(-1/2)/(t), 1], D)
    """
    n = degree(R, "z")
    if n <= 0:
        raise ValueError("minimal_annihilator_diff needs positive z-degree")
    if degree(R.gcd(R.derivative("z")), "z") > 0:
        raise ValueError("R is not squarefree in z; make it squarefree first")
    Rm = RatFunc(R)
    dz = prem(-RatFunc(R.derivative("t")) * pinvert(RatFunc(R.derivative("z")), Rm, "z"), Rm, "z")

    def deriv(e: RatFunc) -> RatFunc:
        return prem(e.diff("t") + e.diff("z") * dz, Rm, "z")

    vecs = [prem(RatFunc(Z), Rm, "z")]
    while True:
        k = len(vecs) - 1
        rows = [[pcoeff(v, "z", i) for v in vecs] for i in range(n)]
        ker = nullspace_rf([r for r in rows if any(not e.is_zero() for e in r)], k + 1)
        if ker:
            v = ker[0]
            inv = v[k].inverse()
            return OrePoly([c * inv for c in v], D_KIND)
        if k >= n:
            raise ArithmeticError("no linear dependence among derivatives")
        vecs.append(deriv(vecs[-1]))


def _find_by_annihilator(f: RatFunc, case: TelescoperCase, max_order) -> TelescoperResult:
    if (case.dt, case.dx) != (DT, DX):
        raise ValueError("the annihilator method is only available for (D_t, D_x)")
    g0, r = reduce(f, DX)
    if r.is_zero():
        return TelescoperResult(OrePoly([1], D_KIND), g0, case, True, ((0, 1),), 0)
    R = ONE
    for term in r.terms:
        R *= rothstein_trager(term.numerator, term.u)
    sq = ONE
    for p, _ in squarefree_decomp(R, "z"):
        sq *= p
    L = minimal_annihilator_diff(primitive(sq))
    if max_order is not None and L.order > max_order:
        raise OrderBoundExceeded(max_order, L.order)
    Lr = ore_apply(L, r.to_ratfunc())
    g1, r1 = reduce(Lr, DX)
    if not r1.is_zero():
        log.warning("annihilator path left a residual; falling back to the ansatz")
        return find_telescoper(f, case, max_order)
    g = ore_apply(L, g0) + g1
    trace = []
    ans = _Ansatz(f, case)
    for rho in range(L.order):
        trace.append((rho, len(_kernel(ans.matrix(rho), rho + 1))))
    trace.append((L.order, 1))
    return TelescoperResult(L, g, case, all(k == 0 for _, k in trace[:-1]), tuple(trace), L.order)


# ---------------------------------------------------------------------------
# characterization of telescopers


def is_potential_telescoper(L: OrePoly, case: TelescoperCase) -> bool:
    """Whether ``L`` is a telescoper of some non-exact rational function.

    Outside ``(D_t, D_x)`` this holds iff ``L`` has a nonzero rational
    solution.

    Examples
    ========

    >>> from ratel.arith import RatFunc, T
    >>> from ratel.ore import OrePoly, S_KIND
    >>> from ratel.telescoping import TelescoperCase, is_potential_telescoper
    >>> is_potential_telescoper(OrePoly([RatFunc(-(T + 1), T), 1], S_KIND), TelescoperCase("st", "sx"))
    True
    """
    if (case.dt, case.dx) == (DT, DX):
        raise ValueError("characterization requires algebraic solutions; use witness_for_operator instead")
    if L.kind != case.kind:
        raise ValueError("operator kind does not match the case")
    return bool(rational_solutions(L))


def witness_for_operator(L: OrePoly, case: TelescoperCase, P: Poly | None = None) -> RatFunc:
    """A non-exact rational function telescoped by ``L``.

    For the eight cases other than ``(D_t, D_x)`` the witness is ``r/x``
    (``r/(x-1)`` for ``Delta_{q,x}``, since ``r/x`` is q-summable) with
    ``r`` a rational solution of ``L``.  For ``(D_t, D_x)`` the caller
    passes a polynomial ``P(t, x)`` whose roots in ``x`` are annihilated by
    ``L`` and the witness is ``x*D_x(P)/P``.  In every case the minimal
    telescoper of the witness is checked to right-divide ``L``.
    """
    if L.kind != case.kind:
        raise ValueError("operator kind does not match the case")
    if (case.dt, case.dx) == (DT, DX):
        if P is None:
            raise ValueError("(D_t, D_x) witnesses need the polynomial P")
        f = RatFunc(X * P.derivative("x"), P)
    else:
        sols = rational_solutions(L)
        if not sols:
            raise ValueError("operator has no nonzero rational solution")
        r = sols[0]
        f = r / RatFunc(X - 1 if case.dx == QX else X)
    res = find_telescoper(f, case)
    _, rem = ore_rdiv(L, res.L)
    if not rem.is_zero():
        raise ArithmeticError("minimal telescoper of the witness does not divide the operator")
    return f


__all__ = [
    "DT", "ST", "QT", "T_OPERATORS", "CONSTANT_ROOT", "INTEGER_LINEAR",
    "Q_INTEGER_LINEAR", "T_ONLY", "OBSTRUCTION", "TelescoperCase", "FactorShape",
    "Decision", "TelescoperResult", "NoTelescoperError", "OrderBoundExceeded",
    "classify_factor", "exists_telescoper", "find_telescoper", "verify_telescoper",
    "minimal_annihilator_diff", "is_potential_telescoper", "witness_for_operator",
    "rothstein_trager",
]
