import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import ALL_CASES, admissible_ratfunc, random_ratfunc
from oracles import to_sympy
from ratel.arith import RatFunc, T, X, Z
from ratel.arith.poly import ONE, primitive, squarefree_decomp
from ratel.ore import D_KIND, S_KIND, OrePoly, ore_apply, ore_rrem, q_kind
from ratel.reduction import apply_dx, is_exact, reduce
from ratel.telescoping import (
    CONSTANT_ROOT,
    INTEGER_LINEAR,
    OBSTRUCTION,
    Q_INTEGER_LINEAR,
    NoTelescoperError,
    OrderBoundExceeded,
    TelescoperCase,
    _Ansatz,
    _kernel,
    classify_factor,
    exists_telescoper,
    find_telescoper,
    is_potential_telescoper,
    minimal_annihilator_diff,
    rothstein_trager,
    verify_telescoper,
    witness_for_operator,
)
from strategies import ratfuncs, t_ratfuncs

R = RatFunc
DD = TelescoperCase("dt", "dx")
SS = TelescoperCase("st", "sx")
QQ2 = TelescoperCase("qt", "qx", 2)
t, x = sp.symbols("t x")


# --- cases -------------------------------------------------------------------


def test_case_validation():
    with pytest.raises(ValueError):
        TelescoperCase("xt", "dx")
    with pytest.raises(ValueError):
        TelescoperCase("qt", "dx")
    with pytest.raises(ValueError):
        TelescoperCase("dt", "qx", 1)
    assert TelescoperCase("dt", "sx", 5).q is None
    assert QQ2.label() == "(Q_t, Delta_qx)" and DD.label() == "(D_t, D_x)"
    assert len({c.label() for c in ALL_CASES}) == 9


# --- factor shapes -------------------------------------------------------------


def test_classify_examples():
    assert classify_factor(T**2 + X**2, SS).shape == OBSTRUCTION
    s = classify_factor(2 * X - T, SS)
    assert (s.shape, s.lam, s.mu) == (INTEGER_LINEAR, 1, 2)
    s = classify_factor(X**2 - T, QQ2)
    assert (s.shape, s.lam, s.mu, s.weight) == (Q_INTEGER_LINEAR, 1, 2, 2)
    assert classify_factor(X**2 - T, TelescoperCase("dt", "sx")).shape == OBSTRUCTION
    assert classify_factor(X**2 + 1, TelescoperCase("dt", "sx")).shape == CONSTANT_ROOT
    with pytest.raises(ValueError, match="classify requires irreducible factor"):
        classify_factor(X**2 - T**2, SS)
    with pytest.raises(ValueError):
        classify_factor(X - T, DD)


@given(mu=st.integers(1, 4), lam=st.integers(-4, 4).filter(bool), c=st.integers(-5, 5),
       quad=st.booleans())
def test_integer_linear_detected(mu, lam, c, quad):
    import math

    g = math.gcd(mu, lam)
    base = (mu * X - lam * T) // 1
    u = base + c if not quad else base**2 + abs(c) + 1
    s = classify_factor(primitive(u), SS)
    assert s.shape == INTEGER_LINEAR
    # invariance under (t, x) -> (t + mu', x + lam') with the reduced ratio
    assert (s.lam, s.mu) == (lam // g, mu // g)


@given(a=st.integers(1, 3), b=st.integers(1, 3), c=st.sampled_from([1, 2, 3, 5, -1, -7]))
def test_q_integer_linear_detected(a, b, c):
    u = primitive(X**a - c * T**b)
    from ratel.arith.poly import is_irreducible

    if not is_irreducible(u):
        return
    assert classify_factor(u, QQ2).shape == Q_INTEGER_LINEAR


# --- existence -----------------------------------------------------------------


def test_existence_examples():
    assert not exists_telescoper(R(1, T**2 + X**2), SS).answer
    assert not exists_telescoper(R(1, X**2 - T), TelescoperCase("dt", "sx")).answer
    assert not exists_telescoper(R(1, X + T), TelescoperCase("st", "dx")).answer
    assert not exists_telescoper(R(1, X + T), TelescoperCase("qt", "dx", 2)).answer
    assert exists_telescoper(R(1, 2 * X - T), SS).answer
    assert exists_telescoper(R(1, X**2 - T), QQ2).answer
    d = exists_telescoper(R(1, T**2 + X**2), SS)
    assert d.obstructions == (X**2 + T**2,)


@given(f=ratfuncs(3))
def test_diff_diff_always_exists(f):
    assert exists_telescoper(f, DD).answer


@pytest.mark.parametrize("case", [c for c in ALL_CASES if c.label() != "(D_t, D_x)"], ids=str)
def test_negative_decisions_agree_with_bounded_search(case):
    """When the decider says no, no telescoper of order <= 3 exists either."""
    rng = random.Random(7)
    found = 0
    while found < 6:
        f = random_ratfunc(rng, 3)
        if exists_telescoper(f, case).answer:
            continue
        found += 1
        ans = _Ansatz(f, case)
        for rho in range(4):
            assert _kernel(ans.matrix(rho), rho + 1) == []


# --- construction --------------------------------------------------------------


def test_find_examples():
    res = find_telescoper(R(1, X**2 - T), DD)
    assert res.L == OrePoly([R(1, 2 * T), 1], D_KIND)
    assert res.L.cleared() == OrePoly([1, 2 * T], D_KIND)
    assert res.order_trace == ((0, 0), (1, 1))
    assert verify_telescoper(R(1, X**2 - T), res.L, res.certificate, DD)
    res = find_telescoper(R(1, 2 * X - T), SS)
    assert res.L == OrePoly([-1, 0, 1], S_KIND)
    assert res.certificate == R(-1, 2 * X - T - 2)
    assert res.order_trace == ((0, 0), (1, 0), (2, 1))
    res = find_telescoper(R(1, T * X), SS)
    assert res.L == OrePoly([R(-T, T + 1), 1], S_KIND)
    assert res.certificate.is_zero()
    res = find_telescoper(R(1, X**2 - T), QQ2)
    assert res.L == OrePoly([R(-1, 4), 0, 1], q_kind(2))


def test_verify_examples():
    f = R(1, X**2 - T)
    L = OrePoly([1, 2 * T], D_KIND)
    assert verify_telescoper(f, L, R(-X, X**2 - T), DD)
    assert not verify_telescoper(f, L, R(-2 * T * X, X**2 - T), DD)
    f = R(1, 2 * X - T)
    L = OrePoly([-1, 0, 1], S_KIND)
    assert verify_telescoper(f, L, R(-1, 2 * X - T - 2), SS)
    assert not verify_telescoper(f, L, R(), SS)


def test_no_telescoper_raises():
    with pytest.raises(NoTelescoperError) as e:
        find_telescoper(R(1, T**2 + X**2), SS)
    assert e.value.obstructions == (X**2 + T**2,)


def test_order_bound_exceeded():
    with pytest.raises(OrderBoundExceeded):
        find_telescoper(R(1, 2 * X - T), SS, max_order=1)


def test_exact_input_has_order_zero_telescoper():
    h = R(1, X**2 - T)
    res = find_telescoper(apply_dx(h, "sx"), SS)
    assert res.order == 0 and verify_telescoper(apply_dx(h, "sx"), res.L, res.certificate, SS)


@pytest.mark.parametrize("case", ALL_CASES, ids=str)
@settings(max_examples=12)
@given(seed=st.integers(0, 10**6))
def test_construction_sound_and_minimal(case, seed):
    f = admissible_ratfunc(random.Random(seed), case, 3)
    if not exists_telescoper(f, case).answer:
        return
    res = find_telescoper(f, case)
    assert verify_telescoper(f, res.L, res.certificate, case)
    assert res.L.lc().is_one()
    assert [n for _, n in res.order_trace[:-1]] == [0] * res.order
    assert res.order_trace[-1] == (res.order, res.order_trace[-1][1]) and res.order_trace[-1][1] >= 1
    assert res.order <= res.bound


# --- the (D_t, D_x) route through residues ---------------------------------------


def test_rothstein_trager():
    Rz = rothstein_trager(R(1), X**2 - T)
    assert sp.factor(to_sympy(Rz)) in (sp.factor(4 * t * sp.Symbol("z") ** 2 - 1),
                                        sp.factor(1 - 4 * t * sp.Symbol("z") ** 2))


def test_minimal_annihilator_examples():
    assert minimal_annihilator_diff(Z**2 - T) == OrePoly([R(-1, 2 * T), 1], D_KIND)
    assert minimal_annihilator_diff(4 * T * Z**2 - 1) == OrePoly([R(1, 2 * T), 1], D_KIND)
    assert minimal_annihilator_diff(Z - T) == OrePoly([R(-1, T), 1], D_KIND)
    with pytest.raises(ValueError):
        minimal_annihilator_diff((Z - T) ** 2)


def _residue_annihilator(f):
    _, r = reduce(f, "dx")
    Rz = ONE
    for term in r.terms:
        Rz *= rothstein_trager(term.numerator, term.u)
    sq = ONE
    for p, _ in squarefree_decomp(Rz, "z"):
        sq *= p
    return minimal_annihilator_diff(primitive(sq))


@settings(max_examples=15)
@given(f=ratfuncs(2))
def test_ansatz_equals_residue_annihilator(f):
    """The minimal telescoper is the minimal annihilator of the residues."""
    _, r = reduce(f, "dx")
    if r.is_zero():
        return
    res = find_telescoper(f, DD)
    assert res.L == _residue_annihilator(f)


@settings(max_examples=15)
@given(f=ratfuncs(2))
def test_two_methods_agree(f):
    a = find_telescoper(f, DD)
    b = find_telescoper(f, DD, method="annihilator")
    assert a.L == b.L and a.order_trace == b.order_trace
    assert verify_telescoper(f, b.L, b.certificate, DD)


# --- characterization ------------------------------------------------------------


def test_characterization_examples():
    L = OrePoly([R(-(T + 1), T), 1], S_KIND)
    assert is_potential_telescoper(L, SS)
    assert not is_potential_telescoper(OrePoly([-2, 1], S_KIND), SS)
    assert is_potential_telescoper(OrePoly([-1, T], D_KIND), TelescoperCase("dt", "sx"))
    with pytest.raises(ValueError, match="characterization requires algebraic solutions"):
        is_potential_telescoper(OrePoly([0, 1], D_KIND), DD)


def test_witness_examples():
    L = OrePoly([R(-(T + 1), T), 1], S_KIND)
    assert witness_for_operator(L, SS) == R(T, X)
    Lp = OrePoly([R(-1, 2 * T), 1], D_KIND)
    assert witness_for_operator(Lp, DD, X**2 - T) == R(2 * X**2, X**2 - T)
    with pytest.raises(ValueError):
        witness_for_operator(OrePoly([-2, 1], S_KIND), TelescoperCase("st", "dx"))


@pytest.mark.parametrize("case", [c for c in ALL_CASES if c.label() != "(D_t, D_x)"], ids=str)
@settings(max_examples=10)
@given(r=t_ratfuncs(2).filter(lambda r: not r.is_zero()))
def test_witness_round_trip(case, r):
    """First-order annihilators of rational r are telescopers of non-exact witnesses."""
    kind = case.kind
    L = OrePoly([-kind.act(r) / r, 1], kind) if kind.tag != "D" else OrePoly([-r.diff("t") / r, 1], kind)
    assert is_potential_telescoper(L, case)
    f = witness_for_operator(L, case)
    assert not is_exact(f, case.dx, case.x_q)[0]
    res = find_telescoper(f, case)
    assert ore_rrem(L, res.L).is_zero()
