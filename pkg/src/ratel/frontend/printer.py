"""Text and JSON forms of the library's values.

Every string produced here parses back to the same value with
:func:`~ratel.frontend.parser.parse_ratfunc` or
:func:`~ratel.frontend.parser.parse_operator`.  In JSON, rationals are
strings ``"p/q"`` and never floats.
"""

from __future__ import annotations

import json
import math

from flint import fmpq

from ..arith.poly import Poly
from ..arith.ratfunc import RatFunc
from ..arith.series import SeriesVec
from ..ore import OrePoly
from ..reduction import ResidualForm, ResidueData
from ..telescoping import Decision, FactorShape, TelescoperCase


def format_rational(c) -> str:
    c = fmpq(c)
    return str(c.p) if c.q == 1 else f"{c.p}/{c.q}"


def format_poly(p: Poly) -> str:
    return str(p)


def format_ratfunc(f: RatFunc) -> str:
    """``num`` or ``(num)/(den)``.

    Examples
    ========

    >>> from ratel.arith import RatFunc, X, T
    >>> from ratel.frontend.printer import format_ratfunc
    >>> format_ratfunc(RatFunc(1, X**2 - T))
    '1/(x^2 - t)'
    """
    f = RatFunc.coerce(f)
    num = str(f.num)
    if f.den.is_one():
        return num
    if not _is_atom(num):
        num = f"({num})"
    return f"{num}/({f.den})"


def _is_atom(s: str) -> bool:
    return s.lstrip("-").isalnum()


def format_operator(L: OrePoly) -> str:
    """``c0 + (c1)*Dt + (c2)*Dt^2 + ...`` with zero terms omitted.

    Examples
    ========

    >>> from ratel.arith import T
    >>> from ratel.ore import OrePoly, D_KIND
    >>> from ratel.frontend.printer import format_operator
    >>> format_operator(OrePoly([-2, 1 - 4 * T], D_KIND))
    '-2 + (-4*t + 1)*Dt'
    """
    sym = L.kind.symbol
    parts = []
    for i, c in enumerate(L.coeffs):
        if c.is_zero():
            continue
        mono = "" if i == 0 else (sym if i == 1 else f"{sym}^{i}")
        s = format_ratfunc(c)
        if not mono:
            parts.append(s)
        elif c.is_one():
            parts.append(mono)
        else:
            parts.append(f"({s})*{mono}")
    return " + ".join(parts) if parts else "0"


def format_case(case) -> str:
    if isinstance(case, TelescoperCase):
        return case.label()
    return str(case)


# ---------------------------------------------------------------------------
# JSON


def case_json(case) -> dict | None:
    if case is None:
        return None
    if isinstance(case, TelescoperCase):
        return {
            "dt": case.dt,
            "dx": case.dx,
            "q": None if case.q is None else format_rational(case.q),
            "label": case.label(),
        }
    return dict(case)


def operator_json(L: OrePoly) -> dict:
    return {
        "kind": L.kind.tag,
        "q": None if L.kind.q is None else format_rational(L.kind.q),
        "order": L.order,
        "coefficients": [format_ratfunc(c) for c in L.coeffs],
        "text": format_operator(L),
    }


def residual_json(r: ResidualForm) -> dict:
    return {
        "case": r.case,
        "terms": [
            {"u": format_poly(term.u), "j": term.j, "numerator": format_ratfunc(term.numerator)}
            for term in r.terms
        ],
        "infinity": None if r.infinity is None else format_ratfunc(r.infinity),
        "value": format_ratfunc(r.to_ratfunc()),
    }


def residue_json(d: ResidueData) -> dict:
    return {
        "kind": d.kind,
        "u": None if d.u is None else format_poly(d.u),
        "value": format_ratfunc(d.value),
        "multiplicity": d.multiplicity,
    }


def shape_json(s: FactorShape) -> dict:
    return {"u": format_poly(s.u), "shape": s.shape, "lambda": s.lam, "mu": s.mu, "weight": s.weight}


def decision_json(d: Decision) -> dict:
    return {
        "answer": d.answer,
        "shapes": [shape_json(s) for s in d.shapes],
        "obstructions": [format_poly(u) for u in d.obstructions],
    }


def series_json(s: SeriesVec) -> list[str]:
    return [format_rational(c) for c in s.coefficients]


def to_jsonable(value):
    """Recursively convert library values to JSON-compatible data."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        raise TypeError("floats are not part of the output schema")
    if isinstance(value, fmpq):
        return format_rational(value)
    if isinstance(value, RatFunc):
        return format_ratfunc(value)
    if isinstance(value, Poly):
        return format_poly(value)
    if isinstance(value, OrePoly):
        return operator_json(value)
    if isinstance(value, ResidualForm):
        return residual_json(value)
    if isinstance(value, ResidueData):
        return residue_json(value)
    if isinstance(value, Decision):
        return decision_json(value)
    if isinstance(value, FactorShape):
        return shape_json(value)
    if isinstance(value, SeriesVec):
        return series_json(value)
    if isinstance(value, TelescoperCase):
        return case_json(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(obj) -> str:
    """Compact, key-order-preserving JSON on one line."""
    return json.dumps(to_jsonable(obj), ensure_ascii=True, separators=(", ", ": "))


__all__ = [
    "format_rational", "format_poly", "format_ratfunc", "format_operator", "format_case",
    "case_json", "operator_json", "residual_json", "residue_json", "shape_json",
    "decision_json", "series_json", "to_jsonable", "dumps",
]
