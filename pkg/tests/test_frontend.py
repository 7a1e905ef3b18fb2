import json
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from golden_cases import CASES, golden_path
from ratel.arith import RatFunc, T, X
from ratel.frontend.cli import run_cli
from ratel.frontend.parser import (
    Neg,
    ParseError,
    Pow,
    parse_expr,
    parse_operator,
    parse_ratfunc,
    parse_rational,
)
from ratel.frontend.printer import dumps, format_operator, format_ratfunc
from ratel.ore import D_KIND, S_KIND, OrePoly, q_kind
from ratel.telescoping import TelescoperCase, exists_telescoper, find_telescoper
from strategies import ratfuncs

R = RatFunc


# --- parser ------------------------------------------------------------------


def test_parse_examples():
    assert parse_ratfunc("1/(t^2+x^2)") == R(1, T**2 + X**2)
    assert parse_ratfunc("(2*x+1)/(x*(x+1))") == R(2 * X + 1, X**2 + X)
    with pytest.raises(ParseError, match="zero denominator"):
        parse_ratfunc("1/(x−x)")


def test_precedence():
    assert isinstance(parse_expr("-x^2"), Neg)
    assert isinstance(parse_expr("-x^2").arg, Pow)
    assert parse_ratfunc("-x^2") == R(-(X**2))
    assert parse_ratfunc("2*3^2") == R(18)
    assert parse_ratfunc("8/4/2") == R(1)
    assert parse_ratfunc("1-2-3") == R(-4)
    assert parse_ratfunc("(x+1)^0") == R(1)
    assert parse_ratfunc("--x") == R(X)


@pytest.mark.parametrize("text,pos", [
    ("2x", 1), ("x^-1", 2), ("x^2^3", 3), ("(x", 2), ("y+1", 0), ("x+", 2), ("", 0),
    ("x $ 1", 2), ("x)", 1),
])
def test_parse_errors_report_positions(text, pos):
    with pytest.raises(ParseError) as e:
        parse_ratfunc(text)
    assert e.value.pos == pos


def test_q_symbol():
    assert parse_ratfunc("q*x", q="2/3") == R(2 * X) / 3
    with pytest.raises(ParseError, match="needs a value"):
        parse_ratfunc("q*x")
    assert parse_rational("−3/4") == parse_rational("-3/4")
    with pytest.raises(ParseError):
        parse_rational("1/0")


def test_parse_operator_examples():
    L = parse_operator("(1−4*t)*Dt − 2", D_KIND)
    assert L == OrePoly([-2, 1 - 4 * T], D_KIND)
    assert parse_operator("St^2 − 1", S_KIND) == OrePoly([-1, 0, 1], S_KIND)
    assert parse_operator("Dt*t", D_KIND) == OrePoly([1, T], D_KIND)
    assert parse_operator("Qt*t", q_kind(3)) == OrePoly([0, 3 * T], q_kind(3))
    with pytest.raises(ParseError, match="mixing operator symbols"):
        parse_operator("Dt*St", D_KIND)
    with pytest.raises(ParseError, match="must not contain x"):
        parse_operator("x*Dt", D_KIND)


# --- round trips ----------------------------------------------------------------


@given(f=ratfuncs(3))
def test_ratfunc_round_trip(f):
    assert parse_ratfunc(format_ratfunc(f)) == f
    assert parse_ratfunc(str(f)) == f


operators = st.lists(ratfuncs(2, vars=("t",)), min_size=0, max_size=4)


@pytest.mark.parametrize("kind", [D_KIND, S_KIND, q_kind(2)], ids=["D", "S", "Q"])
@given(cs=operators)
def test_operator_round_trip(kind, cs):
    L = OrePoly(cs, kind)
    assert parse_operator(format_operator(L), kind) == L


def test_json_has_no_floats():
    text = dumps({"a": R(1, 3 * X), "b": [R(2)], "c": float("inf")})
    assert json.loads(text) == {"a": "(1/3)/(x)", "b": ["2"], "c": "inf"}


# --- CLI -------------------------------------------------------------------------


def test_cli_examples():
    res = run_cli(["telescope", "--dt", "st", "--dx", "sx", "1/(t^2+x^2)"])
    assert res.code == 1 and "x^2 + t^2" in res.output
    res = run_cli(["telescope", "--dt", "dt", "--dx", "dx", "1/(x^2−t)"])
    assert res.code == 0
    assert "L: 1 + (2*t)*Dt" in res.output and "certificate: -x/(x^2 - t)" in res.output
    res = run_cli(["ez-demo"])
    assert res.code == 0 and "verdict: MATCH" in res.output


@pytest.mark.parametrize("argv,code", [
    (["reduce", "--dx", "zz", "x"], 2),
    (["reduce", "--dx", "dx", "1/(x"], 2),
    (["reduce", "--dx", "qx", "1/x"], 2),
    (["telescope", "--dt", "qt", "--dx", "qx", "--q", "1", "1/x"], 2),
    (["telescope", "--dt", "dt", "--dx", "dx"], 2),
    (["summable", "--dx", "sx", "1/x"], 1),
    (["summable", "--dx", "sx", "1/(x*(x+1))"], 0),
    (["telescope", "--dt", "st", "--dx", "sx", "--max-order", "1", "1/(2*x-t)"], 3),
    (["characterize", "--dt", "dt", "--dx", "dx", "Dt"], 2),
    (["frobnicate"], 2),
])
def test_cli_exit_codes(argv, code):
    assert run_cli(argv).code == code


def test_cli_agrees_with_library():
    case = TelescoperCase("st", "sx")
    for text in ["1/(2*x-t)", "1/(t^2+x^2)", "1/(x+t)", "x/(x^2+1)"]:
        res = run_cli(["telescope", "--dt", "st", "--dx", "sx", "--json", text])
        out = json.loads(res.output)
        f = parse_ratfunc(text)
        assert out["result"]["exists"] == exists_telescoper(f, case).answer
        if out["result"]["exists"]:
            L = find_telescoper(f, case).L.cleared()
            assert out["result"]["operator"]["text"] == format_operator(L)


def test_json_schema_keys():
    for name, argv in CASES.items():
        out = json.loads(run_cli(argv + ["--json"]).output)
        assert list(out)[:4] == ["command", "inputs", "case", "result"]
        assert set(out) <= {"command", "inputs", "case", "result", "certificate", "trace", "error"}


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    with open(golden_path(name), encoding="utf-8") as fh:
        golden = json.load(fh)
    res = run_cli(golden["argv"] + ["--json"])
    assert res.code == golden["exit"]
    assert res.output == golden["output"]


def test_batch_mode(tmp_path):
    path = tmp_path / "in.txt"
    path.write_text("1/(x^2-t)\n\n1/(x+t)\n1/(x\n", encoding="utf-8")
    for jobs in ("1", "2"):
        res = run_cli(["telescope", "--dt", "st", "--dx", "dx", "--json", "--batch", str(path), "--jobs", jobs])
        lines = [json.loads(line) for line in res.output.splitlines()]
        assert [line["inputs"] for line in lines] == [["1/(x^2-t)"], ["1/(x+t)"], ["1/(x"]]
        assert lines[0]["result"]["exists"] is False and "error" in lines[2]
        assert res.code == 2


def test_entry_point_runs():
    out = subprocess.run([sys.executable, "-m", "ratel", "summable", "--dx", "dx", "1/x^2"],
                         capture_output=True, text=True, env={**os.environ})
    assert out.returncode == 0 and "certificate: -1/(x)" in out.stdout
