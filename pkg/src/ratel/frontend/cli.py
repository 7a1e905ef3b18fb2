"""Command line interface.

Exit codes: 0 success, 1 negative decision, 2 usage or parse error,
3 order bound exceeded.  With ``--json`` each command prints one object
with the keys ``command, inputs, case, result`` and, where relevant,
``certificate`` and ``trace``; ``--batch`` prints one object per line.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..diagonal import diagonal_report, ez_pipeline
from ..ore import D_KIND, S_KIND, q_kind, rational_solutions
from ..reduction import CASES, is_exact, reduce, residues
from ..telescoping import (
    T_OPERATORS,
    NoTelescoperError,
    OrderBoundExceeded,
    TelescoperCase,
    find_telescoper,
    is_potential_telescoper,
    verify_telescoper,
)
from .parser import ParseError, parse_operator, parse_ratfunc, parse_rational
from .printer import (
    case_json,
    dumps,
    format_operator,
    format_ratfunc,
    format_rational,
    operator_json,
    residual_json,
    residue_json,
    series_json,
)

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BOUND = 3


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class Outcome:
    """Exit code, pretty lines and the JSON object of one command."""

    code: int
    lines: list[str]
    record: dict

    def render(self, as_json: bool) -> str:
        return dumps(self.record) if as_json else "\n".join(self.lines)


@dataclass
class CliResult:
    code: int
    output: str


# ---------------------------------------------------------------------------
# argument handling


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--q", help="rational q (p or p/q), required for q cases")
    p.add_argument("--max-order", type=int, default=None, help="largest telescoper order to try")
    p.add_argument("--trunc", type=int, default=None, help="series truncation order N")
    p.add_argument("--json", action="store_true", help="print JSON")
    p.add_argument("--batch", metavar="FILE", help="read one input per line from FILE")
    p.add_argument("--jobs", type=int, default=1, help="worker processes in batch mode")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = _ArgumentParser(prog="ratel", description="Reduction, residues and creative telescoping for rational functions.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def add(name, help, dx=False, dt=False, inputs="expr", extra=()):
        p = sub.add_parser(name, help=help, parents=[common])
        if dt:
            p.add_argument("--dt", choices=T_OPERATORS, required=True, help="operator in t")
        if dx:
            p.add_argument("--dx", choices=CASES, required=True, help="operator in x")
        for flag, kw in extra:
            p.add_argument(flag, **kw)
        if inputs:
            p.add_argument("input", nargs="?", help=inputs)
        return p

    add("reduce", "additive decomposition f = d_x(g) + r", dx=True)
    add("residues", "residues of f with respect to d_x", dx=True)
    add("summable", "decide whether f = d_x(g)", dx=True)
    add("telescope", "minimal telescoper and certificate", dx=True, dt=True,
        extra=[("--method", {"choices": ("ansatz", "annihilator"), "default": "ansatz"})])
    add("verify", "check L(f) = d_x(g)", dx=True, dt=True,
        extra=[("--operator", {"required": True, "help": "operator L"}),
               ("--certificate", {"required": True, "help": "certificate g"})])
    add("characterize", "decide whether L is the telescoper of some non-exact f", dx=True, dt=True,
        inputs="operator")
    add("diag", "annihilating operator of the diagonal of f(t, x)")
    add("ez-demo", "operator for binary words with equally many 00 and 01", inputs=None)
    add("solve-rational", "rational solutions of an operator", dt=True, inputs="operator")
    return top


def _case(args) -> TelescoperCase:
    q = parse_rational(args.q) if args.q is not None else None
    return TelescoperCase(args.dt, args.dx, q)


def _x_q(args):
    if args.dx == "qx":
        if args.q is None:
            raise UsageError("--q is required for --dx qx")
        return parse_rational(args.q)
    return None


def _q_for_parsing(args):
    return parse_rational(args.q) if args.q is not None else None


def _kind(args):
    if args.dt == "dt":
        return D_KIND
    if args.dt == "st":
        return S_KIND
    if args.q is None:
        raise UsageError("--q is required for --dt qt")
    return q_kind(parse_rational(args.q))


def _require_input(args) -> str:
    if args.input is None:
        raise UsageError(f"{args.command}: an input is required")
    return args.input


def _record(command, inputs, case, result, **extra) -> dict:
    out = {"command": command, "inputs": inputs, "case": case, "result": result}
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_reduce(args) -> Outcome:
    text = _require_input(args)
    q = _x_q(args)
    f = parse_ratfunc(text, q=_q_for_parsing(args))
    g, r = reduce(f, args.dx, q)
    case = {"dx": args.dx, "q": None if q is None else format_rational(q)}
    lines = [f"g: {format_ratfunc(g)}", f"r: {format_ratfunc(r.to_ratfunc())}"]
    for term in r.terms:
        lines.append(f"  term: ({format_ratfunc(term.numerator)})/({term.u})^{term.j}")
    if args.dx == "qx":
        lines.append(f"  infinity: {format_ratfunc(r.infinity)}")
    lines.append(f"exact: {'yes' if r.is_zero() else 'no'}")
    rec = _record("reduce", [text], case,
                  {"g": format_ratfunc(g), "r": residual_json(r), "exact": r.is_zero()})
    return Outcome(EXIT_OK, lines, rec)


def cmd_residues(args) -> Outcome:
    text = _require_input(args)
    q = _x_q(args)
    f = parse_ratfunc(text, q=_q_for_parsing(args))
    data = residues(f, args.dx, q)
    lines = []
    for d in data:
        if d.u is None:
            lines.append(f"{d.kind}: {format_ratfunc(d.value)}")
        else:
            lines.append(f"{d.kind} u={d.u} order={d.multiplicity}: {format_ratfunc(d.value)}")
    if not lines:
        lines.append("no residues")
    case = {"dx": args.dx, "q": None if q is None else format_rational(q)}
    return Outcome(EXIT_OK, lines, _record("residues", [text], case, [residue_json(d) for d in data]))


def cmd_summable(args) -> Outcome:
    text = _require_input(args)
    q = _x_q(args)
    f = parse_ratfunc(text, q=_q_for_parsing(args))
    ok, g = is_exact(f, args.dx, q)
    case = {"dx": args.dx, "q": None if q is None else format_rational(q)}
    if ok:
        lines = ["summable: yes", f"certificate: {format_ratfunc(g)}"]
        return Outcome(EXIT_OK, lines, _record("summable", [text], case, True, certificate=format_ratfunc(g)))
    return Outcome(EXIT_NO, ["summable: no"], _record("summable", [text], case, False))


def _normalized(res):
    """Cleared operator and the certificate scaled by the same factor."""
    L = res.L.cleared()
    c = L.lc() / res.L.lc()
    return L, res.certificate * c


def cmd_telescope(args) -> Outcome:
    text = _require_input(args)
    case = _case(args)
    f = parse_ratfunc(text, q=case.q)
    cj = case_json(case)
    try:
        res = find_telescoper(f, case, max_order=args.max_order, method=args.method)
    except NoTelescoperError as e:
        names = ", ".join(str(u) for u in e.obstructions)
        lines = [f"no telescoper for {format_ratfunc(f)} under {case.label()}",
                 f"obstruction factors: {names}"]
        rec = _record("telescope", [text], cj,
                      {"exists": False, "obstructions": [str(u) for u in e.obstructions]})
        return Outcome(EXIT_NO, lines, rec)
    L, g = _normalized(res)
    trace = [{"order": r, "nullity": n} for r, n in res.order_trace]
    lines = [
        f"case: {case.label()}",
        f"L: {format_operator(L)}",
        f"certificate: {format_ratfunc(g)}",
        "trace: " + ", ".join(f"order {r} nullity {n}" for r, n in res.order_trace),
    ]
    rec = _record("telescope", [text], cj,
                  {"exists": True, "operator": operator_json(L), "minimal": res.minimal},
                  certificate=format_ratfunc(g), trace=trace)
    return Outcome(EXIT_OK, lines, rec)


def cmd_verify(args) -> Outcome:
    text = _require_input(args)
    case = _case(args)
    f = parse_ratfunc(text, q=case.q)
    L = parse_operator(args.operator, case.kind, q=case.q)
    g = parse_ratfunc(args.certificate, q=case.q)
    ok = verify_telescoper(f, L, g, case)
    rec = _record("verify", [text, args.operator, args.certificate], case_json(case), ok,
                  certificate=format_ratfunc(g))
    return Outcome(EXIT_OK if ok else EXIT_NO, [f"verified: {'yes' if ok else 'no'}"], rec)


def cmd_characterize(args) -> Outcome:
    text = _require_input(args)
    case = _case(args)
    L = parse_operator(text, case.kind, q=case.q)
    ok = is_potential_telescoper(L, case)
    rec = _record("characterize", [text], case_json(case), ok)
    lines = [f"telescoper of some non-exact rational function: {'yes' if ok else 'no'}"]
    return Outcome(EXIT_OK if ok else EXIT_NO, lines, rec)


def cmd_diag(args) -> Outcome:
    text = _require_input(args)
    f = parse_ratfunc(text, q=_q_for_parsing(args))
    N = 20 if args.trunc is None else args.trunc
    rep = diagonal_report(f, N)
    trace = [{"order": r, "nullity": n} for r, n in rep.order_trace]
    lines = [
        f"F: {format_ratfunc(rep.F)}",
        f"L: {format_operator(rep.L)}",
        "diagonal: " + ", ".join(format_rational(c) for c in rep.diag_series.coefficients),
        f"annihilated to order {max(N - rep.L.order, -1)}: {'yes' if rep.annihilated else 'no'}",
    ]
    rec = _record("diag", [text], case_json(TelescoperCase("dt", "dx")),
                  {"F": format_ratfunc(rep.F), "operator": operator_json(rep.L),
                   "series": series_json(rep.diag_series), "annihilated": rep.annihilated},
                  trace=trace)
    return Outcome(EXIT_OK if rep.annihilated else EXIT_NO, lines, rec)


def cmd_ez_demo(args) -> Outcome:
    N = 12 if args.trunc is None else args.trunc
    rep = ez_pipeline(N)
    L = rep.report.L
    init_ok = rep.word_counts[0] == 1 and rep.word_counts[1] == 2
    lines = [
        f"F: {format_ratfunc(rep.report.F)}",
        f"L: {format_operator(L)}",
        f"reference: {format_operator(rep.reference)}",
        f"verdict: {rep.verdict}",
        "word counts: " + ", ".join(format_rational(c) for c in rep.word_counts.coefficients),
        f"word counts annihilated to order {N - L.order}: {'yes' if rep.words_annihilated else 'no'}",
        f"initial values s(0), s(1): {rep.word_counts[0]}, {rep.word_counts[1]}",
        f"t = 0 ordinary point: {'yes' if rep.ordinary_point else 'no'}",
    ]
    trace = [{"order": r, "nullity": n} for r, n in rep.report.order_trace]
    rec = _record(
        "ez-demo", [], case_json(TelescoperCase("dt", "dx")),
        {"operator": operator_json(L), "reference": operator_json(rep.reference),
         "verdict": rep.verdict, "word_counts": series_json(rep.word_counts),
         "words_annihilated": rep.words_annihilated, "initial_values_ok": init_ok,
         "ordinary_point": rep.ordinary_point},
        trace=trace,
    )
    good = rep.match and rep.words_annihilated and init_ok
    return Outcome(EXIT_OK if good else EXIT_NO, lines, rec)


def cmd_solve_rational(args) -> Outcome:
    text = _require_input(args)
    kind = _kind(args)
    L = parse_operator(text, kind)
    sols = rational_solutions(L)
    lines = [f"solution: {format_ratfunc(s)}" for s in sols] or ["no nonzero rational solutions"]
    case = {"dt": args.dt, "q": None if kind.q is None else format_rational(kind.q)}
    return Outcome(EXIT_OK, lines, _record("solve-rational", [text], case, [format_ratfunc(s) for s in sols]))


COMMANDS = {
    "reduce": cmd_reduce,
    "residues": cmd_residues,
    "summable": cmd_summable,
    "telescope": cmd_telescope,
    "verify": cmd_verify,
    "characterize": cmd_characterize,
    "diag": cmd_diag,
    "ez-demo": cmd_ez_demo,
    "solve-rational": cmd_solve_rational,
}


def _error(args, code: int, message: str) -> Outcome:
    inputs = [args.input] if getattr(args, "input", None) is not None else []
    rec = _record(args.command, inputs, None, None, error=message)
    return Outcome(code, [f"error: {message}"], rec)


def execute(args) -> Outcome:
    """Run one parsed command and map exceptions to exit codes."""
    try:
        return COMMANDS[args.command](args)
    except OrderBoundExceeded as e:
        return _error(args, EXIT_BOUND, str(e))
    except (ParseError, UsageError, ValueError, ZeroDivisionError) as e:
        return _error(args, EXIT_USAGE, str(e))


def _run_line(payload) -> tuple[int, str]:
    argv, line = payload
    args = build_parser().parse_args(argv)
    args.input = line
    args.batch = None
    out = execute(args)
    return out.code, out.render(args.json)


def _run_batch(args, argv) -> CliResult:
    try:
        with open(args.batch, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as e:
        return CliResult(EXIT_USAGE, f"error: {e}")
    payloads = [(argv, ln) for ln in lines]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_line, payloads))
    else:
        results = [_run_line(p) for p in payloads]
    code = max((c for c, _ in results), default=EXIT_OK)
    return CliResult(code, "\n".join(text for _, text in results))


def run_cli(argv: list[str] | None = None) -> CliResult:
    """Run the CLI on ``argv`` and return the exit code and the printed text.

    Examples
    ========

    >>> from ratel.frontend.cli import run_cli
    >>> res = run_cli(["telescope", "--dt", "dt", "--dx", "dx", "1/(x^2-t)"])
    >>> res.code
    0
    >>> print(res.output.splitlines()[1])
    L: 1 + (2*t)*Dt
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    buf = io.StringIO()
    try:
        with contextlib.redirect_stdout(buf):
            args = parser.parse_args(argv)
    except UsageError as e:
        return CliResult(EXIT_USAGE, str(e))
    except SystemExit as e:  # --help
        return CliResult(int(e.code or 0), buf.getvalue().rstrip("\n"))
    if args.batch:
        if args.input is not None:
            return CliResult(EXIT_USAGE, "error: give either an input or --batch, not both")
        return _run_batch(args, _strip_batch(argv))
    out = execute(args)
    return CliResult(out.code, out.render(args.json))


def _strip_batch(argv: list[str]) -> list[str]:
    out = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--batch":
            skip = True
            continue
        if a.startswith("--batch="):
            continue
        out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    res = run_cli(argv)
    if res.output:
        stream = sys.stderr if res.code == EXIT_USAGE and not res.output.startswith("{") else sys.stdout
        print(res.output, file=stream)
    return res.code


__all__ = ["run_cli", "main", "build_parser", "execute", "CliResult", "Outcome",
           "EXIT_OK", "EXIT_NO", "EXIT_USAGE", "EXIT_BOUND"]
