"""Parser for rational functions in ``t, x`` and for Ore operators in ``t``.

Grammar, from loosest to tightest binding::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | SYMBOL | "(" expr ")"

Exponents are nonnegative integer literals; ``x^2^3`` is rejected.  The
Unicode minus sign is read as ``-``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from flint import fmpq

from ..arith.poly import T, X, as_rat
from ..arith.ratfunc import RatFunc
from ..ore import OreKind, OrePoly

OPERATOR_SYMBOLS = ("Dt", "St", "Qt")


class ParseError(ValueError):
    """Syntax or evaluation error with the offending position (0-based)."""

    def __init__(self, message: str, pos: int | None = None):
        self.message = message
        self.pos = pos
        if pos is None:
            super().__init__(message)
        else:
            super().__init__(f"{message} at position {pos}")


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Sym:
    name: str
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: "Expr"
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: int


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int
    pos: int


Expr = Num | Sym | Neg | BinOp | Pow

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Tokens ``(type, value, position)`` with types ``num``, ``sym``, ``op`` and ``end``."""
    text = text.replace("−", "-")
    out = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", m.group(1), start))
        elif m.group(2):
            out.append(("sym", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            out.append(("op", ch, start))
        pos = m.end()
    out.append(("end", "", len(text.rstrip())))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value or kind != "op":
            found = "end of input" if kind == "end" else repr(v)
            raise ParseError(f"expected {value!r}, found {found}", pos)

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        node = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = BinOp(op, node, self.unary(), pos)
        return node

    def unary(self) -> Expr:
        kind, v, pos = self.peek()
        if kind == "op" and v in ("-", "+"):
            self.take()
            arg = self.unary()
            return Neg(arg, pos) if v == "-" else arg
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, v, pos = self.peek()
        if kind == "op" and v == "^":
            self.take()
            ek, ev, epos = self.take()
            if ek != "num":
                raise ParseError("exponent must be a nonnegative integer literal", epos)
            nk, nv, npos = self.peek()
            if nk == "op" and nv == "^":
                raise ParseError("chained exponents need parentheses", npos)
            return Pow(base, int(ev), pos)
        return base

    def atom(self) -> Expr:
        kind, v, pos = self.take()
        if kind == "num":
            return Num(int(v), pos)
        if kind == "sym":
            return Sym(v, pos)
        if kind == "op" and v == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(v)
        raise ParseError(f"unexpected {found}", pos)


def parse_expr(text: str) -> Expr:
    """Syntax tree of ``text``.

    Examples
    ========

    >>> from ratel.frontend.parser import parse_expr
    >>> parse_expr("-x^2")
    Neg(arg=Pow(base=Sym(name='x', pos=1), exp=2, pos=2), pos=0)
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# evaluation


def _evaluate(node: Expr, symbol, divide, number=RatFunc):
    if isinstance(node, Num):
        return number(node.value)
    if isinstance(node, Sym):
        return symbol(node)
    if isinstance(node, Neg):
        return -_evaluate(node.arg, symbol, divide, number)
    if isinstance(node, Pow):
        return _evaluate(node.base, symbol, divide, number) ** node.exp
    a = _evaluate(node.left, symbol, divide, number)
    b = _evaluate(node.right, symbol, divide, number)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return divide(a, b, node.pos)


def _q_value(node: Sym, q):
    if q is None:
        raise ParseError("symbol 'q' needs a value (use --q)", node.pos)
    return RatFunc(as_rat(q))


def parse_ratfunc(text: str, q=None) -> RatFunc:
    """Rational function in ``t`` and ``x``; ``q`` stands for the given rational.

    Examples
    ========

    >>> from ratel.frontend.parser import parse_ratfunc
    >>> parse_ratfunc("(2*x+1)/(x*(x+1))")
    RatFunc(2*x + 1, x^2 + x)
    >>> parse_ratfunc("1/(x-x)")
    Traceback (most recent call last):
    ...
    ratel.frontend.parser.ParseError: zero denominator at position 1
    """
    def symbol(node: Sym):
        if node.name == "t":
            return RatFunc(T)
        if node.name == "x":
            return RatFunc(X)
        if node.name == "q":
            return _q_value(node, q)
        raise ParseError(f"unknown symbol {node.name!r}", node.pos)

    def divide(a, b, pos):
        if b.is_zero():
            raise ParseError("zero denominator", pos)
        return a / b

    return _evaluate(parse_expr(text), symbol, divide)


def parse_operator(text: str, kind: OreKind, q=None) -> OrePoly:
    """Ore operator with coefficients in ``Q(t)``, brought to normal form.

    Division is allowed by operators of order zero only and means right
    multiplication by the inverse.  The symbol ``q`` stands for the
    parameter of a q-shift kind, or for ``q`` when given.

    Examples
    ========

    >>> from ratel.ore import D_KIND
    >>> from ratel.frontend.parser import parse_operator
    >>> parse_operator("Dt*t", D_KIND)
    OrePoly([1, t], D)
    """
    own = kind.symbol

    def symbol(node: Sym):
        if node.name == "t":
            return OrePoly.scalar(T, kind)
        if node.name == "q":
            return OrePoly.scalar(_q_value(node, kind.q if kind.q is not None else q), kind)
        if node.name == own:
            return OrePoly.gen(kind)
        if node.name in OPERATOR_SYMBOLS:
            raise ParseError(f"mixing operator symbols: {node.name} in an operator in {own}", node.pos)
        if node.name == "x":
            raise ParseError("operator coefficients must not contain x", node.pos)
        raise ParseError(f"unknown symbol {node.name!r}", node.pos)

    def divide(a, b, pos):
        if b.is_zero():
            raise ParseError("zero denominator", pos)
        if b.order > 0:
            raise ParseError("division by an operator of positive order", pos)
        return a * OrePoly.scalar(b.lc().inverse(), kind)

    return _evaluate(parse_expr(text), symbol, divide, lambda n: OrePoly.scalar(n, kind))


def parse_rational(text: str) -> fmpq:
    """A rational literal ``p`` or ``p/q``."""
    try:
        return as_rat(text.replace("−", "-").strip())
    except (ValueError, TypeError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


__all__ = [
    "ParseError", "Num", "Sym", "Neg", "BinOp", "Pow", "Expr", "tokenize",
    "parse_expr", "parse_ratfunc", "parse_operator", "parse_rational",
]
