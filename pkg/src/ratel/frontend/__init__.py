"""Parsing, printing and the command line interface."""

from .cli import main, run_cli
from .parser import ParseError, parse_operator, parse_ratfunc, parse_rational
from .printer import dumps, format_operator, format_ratfunc

__all__ = [
    "ParseError", "dumps", "format_operator", "format_ratfunc", "main",
    "parse_operator", "parse_ratfunc", "parse_rational", "run_cli",
]
