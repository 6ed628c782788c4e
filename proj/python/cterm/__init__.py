"""Conditional termination of integer loops and programs."""

from ._core import FragmentError, Formula, ParseError, Program, Relation, parse_formula

__all__ = ["FragmentError", "Formula", "ParseError", "Program", "Relation", "parse_formula", "load_program"]


def load_program(path):
    """Parse a program file."""
    with open(path, encoding="utf-8") as f:
        return Program(f.read())
