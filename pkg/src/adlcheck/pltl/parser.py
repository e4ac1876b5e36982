"""Concrete syntax for property formulas.

Binding strength, loosest first::

    ->          right-associative
    U  R        right-associative (V is accepted as a synonym of R)
    |
    &
    !  X Y F O G   prefix

Atoms are dotted identifiers (``ShowerDoor.deactivated``, ``Bathroom.change``)
or plain identifiers; ``true``/``false`` are constants and
``WithinInterval(phi)`` is the routine-window macro.
"""

from __future__ import annotations

import re
from typing import Iterable

from ..errors import PropertySyntaxError, UnknownAtom
from .ast import (
    And,
    Atom,
    Binary,
    Const,
    Eventually,
    Formula,
    Globally,
    Implies,
    Next,
    Not,
    Once,
    Or,
    Prev,
    Release,
    Until,
    WithinInterval,
    atoms,
)

UNARY_KEYWORDS = {"X": Next, "Y": Prev, "F": Eventually, "O": Once, "G": Globally}
UNARY_NAMES = {v: k for k, v in UNARY_KEYWORDS.items()}
BINARY_KEYWORDS = {"U": Until, "R": Release, "V": Release}
CONSTANTS = {"true": True, "TRUE": True, "false": False, "FALSE": False}
MACRO = "WithinInterval"

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->|→)
  | (?P<and>&&|&|∧)
  | (?P<or>\|\||\||∨)
  | (?P<not>!|¬)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PropertySyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.take()
        if tok[0] != kind:
            self.fail(f"expected {what}", tok)
        return tok

    def fail(self, msg, tok):
        found = tok[1] or "end of input"
        raise PropertySyntaxError(f"{msg}, found {found!r}", tok[2], self.text)

    def parse(self) -> Formula:
        f = self.implication()
        tok = self.peek()
        if tok[0] != "eof":
            self.fail("unexpected token", tok)
        return f

    def implication(self) -> Formula:
        left = self.until()
        if self.peek()[0] == "arrow":
            self.take()
            return Implies(left, self.implication())
        return left

    def until(self) -> Formula:
        left = self.disjunction()
        kind, value, _ = self.peek()
        if kind == "name" and value in BINARY_KEYWORDS:
            self.take()
            return BINARY_KEYWORDS[value](left, self.until())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[0] == "or":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "and":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, _ = self.peek()
        if kind == "not":
            self.take()
            return Not(self.unary())
        if kind == "name" and value in UNARY_KEYWORDS:
            self.take()
            return UNARY_KEYWORDS[value](self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.take()
        kind, value, _ = tok
        if kind == "lpar":
            f = self.implication()
            self.expect("rpar", "')'")
            return f
        if kind == "name":
            if value == MACRO:
                self.expect("lpar", f"'(' after {MACRO}")
                body = self.implication()
                self.expect("rpar", "')'")
                return WithinInterval(body)
            if value in CONSTANTS:
                return Const(CONSTANTS[value])
            if value in BINARY_KEYWORDS or value in UNARY_KEYWORDS:
                self.fail("operator used where a formula was expected", tok)
            return Atom(value)
        self.fail("expected a formula", tok)


def parse_property(text: str, known_atoms: Iterable[str] | None = None) -> Formula:
    """Parse ``text``; when ``known_atoms`` is given, every atom must be in it."""
    body = text.strip()
    if body.startswith("LTLSPEC"):
        body = body[len("LTLSPEC") :]
    f = _Parser(body).parse()
    if known_atoms is not None:
        resolve(f, known_atoms)
    return f


def resolve(f: Formula, known_atoms: Iterable[str]) -> None:
    known = set(known_atoms) | {"startActivity", "endActivity"}
    missing = sorted(atoms(f) - known)
    if missing:
        raise UnknownAtom(", ".join(missing))


# -- rendering ---------------------------------------------------------------

_PREC = {Implies: 1, Until: 2, Release: 2, Or: 3, And: 4}
_RIGHT_ASSOC = (Implies, Until, Release)
_UNARY_PREC = 5
_ATOM_PREC = 6
_BINARY_SYMBOLS = {Implies: "->", Until: "U", Release: "R", Or: "|", And: "&"}


def _prec(f: Formula) -> int:
    if isinstance(f, Binary):
        return _PREC[type(f)]
    if isinstance(f, (Atom, Const, WithinInterval)):
        return _ATOM_PREC
    return _UNARY_PREC


def render(f: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, WithinInterval):
        return f"{MACRO}({render(f.body)})"
    if isinstance(f, Not):
        return "!" + _wrap(f.operand, _prec(f.operand) < _UNARY_PREC)
    if isinstance(f, tuple(UNARY_NAMES)):
        return UNARY_NAMES[type(f)] + " " + _wrap(f.operand, _prec(f.operand) < _UNARY_PREC)
    if isinstance(f, Binary):
        p = _PREC[type(f)]
        right_assoc = isinstance(f, _RIGHT_ASSOC)
        lp, rp = _prec(f.left), _prec(f.right)
        left = _wrap(f.left, lp < p or (lp == p and right_assoc))
        right = _wrap(f.right, rp < p or (rp == p and not right_assoc))
        return f"{left} {_BINARY_SYMBOLS[type(f)]} {right}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, parens: bool) -> str:
    s = render(f)
    return f"({s})" if parens else s
