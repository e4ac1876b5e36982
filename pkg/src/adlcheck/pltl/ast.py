"""Formula syntax trees for LTL with past operators."""

from __future__ import annotations

from dataclasses import dataclass, fields

START = "startActivity"
END = "endActivity"


@dataclass(frozen=True, eq=False)
class Formula:
    # Structural equality with a cached hash: evaluation memoises on formula
    # nodes, and the generated dataclass hash would re-walk the tree each time.
    def _key(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return NotImplemented if not isinstance(other, Formula) else False
        return hash(self) == hash(other) and self._key() == other._key()

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((type(self).__name__, *self._key()))
            object.__setattr__(self, "_hash", h)
            return h

    def children(self) -> tuple[Formula, ...]:
        return ()

    # operator sugar for building formulas in code and tests
    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __str__(self):
        from .parser import render

        return render(self)


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class Const(Formula):
    value: bool


@dataclass(frozen=True, eq=False)
class Unary(Formula):
    operand: Formula

    def children(self):
        return (self.operand,)


@dataclass(frozen=True, eq=False)
class Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


class Not(Unary):
    pass


class Next(Unary):
    pass


class Prev(Unary):
    pass


class Eventually(Unary):
    pass


class Once(Unary):
    pass


class Globally(Unary):
    pass


class And(Binary):
    pass


class Or(Binary):
    pass


class Implies(Binary):
    pass


class Until(Binary):
    pass


class Release(Binary):
    pass


@dataclass(frozen=True, eq=False)
class WithinInterval(Formula):
    """Macro: ``body`` must hold at some step after the start marker and before the end marker."""

    body: Formula

    def children(self):
        return (self.body,)


TRUE = Const(True)
FALSE = Const(False)

PAST = (Prev, Once)
FUTURE = (Next, Eventually, Globally, Until, Release)


def expand_within_interval(body: Formula) -> Formula:
    start, end = Atom(START), Atom(END)
    not_end = Not(end)
    return Globally(Implies(And(start, not_end), Until(not_end, And(body, not_end))))


def expand_macros(f: Formula) -> Formula:
    if isinstance(f, WithinInterval):
        return expand_within_interval(expand_macros(f.body))
    if isinstance(f, Unary):
        return type(f)(expand_macros(f.operand))
    if isinstance(f, Binary):
        return type(f)(expand_macros(f.left), expand_macros(f.right))
    return f


def subformulas(f: Formula):
    """Post-order traversal; children before parents."""
    for c in f.children():
        yield from subformulas(c)
    yield f


def atoms(f: Formula) -> set[str]:
    """Atom names ``f`` reads, including the markers a macro expands to."""
    return {g.name for g in subformulas(expand_macros(f)) if isinstance(g, Atom)}


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def depth(f: Formula) -> int:
    """Tree height; atoms and constants have depth 1."""
    return 1 + max((depth(c) for c in f.children()), default=0)


def past_depth(f: Formula) -> int:
    """Largest number of past operators on any root-to-leaf branch."""
    below = max((past_depth(c) for c in f.children()), default=0)
    return below + (1 if isinstance(f, PAST) else 0)
