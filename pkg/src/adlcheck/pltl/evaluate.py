"""Exact evaluation of past/future LTL over lasso-shaped paths.

A path is a finite sequence of labelled states whose last state repeats
forever.  Every subformula is computed bottom-up as a boolean column over
positions: future operators by a backward pass closed at the loop state,
past operators by a forward pass.

Past operators can tell the first visit of the loop state from later ones
(``Y p`` on the loop's first visit looks at the state before it).  A formula
with at most ``d`` nested past operators has constant values from the
``d``-th repetition of the loop state onwards, so the path is unrolled by
``d`` extra copies before the passes; the last copy is then a genuine fixed
point and the backward closure is exact.

Columns may carry a trailing batch axis, which lets many equal-length paths be
evaluated in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import NotViolated, UnresolvedAtom
from ..events import format_timestamp
from ..model import PathModel
from .ast import (
    And,
    Atom,
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
    expand_within_interval,
    past_depth,
)
from .parser import render


def truth_tables(
    columns: Mapping[str, np.ndarray], formulas: Iterable[Formula]
) -> dict[Formula, np.ndarray]:
    """Truth columns for ``formulas`` and all their subformulas.

    ``columns`` maps atom names to boolean arrays of shape ``(L,)`` or
    ``(L, B)``; position ``L - 1`` is the loop state.  Returned arrays have
    the same shape.
    """
    formulas = list(formulas)
    extra = max((past_depth(f) for f in formulas), default=0)
    any_col = next(iter(columns.values()), None)
    if any_col is None:
        raise ValueError("need at least one atom column to fix the path length")
    length = any_col.shape[0]
    shape = (length + extra,) + any_col.shape[1:]

    extended: dict[str, np.ndarray] = {}

    def column(name: str) -> np.ndarray:
        if name not in extended:
            try:
                col = np.asarray(columns[name], dtype=bool)
            except KeyError:
                raise UnresolvedAtom(name) from None
            if extra:
                col = np.concatenate([col, np.repeat(col[-1:], extra, axis=0)])
            extended[name] = col
        return extended[name]

    memo: dict[Formula, np.ndarray] = {}

    def table(g: Formula) -> np.ndarray:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            out = column(g.name)
        elif isinstance(g, Const):
            out = np.full(shape, g.value, dtype=bool)
        elif isinstance(g, WithinInterval):
            out = table(expand_within_interval(g.body))
        elif isinstance(g, Not):
            out = ~table(g.operand)
        elif isinstance(g, And):
            out = table(g.left) & table(g.right)
        elif isinstance(g, Or):
            out = table(g.left) | table(g.right)
        elif isinstance(g, Implies):
            out = ~table(g.left) | table(g.right)
        elif isinstance(g, Next):
            a = table(g.operand)
            out = np.empty_like(a)
            out[:-1] = a[1:]
            out[-1] = a[-1]
        elif isinstance(g, Prev):
            a = table(g.operand)
            out = np.empty_like(a)
            out[0] = False
            out[1:] = a[:-1]
        elif isinstance(g, Once):
            out = np.logical_or.accumulate(table(g.operand), axis=0)
        elif isinstance(g, Eventually):
            out = np.logical_or.accumulate(table(g.operand)[::-1], axis=0)[::-1]
        elif isinstance(g, Globally):
            out = np.logical_and.accumulate(table(g.operand)[::-1], axis=0)[::-1]
        elif isinstance(g, Until):
            a, b = table(g.left), table(g.right)
            out = np.empty_like(b)
            out[-1] = b[-1]
            for i in range(len(b) - 2, -1, -1):
                out[i] = b[i] | (a[i] & out[i + 1])
        elif isinstance(g, Release):
            a, b = table(g.left), table(g.right)
            out = np.empty_like(b)
            out[-1] = b[-1]
            for i in range(len(b) - 2, -1, -1):
                out[i] = b[i] & (a[i] | out[i + 1])
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    result = {}
    for f in formulas:
        table(f)
    for g, col in memo.items():
        result[g] = col[:length]
    return result


def columns_from_labels(labels: Sequence[Iterable[str]], names: Iterable[str]) -> dict[str, np.ndarray]:
    sets = [frozenset(s) for s in labels]
    return {n: np.array([n in s for s in sets], dtype=bool) for n in names}


def path_columns(path, names: Iterable[str]) -> dict[str, np.ndarray]:
    if isinstance(path, PathModel):
        known = path.atoms()
        out = {}
        for n in names:
            if n not in known:
                raise UnresolvedAtom(n)
            out[n] = np.array(path.atom_values(n), dtype=bool)
        return out
    return columns_from_labels(path, names)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness_index: int | None
    formula: Formula
    evaluated_path: object = field(repr=False, compare=False)
    values: tuple[bool, ...] = field(default=(), repr=False)


def evaluate(path, f: Formula) -> Verdict:
    """Does ``path`` satisfy ``f`` at position 0?

    ``path`` is a PathModel or a sequence of label sets whose last entry is
    the self-looping state.
    """
    if not isinstance(path, PathModel) and len(path) == 0:
        raise ValueError("path must have at least one state")
    names = atoms(f)
    cols = path_columns(path, names)
    if not cols:
        n = len(path.states) if isinstance(path, PathModel) else len(path)
        cols = {"__len__": np.zeros(n, dtype=bool)}
    tables = truth_tables(cols, [f])
    top = tables[f]
    holds = bool(top[0])
    witness = None if holds else _witness(f, tables, len(top) - 1)
    return Verdict(holds, witness, f, path, tuple(bool(x) for x in top))


def _witness(f: Formula, tables, last: int) -> int | None:
    if isinstance(f, WithinInterval):
        # the macro's G body can only fail at the start step, so point at
        # the step where the pending obligation was finally lost instead
        g = expand_within_interval(f.body)
        if g not in tables:
            return None
        return _until_failure(g.operand.right, tables, 0, last)
    if isinstance(f, Globally):
        bad = np.flatnonzero(~tables[f.operand])
        return int(bad[0]) if len(bad) else last
    if isinstance(f, Until):
        return _until_failure(f, tables, 0, last)
    return None


def _until_failure(u: Until, tables, i: int, last: int) -> int:
    """First step at or after ``i`` where the left side stops holding before the right side ever did."""
    a, b = tables[u.left], tables[u.right]
    for k in range(i, last + 1):
        if b[k]:
            return k
        if not a[k]:
            return k
    return last


# -- counterexamples -----------------------------------------------------------


@dataclass(frozen=True)
class Step:
    index: int
    kind: str
    timestamp: str | None
    event: tuple[str, str] | None
    markers: tuple[str, ...]
    values: Mapping[str, bool]


@dataclass(frozen=True)
class Counterexample:
    formula: str
    flagged_index: int | None
    steps: tuple[Step, ...]

    def to_dict(self) -> dict:
        return {
            "formula": self.formula,
            "flagged_index": self.flagged_index,
            "steps": [
                {
                    "index": s.index,
                    "kind": s.kind,
                    "timestamp": s.timestamp,
                    "event": None if s.event is None else {"sensor_id": s.event[0], "state": s.event[1]},
                    "markers": list(s.markers),
                    "values": dict(s.values),
                }
                for s in self.steps
            ],
        }

    def to_text(self) -> str:
        lines = [f"counterexample for {self.formula}"]
        keys = list(self.steps[0].values) if self.steps else []
        for n, k in enumerate(keys):
            lines.append(f"  [{n}] {k}")
        for s in self.steps:
            flag = ">>" if s.index == self.flagged_index else "  "
            what = f"{s.event[0]}={s.event[1]}" if s.event else f"<{s.kind}>"
            marks = f" [{','.join(s.markers)}]" if s.markers else ""
            vals = " ".join(f"[{n}]={'T' if s.values[k] else 'F'}" for n, k in enumerate(keys))
            ts = s.timestamp or "-"
            lines.append(f"{flag}{s.index:>4} {ts:<29} {what}{marks}  {vals}")
        return "\n".join(lines)


def decisive_subformulas(f: Formula) -> list[Formula]:
    picks: list[Formula] = []
    if isinstance(f, WithinInterval):
        picks.append(f.body)
        f = expand_within_interval(f.body)
    picks.extend(f.children())
    if isinstance(f, Globally):
        picks.extend(f.operand.children())
    seen, out = set(), []
    for g in picks:
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def explain_violation(path, f: Formula) -> Counterexample:
    """Step-by-step account of why ``path`` fails ``f``."""
    verdict = evaluate(path, f)
    if verdict.holds:
        raise NotViolated(render(f))
    return annotate(path, f, verdict)


def annotate(path, f: Formula, verdict: Verdict | None = None) -> Counterexample:
    """Annotate every step with the values of ``f``'s decisive subformulas."""
    if verdict is None:
        verdict = evaluate(path, f)
    subs = decisive_subformulas(f)
    cols = path_columns(path, atoms(f))
    if not cols:
        n = len(path.states) if isinstance(path, PathModel) else len(path)
        cols = {"__len__": np.zeros(n, dtype=bool)}
    tables = truth_tables(cols, [f, *subs])
    keys = [render(g) for g in subs]

    steps = []
    n_states = len(verdict.values)
    for i in range(n_states):
        values = {k: bool(tables[g][i]) for k, g in zip(keys, subs)}
        if isinstance(path, PathModel):
            st = path.states[i]
            kind = "stutter" if i == path.stutter_index else ("initial" if i == 0 else "event")
            markers = tuple(
                m for m, on in (("startActivity", st.start_marker), ("endActivity", st.end_marker)) if on
            )
            steps.append(
                Step(
                    i,
                    kind,
                    format_timestamp(st.timestamp) if st.timestamp else None,
                    (st.event.sensor_id, st.event.value.value) if st.event else None,
                    markers,
                    values,
                )
            )
        else:
            kind = "loop" if i == n_states - 1 else "state"
            steps.append(Step(i, kind, None, None, (), values))
    return Counterexample(render(f), verdict.witness_index, tuple(steps))
