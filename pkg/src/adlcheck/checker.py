"""Sliding-window verification of properties, aggregated per day."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta, timezone, tzinfo
from typing import Mapping, Sequence

from .events import EventTrace, Provenance, clean, local_dates, utc_offset
from .layout import HomeConfig, HomeLayout, SensorRegistry, default_groups
from .model import build_path, initial_state, subtrace
from .pltl.ast import Formula
from .pltl.evaluate import Counterexample, Verdict, annotate, evaluate
from .pltl.properties import PropertySpec

WIDTH = timedelta(minutes=20)
STRIDE = timedelta(minutes=10)


class Status(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"


@dataclass(frozen=True)
class WindowPlan:
    day: date
    range_start: time
    range_end: time
    width: timedelta = WIDTH
    stride: timedelta = STRIDE
    tz: tzinfo = timezone.utc

    def __post_init__(self):
        if self.width <= timedelta(0):
            raise ValueError("window width must be positive")
        if not timedelta(0) < self.stride <= self.width:
            raise ValueError("stride must satisfy 0 < stride <= width")
        if self.range_start >= self.range_end:
            raise ValueError("range start must precede range end")


def plan_windows(plan: WindowPlan) -> list[tuple[datetime, datetime]]:
    start = datetime.combine(plan.day, plan.range_start, tzinfo=plan.tz)
    stop = datetime.combine(plan.day, plan.range_end, tzinfo=plan.tz)
    windows = []
    a = start
    while a + plan.width <= stop:
        windows.append((a, a + plan.width))
        a += plan.stride
    return windows


@dataclass(frozen=True)
class WindowResult:
    start: datetime
    end: datetime
    n_events: int
    verdict: Verdict = field(repr=False)

    @property
    def outcome(self) -> str:
        if self.n_events == 0:
            return "empty"
        return "satisfied" if self.verdict.holds else "violated"

    @property
    def satisfied(self) -> bool:
        # a vacuous pass over a window with no observed events is not evidence
        return self.n_events > 0 and self.verdict.holds


@dataclass(frozen=True)
class WindowCounterexample:
    start: datetime
    end: datetime
    reason: str  # "violated" or "empty"
    counterexample: Counterexample


@dataclass(frozen=True)
class DayReport:
    date: date
    property: str
    status: Status
    time_span: tuple[datetime, datetime] | None
    seq: int
    windows: tuple[WindowResult, ...] = ()
    counterexamples: tuple[WindowCounterexample, ...] = ()


def check_day(
    trace: EventTrace,
    registry: SensorRegistry,
    layout: HomeLayout,
    formula: Formula,
    plan: WindowPlan,
    property_name: str = "",
    groups: Mapping[str, frozenset[str]] | None = None,
) -> DayReport:
    """Evaluate ``formula`` on every window of ``plan`` and aggregate.

    The day is satisfied when at least one non-empty window satisfies the
    formula; ``time_span`` runs from the earliest such window's start to the
    latest one's end.
    """
    if groups is None:
        groups = default_groups(registry, layout)
    results = []
    for a, b in plan_windows(plan):
        sub = subtrace(trace, a, b)
        init = initial_state(trace, a, registry)
        path = build_path(sub, init, groups, registry, window=(a, b))
        results.append(WindowResult(a, b, len(sub), evaluate(path, formula)))

    good = [w for w in results if w.satisfied]
    seq = len(good)
    span = (min(w.start for w in good), max(w.end for w in good)) if good else None
    counterexamples = []
    if seq == 0:
        for w in results:
            cx = annotate(w.verdict.evaluated_path, formula, w.verdict)
            counterexamples.append(WindowCounterexample(w.start, w.end, w.outcome, cx))
    return DayReport(
        plan.day,
        property_name,
        Status.SATISFIED if seq else Status.VIOLATED,
        span,
        seq,
        tuple(results),
        tuple(counterexamples),
    )


@dataclass(frozen=True)
class VerdictReport:
    properties: tuple[PropertySpec, ...]
    days: tuple[date, ...]
    rows: tuple[DayReport, ...]
    width: timedelta = WIDTH
    stride: timedelta = STRIDE

    @property
    def all_satisfied(self) -> bool:
        return bool(self.rows) and all(r.status is Status.SATISFIED for r in self.rows)

    def row(self, day: date, prop: str) -> DayReport:
        for r in self.rows:
            if r.date == day and r.property == prop:
                return r
        raise KeyError((day, prop))


def run_suite(
    trace: EventTrace,
    properties: Sequence[PropertySpec],
    config: HomeConfig,
    days: Sequence[date] | None = None,
    width: timedelta = WIDTH,
    stride: timedelta = STRIDE,
    tz: tzinfo | None = None,
) -> VerdictReport:
    """Check every property on every day; rows come out ordered by (date, property)."""
    if trace.provenance is Provenance.RAW:
        trace = clean(trace)
    tz = tz or utc_offset(trace)
    if days is None:
        days = local_dates(trace)
    groups = config.groups
    rows = []
    for day in sorted(days):
        for prop in properties:
            plan = WindowPlan(day, prop.start, prop.end, width, stride, tz)
            rows.append(
                check_day(trace, config.registry, config.layout, prop.formula, plan, prop.name, groups)
            )
    return VerdictReport(tuple(properties), tuple(sorted(days)), tuple(rows), width, stride)


def exit_code(report: VerdictReport) -> int:
    return 0 if report.all_satisfied else 1
