"""Deterministic synthetic sensor logs from scripted routines.

Script files are YAML::

    home: Bedroom              # where each day starts
    start_date: 2024-08-23
    utc_offset: "+01:00"
    step_gap: 8s               # pause between consecutive steps
    duplicate_rate: 0.2        # chance of a repeated contact report after each actuation
    spot_sensors: []           # motion sensors fired only by explicit ``detect`` steps
    routines:
      - name: morning_shower
        at: "08:30"
        jitter: 10m            # uniform in [-jitter, +jitter], seeded
        days: all              # or [1, 2, 5], or {except: [6]}
        repeat: 1              # optional; with ``every`` for periodic routines
        every: 20m
        steps:
          - goto: Bathroom     # shortest route along layout edges
          - move: Corridor     # one edge
          - open: ShowerDoor
          - close: ShowerDoor
          - detect: MotionMedication_B
          - dwell: 12m

Sensor behaviour: entering a room reports ``detected`` on each of its motion
sensors and a ``clear`` follows 30 s after the last detection of that sensor.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path

import networkx as nx
import yaml

from .durations import parse_duration, parse_utc_offset
from .errors import InvalidScript
from .events import EventTrace, SensorEvent, Value
from .layout import HomeLayout, SensorKind, SensorRegistry

MOTION_HOLD = timedelta(seconds=30)
STEP_KINDS = ("move", "goto", "open", "close", "detect", "dwell")


@dataclass(frozen=True)
class Routine:
    name: str
    at: time
    steps: tuple[tuple[str, str], ...]
    jitter: timedelta = timedelta(0)
    days: frozenset[int] | None = None  # 1-based day numbers; None means every day
    skip_days: frozenset[int] = frozenset()
    repeat: int = 1
    every: timedelta = timedelta(0)

    def runs_on(self, day_number: int) -> bool:
        if day_number in self.skip_days:
            return False
        return self.days is None or day_number in self.days


@dataclass(frozen=True)
class ScriptBook:
    home: str
    routines: tuple[Routine, ...]
    start_date: date = date(2024, 1, 1)
    utc_offset: timedelta = timedelta(0)
    step_gap: timedelta = timedelta(seconds=8)
    duplicate_rate: float = 0.0
    spot_sensors: frozenset[str] = field(default_factory=frozenset)


def _clock(text) -> time:
    if isinstance(text, int):  # YAML 1.1 reads 08:30 as sexagesimal minutes
        return time(text // 60, text % 60)
    m = re.fullmatch(r"(\d{1,2}):(\d{2})(?::(\d{2}))?", str(text).strip())
    if not m:
        raise InvalidScript(f"bad time of day {text!r}")
    return time(int(m.group(1)), int(m.group(2)), int(m.group(3) or 0))


def _routine(raw: dict, index: int) -> Routine:
    name = raw.get("name", f"routine{index}")
    if "at" not in raw or "steps" not in raw:
        raise InvalidScript(f"routine {name!r} needs 'at' and 'steps'")
    steps = []
    for step in raw["steps"]:
        if not isinstance(step, dict) or len(step) != 1:
            raise InvalidScript(f"routine {name!r}: each step is a single 'kind: argument' pair")
        (kind, arg), = step.items()
        if kind not in STEP_KINDS:
            raise InvalidScript(f"routine {name!r}: unknown step {kind!r}")
        steps.append((kind, str(arg)))
    days = raw.get("days", "all")
    only, skip = None, frozenset()
    if isinstance(days, list):
        only = frozenset(int(d) for d in days)
    elif isinstance(days, dict) and "except" in days:
        skip = frozenset(int(d) for d in days["except"])
    elif days != "all":
        raise InvalidScript(f"routine {name!r}: bad days selector {days!r}")
    return Routine(
        name,
        _clock(raw["at"]),
        tuple(steps),
        parse_duration(raw.get("jitter", 0)),
        only,
        skip,
        int(raw.get("repeat", 1)),
        parse_duration(raw.get("every", 0)),
    )


def parse_scripts(text: str) -> ScriptBook:
    try:
        return _parse_scripts(text)
    except (ValueError, TypeError, AttributeError, yaml.YAMLError) as exc:
        raise InvalidScript(f"bad script file: {exc}") from exc


def _parse_scripts(text: str) -> ScriptBook:
    raw = yaml.safe_load(text) or {}
    if not isinstance(raw, dict) or "home" not in raw:
        raise InvalidScript("script file needs a 'home' room")
    start = raw.get("start_date", date(2024, 1, 1))
    if isinstance(start, str):
        start = date.fromisoformat(start)
    return ScriptBook(
        home=raw["home"],
        routines=tuple(_routine(r, i) for i, r in enumerate(raw.get("routines") or [])),
        start_date=start,
        utc_offset=parse_utc_offset(raw.get("utc_offset", "+00:00")),
        step_gap=parse_duration(raw.get("step_gap", 8)),
        duplicate_rate=float(raw.get("duplicate_rate", 0.0)),
        spot_sensors=frozenset(raw.get("spot_sensors") or ()),
    )


def load_scripts(path: str | Path) -> ScriptBook:
    return parse_scripts(Path(path).read_text(encoding="utf-8"))


def validate_scripts(book: ScriptBook, layout: HomeLayout, registry: SensorRegistry) -> None:
    rooms = set(layout.rooms)
    if book.home not in rooms:
        raise InvalidScript(f"home room {book.home!r} is not in the layout")
    for name in book.spot_sensors:
        spec = registry.by_name(name)
        if spec is None or spec.kind is not SensorKind.MOTION:
            raise InvalidScript(f"spot sensor {name!r} is not a motion sensor")
    for r in book.routines:
        for kind, arg in r.steps:
            if kind in ("move", "goto") and arg not in rooms:
                raise InvalidScript(f"{r.name}: unknown room {arg!r}")
            if kind in ("open", "close", "detect"):
                spec = registry.by_name(arg)
                want = SensorKind.MOTION if kind == "detect" else SensorKind.CONTACT
                if spec is None or spec.kind is not want:
                    raise InvalidScript(f"{r.name}: {kind} needs a {want.value} sensor, got {arg!r}")
            if kind == "dwell":
                parse_duration(arg)
        if r.repeat > 1 and r.every <= timedelta(0):
            raise InvalidScript(f"{r.name}: 'repeat' needs a positive 'every'")


class _Day:
    """Mutable replay state for one simulated day."""

    def __init__(self, book, layout, registry, rng, emit):
        self.book = book
        self.registry = registry
        self.rng = rng
        self.emit = emit
        self.graph = layout.graph()
        self.room = book.home
        self.pending_clear: dict[str, datetime] = {}
        self.motion_by_room: dict[str, list[str]] = {}
        for s in registry:
            if s.kind is SensorKind.MOTION and s.model_name not in book.spot_sensors:
                self.motion_by_room.setdefault(s.room, []).append(s.model_name)

    def flush(self, until: datetime | None = None):
        for name, when in sorted(self.pending_clear.items(), key=lambda kv: (kv[1], kv[0])):
            if until is None or when <= until:
                self.emit(when, name, Value.CLEAR)
                del self.pending_clear[name]

    def detect(self, t: datetime, name: str):
        self.flush(t)
        self.emit(t, name, Value.DETECTED)
        self.pending_clear[name] = t + MOTION_HOLD

    def enter(self, t: datetime, room: str):
        self.room = room
        for name in self.motion_by_room.get(room, ()):
            self.detect(t, name)

    def run(self, routine: Routine, t: datetime) -> datetime:
        gap = self.book.step_gap
        for kind, arg in routine.steps:
            if kind == "dwell":
                t += parse_duration(arg)
                continue
            if kind == "move":
                if not self.graph.has_edge(self.room, arg):
                    raise InvalidScript(f"{routine.name}: no edge {self.room} -> {arg}")
                t += gap
                self.enter(t, arg)
            elif kind == "goto":
                try:
                    route = nx.shortest_path(self.graph, self.room, arg)
                except nx.NetworkXNoPath:
                    raise InvalidScript(f"{routine.name}: {arg} unreachable from {self.room}") from None
                for room in route[1:]:
                    t += gap
                    self.enter(t, room)
            elif kind in ("open", "close"):
                spec = self.registry.by_name(arg)
                if spec.room != self.room:
                    raise InvalidScript(f"{routine.name}: {arg} is in {spec.room}, participant is in {self.room}")
                t += gap
                self.flush(t)
                value = Value.OPEN if kind == "open" else Value.CLOSED
                self.emit(t, arg, value)
                if self.rng.random() < self.book.duplicate_rate:
                    # temperature-triggered re-report of the same state
                    self.emit(t + gap * self.rng.uniform(0.1, 0.9), arg, value)
            elif kind == "detect":
                spec = self.registry.by_name(arg)
                if spec.room != self.room:
                    raise InvalidScript(f"{routine.name}: {arg} is in {spec.room}, participant is in {self.room}")
                t += gap
                self.detect(t, arg)
        return t


def simulate(
    layout: HomeLayout,
    registry: SensorRegistry,
    scripts: ScriptBook,
    days: int,
    seed: int = 0,
) -> EventTrace:
    """Replay ``scripts`` over ``days`` consecutive days from ``scripts.start_date``."""
    validate_scripts(scripts, layout, registry)
    tz = timezone(scripts.utc_offset)
    records: list[tuple[datetime, int, str, Value]] = []

    def emit(t: datetime, name: str, value: Value):
        t = t.replace(microsecond=(t.microsecond // 1000) * 1000)
        records.append((t, len(records), registry.by_name(name).sensor_id, value))

    for n in range(1, days + 1):
        day = scripts.start_date + timedelta(days=n - 1)
        rng = random.Random(f"{seed}:{n}")
        instances = []
        for order, r in enumerate(scripts.routines):
            if not r.runs_on(n):
                continue
            for i in range(r.repeat):
                base = datetime.combine(day, r.at, tzinfo=tz) + i * r.every
                shift = rng.uniform(-1, 1) * r.jitter.total_seconds()
                instances.append((base + timedelta(seconds=round(shift)), order, i, r))
        instances.sort(key=lambda x: (x[0], x[1], x[2]))
        state = _Day(scripts, layout, registry, rng, emit)
        t_free = None
        for start, _, _, r in instances:
            if t_free is not None and start < t_free:
                start = t_free
            t_free = state.run(r, start)
        state.flush()

    records.sort(key=lambda rec: (rec[0], rec[1]))
    return EventTrace(tuple(SensorEvent(t, sid, v, i) for i, (t, _, sid, v) in enumerate(records)))
