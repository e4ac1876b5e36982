from __future__ import annotations

import random
from datetime import date, datetime, time, timedelta, timezone
from importlib import resources
from pathlib import Path

import pytest

from adlcheck.events import EventTrace, SensorEvent, Value
from adlcheck.layout import load_config
from adlcheck.pltl.properties import load_properties

RANDOM_SENSORS = [("D1", "contact"), ("D2", "contact"), ("M1", "motion"), ("M2", "motion")]
DATA = Path(str(resources.files("adlcheck") / "data"))
PLUS_ONE = timezone(timedelta(hours=1))


def at(day: date, clock: str, tz=PLUS_ONE) -> datetime:
    parts = [int(x) for x in clock.split(":")]
    while len(parts) < 3:
        parts.append(0)
    return datetime.combine(day, time(*parts), tzinfo=tz)


def make_trace(day: date, rows, tz=PLUS_ONE) -> EventTrace:
    """``rows`` are ``(HH:MM[:SS], sensor_id, state)`` tuples in any order."""
    events = [SensorEvent(at(day, c, tz), sid, Value(v), i) for i, (c, sid, v) in enumerate(rows)]
    return EventTrace.from_events(events)


def random_raw(rng: random.Random, n: int) -> EventTrace:
    """A noisy raw trace over two contact and two motion sensors."""
    base = datetime(2024, 8, 23, 8, tzinfo=timezone.utc)
    events, t = [], base
    for i in range(n):
        t += timedelta(milliseconds=rng.choice([0, 0, 1, 500, 3000]))
        sid, kind = rng.choice(RANDOM_SENSORS)
        value = rng.choice([Value.OPEN, Value.CLOSED] if kind == "contact" else [Value.DETECTED, Value.CLEAR])
        events.append(SensorEvent(t, sid, value, i))
    return EventTrace.from_events(events)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def config_a():
    return load_config(DATA / "participant_a.cfg")


@pytest.fixture(scope="session")
def config_b():
    return load_config(DATA / "participant_b.cfg")


@pytest.fixture(scope="session")
def props_a():
    return {p.name: p for p in load_properties(DATA / "participant_a.properties")}


@pytest.fixture(scope="session")
def physical_a():
    return {p.name: p for p in load_properties(DATA / "participant_a_physical.properties")}


@pytest.fixture(scope="session")
def props_b():
    return {p.name: p for p in load_properties(DATA / "participant_b.properties")}


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda ln: int(ln.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
