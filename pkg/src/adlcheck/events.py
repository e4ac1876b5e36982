"""Sensor event ingestion and noise reduction.

CSV schema (header required)::

    timestamp,sensor_id,state
    2024-08-23T07:51:02.000+01:00,MotionBedroom,detected

``state`` is one of ``open``, ``closed``, ``detected``, ``clear``.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, TextIO

from .errors import BadState, BadTimestamp, EventError, UnknownSensorId
from .layout import SensorKind, SensorRegistry

HEADER = ("timestamp", "sensor_id", "state")


class Value(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"
    DETECTED = "detected"
    CLEAR = "clear"

    @property
    def kind(self) -> SensorKind:
        if self in (Value.OPEN, Value.CLOSED):
            return SensorKind.CONTACT
        return SensorKind.MOTION


class Provenance(enum.Enum):
    RAW = "raw"
    CLEANED = "cleaned"


@dataclass(frozen=True)
class SensorEvent:
    timestamp: datetime  # timezone-aware; keeps the recorded local offset
    sensor_id: str
    value: Value
    seq_no: int

    @property
    def epoch_ms(self) -> int:
        return round(self.timestamp.timestamp() * 1000)

    @property
    def sort_key(self) -> tuple[datetime, int]:
        return (self.timestamp, self.seq_no)

    @property
    def is_contact(self) -> bool:
        return self.value.kind is SensorKind.CONTACT


@dataclass(frozen=True)
class EventTrace:
    events: tuple[SensorEvent, ...] = ()
    provenance: Provenance = Provenance.RAW

    def __post_init__(self):
        keys = [e.sort_key for e in self.events]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise EventError("trace must be strictly ordered by (timestamp, seq_no)")

    @classmethod
    def from_events(cls, events: Iterable[SensorEvent], provenance: Provenance = Provenance.RAW):
        return cls(tuple(sorted(events, key=lambda e: e.sort_key)), provenance)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def _replace(self, events, provenance=None) -> EventTrace:
        return EventTrace(tuple(events), provenance or self.provenance)


def parse_timestamp(text: str) -> datetime:
    s = text.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(s.replace(" ", "T", 1) if "T" not in s else s)
    except ValueError:
        raise BadTimestamp(f"not an RFC 3339 timestamp: {text!r}") from None
    if ts.tzinfo is None:
        raise BadTimestamp(f"timestamp lacks a UTC offset: {text!r}")
    return ts


def format_timestamp(ts: datetime) -> str:
    return ts.isoformat(timespec="milliseconds")


def parse_events(source: TextIO | str, registry: SensorRegistry | None = None) -> EventTrace:
    """Read the ingest CSV into a raw trace.

    Without a registry only the state vocabulary is checked.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None:
        return EventTrace()
    if tuple(h.strip().lower() for h in header) != HEADER:
        raise EventError(f"expected header {','.join(HEADER)}, got {','.join(header)}")

    events = []
    for seq, row in enumerate(reader):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise EventError(f"row {seq + 2}: expected 3 columns, got {len(row)}")
        ts_s, sensor_id, state_s = (c.strip() for c in row)
        ts = parse_timestamp(ts_s)
        try:
            value = Value(state_s.lower())
        except ValueError:
            raise BadState(f"row {seq + 2}: unknown state {state_s!r}") from None
        if registry is not None:
            spec = registry.by_id(sensor_id)
            if spec is None:
                raise UnknownSensorId(f"row {seq + 2}: {sensor_id!r} is not in the registry")
            if spec.kind is not value.kind:
                raise BadState(
                    f"row {seq + 2}: {value.value!r} is not a {spec.kind.value} state ({sensor_id})"
                )
        events.append(SensorEvent(ts, sensor_id, value, seq))
    return EventTrace.from_events(events)


def write_events(trace: EventTrace | Iterable[SensorEvent], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for e in trace:
        writer.writerow((format_timestamp(e.timestamp), e.sensor_id, e.value.value))


def events_to_csv(trace: EventTrace | Iterable[SensorEvent]) -> str:
    buf = io.StringIO()
    write_events(trace, buf)
    return buf.getvalue()


def dedup_contact(trace: EventTrace) -> EventTrace:
    """Keep only the first event of each run of equal states per contact sensor."""
    last: dict[str, Value] = {}
    kept = []
    for e in trace:
        if e.is_contact:
            if last.get(e.sensor_id) is e.value:
                continue
            last[e.sensor_id] = e.value
        kept.append(e)
    return trace._replace(kept)


def filter_motion_clear(trace: EventTrace) -> EventTrace:
    return trace._replace(e for e in trace if e.value is not Value.CLEAR)


def collapse_motion_repeats(trace: EventTrace) -> EventTrace:
    """Drop repeated detections from one motion sensor with nothing in between."""
    kept = []
    prev = None
    for e in trace:
        repeat = (
            e.value is Value.DETECTED
            and prev is not None
            and prev.sensor_id == e.sensor_id
            and prev.value is Value.DETECTED
        )
        if not repeat:
            kept.append(e)
        prev = e
    return trace._replace(kept)


def clean(trace: EventTrace) -> EventTrace:
    out = collapse_motion_repeats(filter_motion_clear(dedup_contact(trace)))
    return out._replace(out.events, Provenance.CLEANED)


def local_dates(trace: EventTrace) -> list:
    return sorted({e.timestamp.date() for e in trace})


def utc_offset(trace: EventTrace):
    """The recorded offset of the first event, or UTC for an empty trace."""
    if not trace.events:
        return timezone.utc
    return trace.events[0].timestamp.tzinfo
