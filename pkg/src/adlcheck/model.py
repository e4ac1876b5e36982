"""Finite path models: one system state per observed event, closed by a stutter state.

State 0 holds the sensors' configuration at the window start.  Each event
``e_k`` of the window's subtrace yields state ``k``.  A final quiescent state
(no activations, no markers) is appended and treated as looping on itself, so
infinite-path temporal operators have a well-defined value on the finite
observation.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from datetime import datetime
from typing import Mapping

from .errors import InvalidInterval, PipelineBug, UnknownGroup, UnresolvedAtom
from .events import EventTrace, SensorEvent, Value, format_timestamp
from .layout import SensorKind, SensorRegistry

START = "startActivity"
END = "endActivity"
CONTACT_FLAGS = ("state", "activated", "deactivated")
MOTION_FLAGS = ("state", "activated")


@dataclass(frozen=True)
class SensorCell:
    state: bool
    activated: bool = False
    deactivated: bool | None = False  # None for motion sensors


@dataclass(frozen=True)
class SystemState:
    cells: Mapping[str, SensorCell]
    timestamp: datetime | None
    start_marker: bool = False
    end_marker: bool = False
    event: SensorEvent | None = None


@dataclass(frozen=True)
class PathModel:
    states: tuple[SystemState, ...]
    groups: Mapping[str, frozenset[str]]
    source_events: tuple[SensorEvent, ...]
    kinds: Mapping[str, SensorKind] = field(default_factory=dict)

    @property
    def stutter_index(self) -> int:
        return len(self.states) - 1

    @property
    def end_index(self) -> int:
        return len(self.source_events)

    def __len__(self):
        return len(self.states)

    def atoms(self) -> set[str]:
        names = {START, END}
        for name, kind in self.kinds.items():
            flags = CONTACT_FLAGS if kind is SensorKind.CONTACT else MOTION_FLAGS
            names.update(f"{name}.{flag}" for flag in flags)
        names.update(f"{g}.change" for g in self.groups)
        return names

    def atom_values(self, atom: str) -> list[bool]:
        """Truth value of ``atom`` at every state index."""
        if atom == START:
            return [s.start_marker for s in self.states]
        if atom == END:
            return [s.end_marker for s in self.states]
        name, _, flag = atom.rpartition(".")
        if flag == "change" and name in self.groups:
            return [group_change(self, name, i) for i in range(len(self.states))]
        kind = self.kinds.get(name)
        if kind is None or flag not in (CONTACT_FLAGS if kind is SensorKind.CONTACT else MOTION_FLAGS):
            raise UnresolvedAtom(atom)
        return [bool(getattr(s.cells[name], flag)) for s in self.states]

    def label_sets(self, atoms=None) -> list[frozenset[str]]:
        atoms = sorted(self.atoms() if atoms is None else atoms)
        columns = {a: self.atom_values(a) for a in atoms}
        return [frozenset(a for a in atoms if columns[a][i]) for i in range(len(self.states))]


def subtrace(trace: EventTrace, a: datetime, b: datetime) -> EventTrace:
    """Events ``e`` with ``a <= t(e) <= b``, in order."""
    if a > b:
        raise InvalidInterval(f"window start {a} is after its end {b}")
    times = [e.timestamp for e in trace.events]
    lo = bisect.bisect_left(times, a)
    hi = bisect.bisect_right(times, b)
    return trace._replace(trace.events[lo:hi])


def initial_state(full_trace: EventTrace, a: datetime, registry: SensorRegistry) -> dict[str, bool]:
    """Contact sensors take the value of their last event strictly before ``a``."""
    init = {s.model_name: False for s in registry}
    times = [e.timestamp for e in full_trace.events]
    for e in full_trace.events[: bisect.bisect_left(times, a)]:
        spec = registry.by_id(e.sensor_id)
        if spec is not None and spec.kind is SensorKind.CONTACT:
            init[spec.model_name] = e.value is Value.OPEN
    return init


def build_path(
    sub: EventTrace,
    init: Mapping[str, bool],
    groups: Mapping[str, frozenset[str]],
    registry: SensorRegistry,
    window: tuple[datetime, datetime] | None = None,
) -> PathModel:
    kinds = {s.model_name: s.kind for s in registry}
    cells = {
        name: SensorCell(
            state=bool(init.get(name, False)) and kind is SensorKind.CONTACT,
            deactivated=False if kind is SensorKind.CONTACT else None,
        )
        for name, kind in kinds.items()
    }
    n = len(sub)
    start_ts, end_ts = window if window else (None, None)
    states = [SystemState(dict(cells), start_ts, start_marker=True, end_marker=(n == 0))]

    for k, event in enumerate(sub.events, 1):
        spec = registry.by_id(event.sensor_id)
        if spec is None:
            raise PipelineBug(f"event for unregistered sensor {event.sensor_id!r}")
        # previous motion detections revert; every flag lasts one step
        nxt = {
            name: SensorCell(
                state=c.state and kinds[name] is SensorKind.CONTACT,
                deactivated=False if kinds[name] is SensorKind.CONTACT else None,
            )
            for name, c in cells.items()
        }
        prev = cells[spec.model_name]
        if spec.kind is SensorKind.CONTACT:
            new_state = event.value is Value.OPEN
            if new_state == prev.state:
                raise PipelineBug(
                    f"{spec.model_name} reported {event.value.value} while already in that state; "
                    "trace was not cleaned"
                )
            nxt[spec.model_name] = SensorCell(new_state, new_state, not new_state)
        else:
            if event.value is not Value.DETECTED:
                raise PipelineBug(f"motion event {event.value.value!r} survived cleaning")
            if prev.state:
                raise PipelineBug(f"repeated detection of {spec.model_name} survived cleaning")
            nxt[spec.model_name] = SensorCell(True, True, None)
        cells = nxt
        states.append(SystemState(dict(cells), event.timestamp, False, k == n, event))

    stutter = {
        name: SensorCell(
            state=c.state and kinds[name] is SensorKind.CONTACT,
            deactivated=False if kinds[name] is SensorKind.CONTACT else None,
        )
        for name, c in cells.items()
    }
    states.append(SystemState(stutter, end_ts))
    return PathModel(tuple(states), dict(groups), tuple(sub.events), kinds)


def group_change(path: PathModel, group_name: str, index: int) -> bool:
    """Did any member of the group activate or deactivate at ``index``?"""
    try:
        members = path.groups[group_name]
    except KeyError:
        raise UnknownGroup(group_name) from None
    cells = path.states[index].cells
    return any(cells[m].activated or bool(cells[m].deactivated) for m in members)


def path_rows(path: PathModel) -> list[dict]:
    rows = []
    for i, s in enumerate(path.states):
        if i == path.stutter_index:
            kind = "stutter"
        elif i == 0:
            kind = "initial"
        else:
            kind = "event"
        rows.append(
            {
                "index": i,
                "kind": kind,
                "timestamp": format_timestamp(s.timestamp) if s.timestamp else None,
                "event": None
                if s.event is None
                else {"sensor_id": s.event.sensor_id, "state": s.event.value.value},
                "markers": [m for m, on in ((START, s.start_marker), (END, s.end_marker)) if on],
                "true": sorted(
                    f"{name}.{flag}"
                    for name, c in s.cells.items()
                    for flag in ("state", "activated", "deactivated")
                    if getattr(c, flag)
                )
                + sorted(f"{g}.change" for g in path.groups if group_change(path, g, i)),
            }
        )
    return rows


def dump_path(path: PathModel, fmt: str = "text") -> str:
    rows = path_rows(path)
    if fmt == "json":
        return json.dumps(rows, indent=2)
    lines = []
    for r in rows:
        ev = f"{r['event']['sensor_id']}={r['event']['state']}" if r["event"] else f"<{r['kind']}>"
        marks = (" [" + ",".join(r["markers"]) + "]") if r["markers"] else ""
        ts = r["timestamp"] or "-"
        lines.append(f"{r['index']:>4}  {ts:<29} {ev}{marks}  {' '.join(r['true'])}")
    return "\n".join(lines)
