"""Per-participant configuration: sensor registry and home layout graph.

The configuration is a single text file with four bracketed sections::

    [rooms]
    Bedroom
    Corridor

    [edges]
    Bedroom <-> Corridor        # or "A -> B" for a one-way edge

    [sensors]
    # type | room | location | name [| sensor id]
    motion | Bedroom | Facing bed | MotionBedroom
    contact | Corridor | Front door | FrontDoor | binary_sensor.front_door

    [groups]
    Entrance = FrontDoor, MotionCorridor

Blank lines and ``#`` comments are ignored.  The sensor id column is
optional and defaults to the model name.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping

import networkx as nx

from .errors import (
    ConfigError,
    DisconnectedLayout,
    DuplicateModelName,
    UnknownGroupMember,
    UnknownRoom,
)

IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
SECTIONS = ("rooms", "edges", "sensors", "groups")


class SensorKind(enum.Enum):
    CONTACT = "contact"
    MOTION = "motion"


@dataclass(frozen=True)
class SensorSpec:
    sensor_id: str
    kind: SensorKind
    room: str
    location: str
    model_name: str


@dataclass(frozen=True)
class SensorRegistry:
    sensors: tuple[SensorSpec, ...]

    def __post_init__(self):
        seen_names: set[str] = set()
        seen_ids: set[str] = set()
        for spec in self.sensors:
            if not IDENTIFIER.match(spec.model_name):
                raise ConfigError(f"invalid model name {spec.model_name!r}")
            if spec.model_name in seen_names:
                raise DuplicateModelName(spec.model_name)
            if spec.sensor_id in seen_ids:
                raise ConfigError(f"duplicate sensor id {spec.sensor_id!r}")
            seen_names.add(spec.model_name)
            seen_ids.add(spec.sensor_id)

    def __iter__(self):
        return iter(self.sensors)

    def __len__(self):
        return len(self.sensors)

    def by_id(self, sensor_id: str) -> SensorSpec | None:
        return self._ids.get(sensor_id)

    def by_name(self, model_name: str) -> SensorSpec | None:
        return self._names.get(model_name)

    @property
    def model_names(self) -> tuple[str, ...]:
        return tuple(s.model_name for s in self.sensors)

    @cached_property
    def _ids(self) -> dict[str, SensorSpec]:
        return {s.sensor_id: s for s in self.sensors}

    @cached_property
    def _names(self) -> dict[str, SensorSpec]:
        return {s.model_name: s for s in self.sensors}


@dataclass(frozen=True)
class HomeLayout:
    rooms: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    # explicit groups from the config file; see default_groups for the resolved map
    groups: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.rooms)
        g.add_edges_from(self.edges)
        return g

    def neighbours(self, room: str) -> list[str]:
        return [b for a, b in self.edges if a == room]


@dataclass(frozen=True)
class HomeConfig:
    registry: SensorRegistry
    layout: HomeLayout

    @property
    def groups(self) -> dict[str, frozenset[str]]:
        return default_groups(self.registry, self.layout)

    def __iter__(self):
        # allows ``registry, layout = parse_config(text)``
        return iter((self.registry, self.layout))


def default_groups(registry: SensorRegistry, layout: HomeLayout) -> dict[str, frozenset[str]]:
    """One group per room holding that room's sensors, then explicit groups.

    An explicit group whose name equals a room replaces the room's default.
    """
    groups: dict[str, frozenset[str]] = {}
    for room in layout.rooms:
        groups[room] = frozenset(s.model_name for s in registry if s.room == room)
    for name, members in layout.groups.items():
        groups[name] = frozenset(members)
    return groups


def validate(registry: SensorRegistry, layout: HomeLayout) -> None:
    rooms = set(layout.rooms)
    if len(rooms) != len(layout.rooms):
        raise ConfigError("duplicate room name")
    if not rooms:
        raise ConfigError("no rooms declared")
    for room in layout.rooms:
        if not IDENTIFIER.match(room):
            raise ConfigError(f"invalid room name {room!r}")
    for a, b in layout.edges:
        for end in (a, b):
            if end not in rooms:
                raise UnknownRoom(f"edge {a} -> {b}: undeclared room {end!r}")
    for spec in registry:
        if spec.room not in rooms:
            raise UnknownRoom(f"sensor {spec.model_name} is in undeclared room {spec.room!r}")
    names = set(registry.model_names)
    for group, members in layout.groups.items():
        if not IDENTIFIER.match(group):
            raise ConfigError(f"invalid group name {group!r}")
        if group in names:
            raise ConfigError(f"group {group!r} clashes with a sensor model name")
        for m in members:
            if m not in names:
                raise UnknownGroupMember(f"group {group}: unknown sensor {m!r}")
    if not nx.is_weakly_connected(layout.graph()):
        raise DisconnectedLayout("home layout graph is not weakly connected")


def parse_config(text: str) -> HomeConfig:
    section = None
    rooms: list[str] = []
    edges: list[tuple[str, str]] = []
    sensors: list[SensorSpec] = []
    groups: dict[str, tuple[str, ...]] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1).lower()
            if section not in SECTIONS:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            continue
        if section is None:
            raise ConfigError(f"line {lineno}: content before first section")

        if section == "rooms":
            rooms.extend(line.split())
        elif section == "edges":
            m = re.fullmatch(r"(\S+)\s*(<->|->)\s*(\S+)", line)
            if not m:
                raise ConfigError(f"line {lineno}: bad edge {line!r}")
            a, arrow, b = m.groups()
            for edge in [(a, b)] + ([(b, a)] if arrow == "<->" else []):
                if edge not in edges:
                    edges.append(edge)
        elif section == "sensors":
            cols = [c.strip() for c in line.split("|")]
            if len(cols) not in (4, 5):
                raise ConfigError(f"line {lineno}: expected 4 or 5 '|' separated columns")
            kind_s, room, location, name = cols[:4]
            try:
                kind = SensorKind(kind_s.lower())
            except ValueError:
                raise ConfigError(f"line {lineno}: unknown sensor type {kind_s!r}") from None
            sensor_id = cols[4] if len(cols) == 5 and cols[4] else name
            sensors.append(SensorSpec(sensor_id, kind, room, location, name))
        elif section == "groups":
            name, sep, rest = line.partition("=")
            if not sep:
                raise ConfigError(f"line {lineno}: expected 'Group = a, b, ...'")
            members = rest.strip().strip("{}")
            groups[name.strip()] = tuple(x.strip() for x in members.split(",") if x.strip())

    registry = SensorRegistry(tuple(sensors))
    layout = HomeLayout(tuple(rooms), tuple(edges), groups)
    validate(registry, layout)
    return HomeConfig(registry, layout)


def load_config(path: str | Path) -> HomeConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def render_config(registry: SensorRegistry, layout: HomeLayout) -> str:
    out = ["[rooms]", *layout.rooms, "", "[edges]"]
    out += [f"{a} -> {b}" for a, b in layout.edges]
    out += ["", "[sensors]", "# type | room | location | name | sensor id"]
    for s in registry:
        out.append(f"{s.kind.value} | {s.room} | {s.location} | {s.model_name} | {s.sensor_id}")
    out += ["", "[groups]"]
    out += [f"{g} = {', '.join(ms)}" for g, ms in layout.groups.items()]
    return "\n".join(out) + "\n"


def rooms_of(registry: SensorRegistry, kind: SensorKind | None = None) -> dict[str, list[SensorSpec]]:
    rooms: dict[str, list[SensorSpec]] = {}
    for s in registry:
        if kind is None or s.kind is kind:
            rooms.setdefault(s.room, []).append(s)
    return rooms

