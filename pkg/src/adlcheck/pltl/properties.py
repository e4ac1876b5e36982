"""Named property files.

One stanza per property, stanzas separated by blank lines::

    name: morning_shower
    scope: daily 07:30-09:30
    formula: WithinInterval(MotionBedroom.activated U
        (MotionCorridor.activated U (Bathroom.change U ShowerDoor.deactivated)))

Indented lines continue the previous field.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import time
from pathlib import Path

from ..errors import AdlCheckError
from .ast import Formula
from .parser import parse_property, render

_SCOPE = re.compile(r"daily\s+(\d{1,2}):(\d{2})\s*-\s*(\d{1,2}):(\d{2})\Z")


@dataclass(frozen=True)
class PropertySpec:
    name: str
    start: time
    end: time
    formula: Formula
    description: str = ""

    @property
    def scope(self) -> str:
        return f"daily {self.start:%H:%M}-{self.end:%H:%M}"


def _stanzas(text: str):
    block: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            if block:
                yield block
                block = []
            continue
        block.append((lineno, line))
    if block:
        yield block


def parse_properties(text: str, known_atoms=None) -> list[PropertySpec]:
    specs = []
    names = set()
    for block in _stanzas(text):
        fields: dict[str, str] = {}
        key = None
        for lineno, line in block:
            if line[0].isspace():
                if key is None:
                    raise AdlCheckError(f"line {lineno}: continuation without a field")
                fields[key] += " " + line.strip()
                continue
            key, sep, value = line.partition(":")
            key = key.strip().lower()
            if not sep or key not in ("name", "scope", "formula", "description"):
                raise AdlCheckError(f"line {lineno}: expected 'name:', 'scope:', 'formula:' or 'description:'")
            fields[key] = value.strip()
        first = block[0][0]
        for required in ("name", "scope", "formula"):
            if required not in fields:
                raise AdlCheckError(f"property stanza at line {first} lacks '{required}:'")
        m = _SCOPE.match(fields["scope"])
        if not m:
            raise AdlCheckError(f"line {first}: scope must look like 'daily HH:MM-HH:MM'")
        h1, m1, h2, m2 = map(int, m.groups())
        start, end = time(h1, m1), time(h2, m2)
        if start >= end:
            raise AdlCheckError(f"line {first}: empty scope {fields['scope']!r}")
        if fields["name"] in names:
            raise AdlCheckError(f"duplicate property name {fields['name']!r}")
        names.add(fields["name"])
        formula = parse_property(fields["formula"], known_atoms)
        specs.append(PropertySpec(fields["name"], start, end, formula, fields.get("description", "")))
    return specs


def load_properties(path: str | Path, known_atoms=None) -> list[PropertySpec]:
    return parse_properties(Path(path).read_text(encoding="utf-8"), known_atoms)


def render_properties(specs) -> str:
    out = []
    for s in specs:
        lines = [f"name: {s.name}", f"scope: {s.scope}"]
        if s.description:
            lines.append(f"description: {s.description}")
        lines.append(f"formula: {render(s.formula)}")
        out.append("\n".join(lines))
    return "\n\n".join(out) + "\n"
