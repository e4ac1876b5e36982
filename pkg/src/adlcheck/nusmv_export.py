"""NuSMV source generation for one window, plus an optional external cross-check.

The main module replays the window's subtrace with a step counter: the
transition out of step ``k - 1`` applies event ``k``, and the last step loops
on itself, which is the same lasso the internal evaluator judges.
"""

from __future__ import annotations

import os
import re
import shutil
import subprocess
import tempfile
from pathlib import Path

from .events import Value
from .layout import SensorKind, SensorRegistry
from .model import PathModel
from .pltl.ast import (
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
    expand_macros,
)

NUSMV_ENV = "ADLCHECK_NUSMV"

CONTACT_MODULE = """\
MODULE contact(set_open, set_closed)
VAR
  state : boolean;
  activated : boolean;
  deactivated : boolean;
ASSIGN
  init(state) := FALSE;
  init(activated) := FALSE;
  init(deactivated) := FALSE;
  next(activated) := !state & next(state);
  next(deactivated) := state & !next(state);
  next(state) := case
      set_open : TRUE;
      set_closed : FALSE;
      TRUE : state;
    esac;
"""

# identical except for the starting configuration
CONTACT_OPEN_MODULE = CONTACT_MODULE.replace("MODULE contact(", "MODULE contact_initially_open(").replace(
    "init(state) := FALSE;", "init(state) := TRUE;"
)

MOTION_MODULE = """\
MODULE motion(detect)
VAR
  state : boolean;
  activated : boolean;
ASSIGN
  init(state) := FALSE;
  init(activated) := FALSE;
  next(activated) := !state & next(state);
  next(state) := detect;
"""


def _steps(indices: list[int]) -> str:
    if not indices:
        return "FALSE"
    return " | ".join(f"step = {i}" for i in indices)


def export_model(path: PathModel, registry: SensorRegistry, groups=None) -> str:
    groups = path.groups if groups is None else groups
    n = path.end_index
    last = path.stutter_index

    opens: dict[str, list[int]] = {}
    closes: dict[str, list[int]] = {}
    detects: dict[str, list[int]] = {}
    for k, event in enumerate(path.source_events, 1):
        name = registry.by_id(event.sensor_id).model_name
        bucket = {Value.OPEN: opens, Value.CLOSED: closes, Value.DETECTED: detects}[event.value]
        bucket.setdefault(name, []).append(k - 1)

    init_cells = path.states[0].cells
    need_open_module = any(
        init_cells[s.model_name].state for s in registry if s.kind is SensorKind.CONTACT
    )

    out = [
        f"-- window: {len(path.source_events)} events, stutter step {last}",
        CONTACT_MODULE,
    ]
    if need_open_module:
        out.append(CONTACT_OPEN_MODULE)
    out.append(MOTION_MODULE)

    group_modules = []
    for g, members in sorted(groups.items()):
        members = sorted(members)
        terms = []
        for m in members:
            terms.append(f"{m}.activated")
            if registry.by_name(m).kind is SensorKind.CONTACT:
                terms.append(f"{m}.deactivated")
        params = f"({', '.join(members)})" if members else ""
        body = " | ".join(terms) if terms else "FALSE"
        group_modules.append(f"MODULE group_{g}{params}\nDEFINE\n  change := {body};\n")
    out.extend(group_modules)

    main = ["MODULE main", "VAR", f"  step : 0..{last};"]
    for s in registry:
        if s.kind is SensorKind.CONTACT:
            module = "contact_initially_open" if init_cells[s.model_name].state else "contact"
            args = f"{_steps(opens.get(s.model_name, []))}, {_steps(closes.get(s.model_name, []))}"
            main.append(f"  {s.model_name} : {module}({args});")
        else:
            main.append(f"  {s.model_name} : motion({_steps(detects.get(s.model_name, []))});")
    for g, members in sorted(groups.items()):
        args = f"({', '.join(sorted(members))})" if members else ""
        main.append(f"  {g} : group_{g}{args};")
    main += [
        "ASSIGN",
        "  init(step) := 0;",
        "  next(step) := case",
        f"      step < {last} : step + 1;",
        "      TRUE : step;",
        "    esac;",
        "DEFINE",
        "  startActivity := step = 0;",
        f"  endActivity := step = {n};",
    ]
    out.append("\n".join(main) + "\n")
    return "\n".join(out)


_NUSMV_BINARY = {Implies: "->", Until: "U", Release: "V", Or: "|", And: "&"}
_NUSMV_UNARY = {Next: "X", Prev: "Y", Eventually: "F", Once: "O", Globally: "G"}


def _nusmv(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "TRUE" if f.value else "FALSE"
    if isinstance(f, Not):
        inner = f.operand
        s = _nusmv(inner)
        if isinstance(inner, Binary):
            return f"!({s})"
        return f"! {s}" if type(inner) in _NUSMV_UNARY else f"!{s}"
    if type(f) in _NUSMV_UNARY:
        s = _nusmv(f.operand)
        return f"{_NUSMV_UNARY[type(f)]} " + (s if isinstance(f.operand, (Atom, Const)) else f"({s})")
    if isinstance(f, Binary):
        parts = []
        for side in (f.left, f.right):
            s = _nusmv(side)
            parts.append(f"({s})" if isinstance(side, Binary) else s)
        return f"{parts[0]} {_NUSMV_BINARY[type(f)]} {parts[1]}"
    raise TypeError(f"not a formula: {f!r}")


def export_property(f: Formula) -> str:
    """``LTLSPEC`` line; binary operands are always parenthesised."""
    return "LTLSPEC " + _nusmv(expand_macros(f))


# -- optional cross-check -------------------------------------------------------


def nusmv_binary() -> str | None:
    configured = os.environ.get(NUSMV_ENV)
    if configured:
        return configured
    return shutil.which("NuSMV") or shutil.which("nusmv")


_RESULT = re.compile(r"-- specification .* is (true|false)")


def run_nusmv(model_text: str, spec: str, binary: str | None = None) -> bool:
    """Ask the external checker for the verdict of ``spec`` on ``model_text``."""
    binary = binary or nusmv_binary()
    if not binary:
        raise FileNotFoundError(f"no NuSMV binary; set {NUSMV_ENV}")
    with tempfile.TemporaryDirectory() as tmp:
        smv = Path(tmp) / "window.smv"
        smv.write_text(model_text + "\n" + spec + "\n", encoding="utf-8")
        proc = subprocess.run([binary, str(smv)], capture_output=True, text=True, timeout=120)
    found = _RESULT.findall(proc.stdout)
    if proc.returncode != 0 or len(found) != 1:
        raise RuntimeError(f"NuSMV failed ({proc.returncode}): {proc.stdout[-400:]}{proc.stderr[-400:]}")
    return found[0] == "true"


def write_window(directory: str | Path, stem: str, model_text: str, spec: str) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / f"{stem}.smv"
    target.write_text(model_text + "\n" + spec + "\n", encoding="utf-8")
    return target

