import random
import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adlcheck.events import EventTrace, clean
from adlcheck.model import build_path, initial_state, subtrace
from adlcheck.nusmv_export import (
    CONTACT_MODULE,
    export_model,
    export_property,
    nusmv_binary,
    run_nusmv,
    write_window,
)
from adlcheck.pltl import evaluate, parse_property
from adlcheck.pltl.ast import expand_macros

from conftest import at, make_trace
from oracle import random_formula
from scenarios import A_DAY, SCENARIOS, window_paths

GOLDEN = Path(__file__).parent / "golden"

CONTACT_LINES = [
    "init(state) := FALSE;",
    "next(activated) := !state & next(state);",
    "next(deactivated) := state & !next(state);",
    "set_open : TRUE;",
    "set_closed : FALSE;",
]

KITCHEN_ROWS = [
    ("08:09:50", "RefrigeratorDoor", "open"),
    ("08:10:00", "MotionKitchen", "detected"),
    ("08:10:20", "RefrigeratorDoor", "closed"),
    ("08:10:30", "CupboardFood", "open"),
    ("08:10:40", "CupboardFood", "closed"),
]


def kitchen_path(config, rows=KITCHEN_ROWS):
    t = clean(make_trace(A_DAY, rows))
    a, b = at(A_DAY, "08:00"), at(A_DAY, "08:20")
    return build_path(subtrace(t, a, b), initial_state(t, a, config.registry), config.groups, config.registry,
                      window=(a, b))


def test_contact_module_lines():
    body = [ln.strip() for ln in CONTACT_MODULE.splitlines()]
    for line in CONTACT_LINES:
        assert line in body


def test_tautology_spec():
    assert export_property(parse_property("G (p | !p)")) == "LTLSPEC G (p | !p)"


def test_release_spelled_v():
    assert export_property(parse_property("p R q")) == "LTLSPEC p V q"


def test_refrigerator_spec_nesting(props_a):
    assert "Y (! O RefrigeratorDoor.activated)" in export_property(props_a["refrigerator"].formula)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 4))
def test_exported_spec_parses_back(seed, d):
    f = random_formula(random.Random(seed), ["p", "q", "r"], d)
    text = export_property(f).removeprefix("LTLSPEC ")
    assert parse_property(text) == expand_macros(f)


def test_golden_kitchen_window(config_a, props_a):
    text = export_model(kitchen_path(config_a), config_a.registry) + "\n" + export_property(
        props_a["refrigerator"].formula) + "\n"
    assert text == (GOLDEN / "kitchen_window.smv").read_text()


def test_model_structure(config_a):
    path = kitchen_path(config_a)
    text = export_model(path, config_a.registry)
    main = text[text.index("MODULE main"):]
    for s in config_a.registry:
        assert re.search(rf"^  {s.model_name} : (contact|motion)\(", main, re.M)
    for g in config_a.groups:
        assert f"  {g} : group_{g}" in main
    assert f"step : 0..{path.stutter_index};" in main
    assert f"endActivity := step = {path.end_index};" in main
    assert text.count("case") == text.count("esac;")
    # events land on the transition out of the previous step
    assert "RefrigeratorDoor : contact(step = 0, step = 2);" in main
    assert "MotionKitchen : motion(step = 1);" in main


def test_empty_window_model(config_a):
    path = build_path(EventTrace(), {}, config_a.groups, config_a.registry)
    main = export_model(path, config_a.registry).split("MODULE main")[1]
    assert "step : 0..1;" in main and "endActivity := step = 0;" in main
    assert "step = " not in main.split("ASSIGN")[0].split("step : 0..1;")[1]


def test_initially_open_contact(config_a):
    rows = [("07:55:00", "RefrigeratorDoor", "open"), ("08:05:00", "RefrigeratorDoor", "closed")]
    text = export_model(kitchen_path(config_a, rows), config_a.registry)
    assert "MODULE contact_initially_open(" in text
    assert "RefrigeratorDoor : contact_initially_open(FALSE, step = 0);" in text


def test_write_window(tmp_path):
    target = write_window(tmp_path / "out", "p_2024-08-23_w03", "MODULE main\n", "LTLSPEC TRUE")
    assert target.name == "p_2024-08-23_w03.smv"
    assert target.read_text().endswith("LTLSPEC TRUE\n")


def test_binary_hook(monkeypatch):
    monkeypatch.setenv("ADLCHECK_NUSMV", "/opt/nusmv/bin/NuSMV")
    assert nusmv_binary() == "/opt/nusmv/bin/NuSMV"


requires_nusmv = pytest.mark.skipif(nusmv_binary() is None, reason="NuSMV binary not configured")


def scenario_windows(config_a, config_b, props):
    for s in SCENARIOS:
        config = config_a if s.participant == "a" else config_b
        spec = props[s.property]
        for _, path in window_paths(s.trace(), config, spec, s.day, s.tz):
            yield s.name, config, spec, path


@requires_nusmv
def test_cross_check_scenarios(config_a, config_b, props_a, physical_a, props_b):
    props = props_a | physical_a | props_b
    for name, config, spec, path in scenario_windows(config_a, config_b, props):
        ours = evaluate(path, spec.formula).holds
        theirs = run_nusmv(export_model(path, config.registry), export_property(spec.formula))
        assert ours == theirs, name
