import itertools
import json
from datetime import date

import pytest

from adlcheck.errors import InvalidInterval, PipelineBug, UnknownGroup, UnresolvedAtom
from adlcheck.events import EventTrace, clean
from adlcheck.layout import parse_config
from adlcheck.model import build_path, dump_path, group_change, initial_state, subtrace

from conftest import at, make_trace

DAY = date(2024, 8, 23)

TWO_DOORS = parse_config(
    "[rooms]\nRoom\n[sensors]\ncontact | Room | a | D\ncontact | Room | b | E\nmotion | Room | c | M\n"
)


def edge_flags(prev: bool, cur: bool) -> tuple[bool, bool]:
    """next(activated) := !state & next(state); next(deactivated) := state & !next(state)."""
    return (not prev) and cur, prev and not cur


def path_for(states, cfg=TWO_DOORS):
    """Drive D through ``states`` (initial first); steps where D keeps its value toggle E instead."""
    rows, e_open = [], False
    for k, (prev, cur) in enumerate(zip(states, states[1:]), 1):
        clock = f"08:00:{k:02d}"
        if prev != cur:
            rows.append((clock, "D", "open" if cur else "closed"))
        else:
            e_open = not e_open
            rows.append((clock, "E", "open" if e_open else "closed"))
    sub = make_trace(DAY, rows)
    return build_path(sub, {"D": states[0]}, cfg.groups, cfg.registry)


@pytest.mark.parametrize("prev,cur", list(itertools.product([False, True], repeat=2)))
def test_contact_edges_two_step(prev, cur):
    p = path_for([prev, cur])
    cell = p.states[1].cells["D"]
    assert cell.state is cur
    assert (cell.activated, cell.deactivated) == edge_flags(prev, cur)
    # flags last exactly one step: the stutter state carries none
    stutter = p.states[-1].cells["D"]
    assert (stutter.activated, stutter.deactivated) == (False, False)
    assert stutter.state is cur


@pytest.mark.parametrize("states", list(itertools.product([False, True], repeat=4)))
def test_contact_edges_longer_sequences(states):
    p = path_for(list(states))
    for k in range(1, len(states)):
        c = p.states[k].cells["D"]
        assert (c.activated, c.deactivated) == edge_flags(states[k - 1], states[k])


def test_refrigerator_open_example(config_a):
    sub = make_trace(DAY, [("08:00:00", "RefrigeratorDoor", "open")])
    p = build_path(sub, initial_state(sub, at(DAY, "07:50"), config_a.registry), config_a.groups, config_a.registry)
    c1, cs = p.states[1].cells["RefrigeratorDoor"], p.states[2].cells["RefrigeratorDoor"]
    assert (c1.state, c1.activated, c1.deactivated) == (True, True, False)
    assert (cs.state, cs.activated) == (True, False)


def test_motion_auto_reverts(config_a):
    sub = make_trace(DAY, [("08:00:00", "MotionKitchen", "detected"), ("08:00:05", "DrawerCutlery", "open")])
    p = build_path(sub, {}, config_a.groups, config_a.registry)
    assert [s.cells["MotionKitchen"].state for s in p.states] == [False, True, False, False]
    assert p.states[1].cells["MotionKitchen"].deactivated is None


def test_empty_window_path(config_a):
    p = build_path(EventTrace(), {}, config_a.groups, config_a.registry)
    assert len(p) == 2
    assert p.states[0].start_marker and p.states[0].end_marker
    assert not (p.states[1].start_marker or p.states[1].end_marker)


def test_markers_and_length(config_a):
    rows = [("08:00:00", "MotionCorridor", "detected"), ("08:00:08", "MotionBathroom", "detected"),
            ("08:00:16", "ShowerDoor", "open")]
    p = build_path(make_trace(DAY, rows), {}, config_a.groups, config_a.registry)
    assert len(p) == len(rows) + 2
    assert [s.start_marker for s in p.states] == [True, False, False, False, False]
    assert [s.end_marker for s in p.states] == [False, False, False, True, False]
    assert p.atom_values("startActivity")[0] and p.atom_values("endActivity")[3]
    with pytest.raises(UnresolvedAtom):
        p.atom_values("MotionCorridor.deactivated")


def test_one_cell_changes_per_step(config_a):
    trace = clean(make_trace(DAY, [
        ("08:00:00", "MotionBedroom", "detected"), ("08:00:08", "MotionCorridor", "detected"),
        ("08:00:16", "MotionBathroom", "detected"), ("08:00:20", "ShowerDoor", "open"),
        ("08:00:22", "ShowerDoor", "closed"), ("08:00:30", "MotionCorridor", "detected"),
    ]))
    p = build_path(trace, {}, config_a.groups, config_a.registry)
    for k in range(1, p.end_index + 1):
        before, after = p.states[k - 1].cells, p.states[k].cells
        changed = [n for n in after if after[n].state != before[n].state]
        # the event's own sensor plus, at most, the motion sensor reverting from the previous step
        sensor = config_a.registry.by_id(p.states[k].event.sensor_id).model_name
        assert sensor in changed
        rest = [n for n in changed if n != sensor]
        assert all(before[n].state and config_a.registry.by_name(n).kind.value == "motion" for n in rest)
        assert len(rest) <= 1
    stutter = p.states[-1].cells
    assert not any(c.activated or c.deactivated for c in stutter.values())


def test_group_change(config_a):
    rows = [("08:00:00", "ShowerDoor", "open"), ("08:00:05", "ShowerDoor", "closed"),
            ("08:00:10", "CupboardFood", "open")]
    p = build_path(make_trace(DAY, rows), {}, config_a.groups, config_a.registry)
    assert [group_change(p, "Bathroom", i) for i in range(len(p))] == [False, True, True, False, False]
    assert [group_change(p, "KitchenCupboards", i) for i in range(len(p))] == [False, False, False, True, False]
    with pytest.raises(UnknownGroup):
        group_change(p, "Garage", 0)


def test_contact_group_change_equals_subvector_difference(config_a):
    rows = [("08:00:00", "CupboardFood", "open"), ("08:00:05", "MotionKitchen", "detected"),
            ("08:00:10", "DrawerCutlery", "open"), ("08:00:15", "CupboardFood", "closed")]
    p = build_path(make_trace(DAY, rows), {}, config_a.groups, config_a.registry)
    members = sorted(config_a.groups["KitchenCupboards"])
    for k in range(1, len(p)):
        diff = any(p.states[k].cells[m].state != p.states[k - 1].cells[m].state for m in members)
        assert group_change(p, "KitchenCupboards", k) == diff


def test_subtrace_is_boundary_inclusive():
    t = make_trace(DAY, [("08:00", "M", "detected"), ("08:10", "D", "open"), ("08:20", "M", "detected")])
    assert len(subtrace(t, at(DAY, "08:00"), at(DAY, "08:20"))) == 3
    assert len(subtrace(t, at(DAY, "08:10"), at(DAY, "08:10"))) == 1
    assert len(subtrace(t, at(DAY, "08:11"), at(DAY, "08:19"))) == 0
    with pytest.raises(InvalidInterval):
        subtrace(t, at(DAY, "08:20"), at(DAY, "08:00"))


def test_initial_state_backward_scan(config_a):
    reg = config_a.registry
    t = make_trace(DAY, [("07:20", "RefrigeratorDoor", "open"), ("07:25", "MotionKitchen", "detected"),
                         ("07:40", "CupboardFood", "open")])
    init = initial_state(t, at(DAY, "07:30"), reg)
    assert init["RefrigeratorDoor"] is True
    assert init["CupboardFood"] is False and init["MotionKitchen"] is False
    assert not any(initial_state(t, at(DAY, "07:00"), reg).values())
    assert not any(initial_state(EventTrace(), at(DAY, "07:00"), reg).values())
    # strictly before: an event exactly at the window start belongs to the window
    assert initial_state(t, at(DAY, "07:20"), reg)["RefrigeratorDoor"] is False


def test_uncleaned_input_is_a_pipeline_bug(config_a):
    g, reg = config_a.groups, config_a.registry
    with pytest.raises(PipelineBug):
        build_path(make_trace(DAY, [("08:00", "ShowerDoor", "closed")]), {}, g, reg)
    with pytest.raises(PipelineBug):
        build_path(make_trace(DAY, [("08:00", "MotionKitchen", "clear")]), {}, g, reg)


def test_dump_path(config_a):
    p = build_path(make_trace(DAY, [("08:00", "ShowerDoor", "open")]), {}, config_a.groups, config_a.registry)
    rows = json.loads(dump_path(p, "json"))
    assert [r["kind"] for r in rows] == ["initial", "event", "stutter"]
    assert "ShowerDoor.activated" in rows[1]["true"] and "Bathroom.change" in rows[1]["true"]
    assert "ShowerDoor=open" in dump_path(p)
