import csv
import io
import json
from datetime import date

import jsonschema
import pytest

from adlcheck.checker import run_suite
from adlcheck.events import EventTrace, parse_events
from adlcheck.plotting import plot_report, window_grid
from adlcheck.report import render_report, schema, span_label, to_csv, to_dict, to_json, to_text


@pytest.fixture(scope="module")
def report_a(config_a, props_a, data_dir):
    trace = parse_events((data_dir / "participant_a_week.csv").read_text(), config_a.registry)
    return run_suite(trace, list(props_a.values()), config_a)


def test_text_table_layout(report_a):
    lines = to_text(report_a).splitlines()
    assert lines[0].split("|")[0].strip() == "Date"
    assert [c.strip() for c in lines[1].split("|")][1:] == ["Status", "Time", "Seq"] * 2
    body = lines[3:10]
    assert [ln.split("|")[0].strip() for ln in body] == [f"{d:02d}-08-24" for d in range(23, 30)]
    row_28 = [c.strip() for c in body[5].split("|")]
    assert row_28[1:4] == ["Viol.", "--", "0"]
    assert lines[-1] == "14 checks, 12 satisfied, 2 violated"


def test_span_label(report_a):
    row = report_a.rows[0]
    a, b = row.time_span
    assert span_label(row) == f"{a.hour}:{a.minute:02d}--{b.hour}:{b.minute:02d}"


def test_csv_rows(report_a):
    rows = list(csv.DictReader(io.StringIO(to_csv(report_a))))
    assert len(rows) == 14
    bad = [(r["date"], r["property"]) for r in rows if r["status"] == "violated"]
    assert bad == [("2024-08-25", "refrigerator"), ("2024-08-28", "morning_shower")]
    assert all(r["windows"] == "11" for r in rows)
    assert all((r["time_start"] == "") == (r["seq"] == "0") for r in rows)


def test_json_validates_against_schema(report_a):
    doc = json.loads(to_json(report_a))
    jsonschema.Draft202012Validator(schema()).validate(doc)
    assert doc["summary"] == {"checks": 14, "satisfied": 12, "violated": 2}
    violated = [r for r in doc["rows"] if r["status"] == "violated"]
    assert all(len(r["counterexamples"]) == 11 for r in violated)
    assert all(r["counterexamples"] == [] for r in doc["rows"] if r["status"] == "satisfied")


def test_schema_rejects_tampering(report_a):
    doc = to_dict(report_a)
    doc["rows"][0]["status"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, schema())


def test_empty_trace_report_validates(config_a, props_a):
    report = run_suite(EventTrace(), list(props_a.values()), config_a, days=[date(2024, 8, 23)])
    doc = json.loads(to_json(report))
    jsonschema.validate(doc, schema())
    assert {c["reason"] for r in doc["rows"] for c in r["counterexamples"]} == {"empty"}


@pytest.mark.parametrize("fmt", ["text", "json", "csv"])
def test_rendering_is_deterministic(report_a, fmt):
    assert render_report(report_a, fmt) == render_report(report_a, fmt)


def test_window_grid(report_a):
    grid, days, labels = window_grid(report_a, "morning_shower")
    assert grid.shape == (7, 11) and len(days) == 7 and labels[0] == "07:30"
    assert (grid[5] != 2).all() and (grid[0] == 2).any()


def test_figures_are_written(report_a, tmp_path):
    paths = plot_report(report_a, tmp_path)
    assert sorted(p.name for p in paths) == ["morning_shower.png", "refrigerator.png"]
    assert all(p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n" for p in paths)
