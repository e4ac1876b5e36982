"""Report serialisation: delimited text table, CSV and JSON."""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime
from importlib import resources

from .checker import DayReport, Status, VerdictReport
from .events import format_timestamp
from .pltl.parser import render

FORMAT_TAG = "adlcheck-report/1"
STATUS_LABEL = {Status.SATISFIED: "Satisf.", Status.VIOLATED: "Viol."}


def _clock(ts: datetime) -> str:
    return f"{ts.hour}:{ts.minute:02d}"


def span_label(row: DayReport) -> str:
    if row.time_span is None:
        return "--"
    a, b = row.time_span
    return f"{_clock(a)}--{_clock(b)}"


def to_text(report: VerdictReport) -> str:
    """Wide table: one line per day, Status/Time/Seq columns per property."""
    names = [p.name for p in report.properties]
    header1 = ["Date"] + [c for n in names for c in (n, "", "")]
    header2 = [""] + ["Status", "Time", "Seq"] * len(names)
    body = []
    for day in report.days:
        cells = [day.strftime("%d-%m-%y")]
        for n in names:
            r = report.row(day, n)
            cells += [STATUS_LABEL[r.status], span_label(r), str(r.seq)]
        body.append(cells)
    table = [header1, header2, *body]
    widths = [max(len(row[i]) for row in table) for i in range(len(header1))]

    def line(cells):
        return " | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    out = [line(header1), line(header2), "-+-".join("-" * w for w in widths)]
    out += [line(c) for c in body]
    violated = sum(r.status is Status.VIOLATED for r in report.rows)
    out.append("")
    out.append(f"{len(report.rows)} checks, {len(report.rows) - violated} satisfied, {violated} violated")
    return "\n".join(out) + "\n"


def to_csv(report: VerdictReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "property", "status", "time_start", "time_end", "seq", "windows"])
    for r in report.rows:
        a, b = (format_timestamp(t) for t in r.time_span) if r.time_span else ("", "")
        w.writerow([r.date.isoformat(), r.property, r.status.value, a, b, r.seq, len(r.windows)])
    return buf.getvalue()


def row_to_dict(r: DayReport) -> dict:
    return {
        "date": r.date.isoformat(),
        "property": r.property,
        "status": r.status.value,
        "time_span": None
        if r.time_span is None
        else {"start": format_timestamp(r.time_span[0]), "end": format_timestamp(r.time_span[1])},
        "seq": r.seq,
        "windows": [
            {
                "start": format_timestamp(w.start),
                "end": format_timestamp(w.end),
                "events": w.n_events,
                "result": w.outcome,
            }
            for w in r.windows
        ],
        "counterexamples": [
            {
                "window": {"start": format_timestamp(c.start), "end": format_timestamp(c.end)},
                "reason": c.reason,
                **c.counterexample.to_dict(),
            }
            for c in r.counterexamples
        ],
    }


def to_dict(report: VerdictReport) -> dict:
    violated = sum(r.status is Status.VIOLATED for r in report.rows)
    return {
        "format": FORMAT_TAG,
        "window": {
            "width_seconds": int(report.width.total_seconds()),
            "stride_seconds": int(report.stride.total_seconds()),
        },
        "properties": [
            {"name": p.name, "scope": p.scope, "formula": render(p.formula)} for p in report.properties
        ],
        "days": [d.isoformat() for d in report.days],
        "rows": [row_to_dict(r) for r in report.rows],
        "summary": {"checks": len(report.rows), "satisfied": len(report.rows) - violated, "violated": violated},
    }


def to_json(report: VerdictReport) -> str:
    return json.dumps(to_dict(report), indent=2, sort_keys=False) + "\n"


def schema() -> dict:
    text = resources.files("adlcheck").joinpath("data/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def render_report(report: VerdictReport, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    return to_text(report)
