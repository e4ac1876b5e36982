"""Command-line entry point: ``adlcheck <subcommand> ...``.

Exit codes: 0 success / all satisfied, 1 at least one violation, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from datetime import date, timedelta, timezone
from pathlib import Path

from . import __version__
from .checker import STRIDE, WIDTH, WindowPlan, check_day, exit_code, plan_windows, run_suite
from .durations import format_duration, parse_duration, parse_utc_offset
from .errors import AdlCheckError
from .events import clean, local_dates, parse_events, utc_offset, write_events
from .layout import SensorKind, load_config
from .model import CONTACT_FLAGS, MOTION_FLAGS, build_path, initial_state, subtrace
from .nusmv_export import export_model, export_property, nusmv_binary, run_nusmv, write_window
from .pltl import evaluate, load_properties
from .report import render_report, row_to_dict
from .simulator import load_scripts, simulate


class UsageError(AdlCheckError):
    pass


def _read_trace(path: str, registry=None):
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_events(fh, registry)


def _load_props(path: str, config):
    return load_properties(path, known_atoms=_known_atoms(config))


def _known_atoms(config):
    names = set()
    for s in config.registry:
        flags = CONTACT_FLAGS if s.kind is SensorKind.CONTACT else MOTION_FLAGS
        names.update(f"{s.model_name}.{f}" for f in flags)
    names.update(f"{g}.change" for g in config.groups)
    return names


def _offset_tz(text: str | None):
    return None if text is None else timezone(parse_utc_offset(text))


def _day_range(first: date | None, last: date | None, trace) -> list[date] | None:
    if first is None and last is None:
        return None
    seen = local_dates(trace)
    first = first or (seen[0] if seen else last)
    last = last or (seen[-1] if seen else first)
    if last < first:
        raise UsageError("--to precedes --from")
    return [first + timedelta(days=k) for k in range((last - first).days + 1)]


def _find_property(props, name: str):
    for p in props:
        if p.name == name:
            return p
    raise UsageError(f"no property named {name!r}; known: {', '.join(p.name for p in props)}")


def _write_or_print(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    config = load_config(args.config)
    layout = config.layout
    print(
        f"ok: {len(config.registry)} sensors, {len(layout.rooms)} rooms, "
        f"{len(layout.edges)} directed edges, {len(config.groups)} groups"
    )
    return 0


def cmd_clean(args) -> int:
    registry = load_config(args.config).registry if args.config else None
    raw = _read_trace(args.events, registry)
    cleaned = clean(raw)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        write_events(cleaned, fh)
    print(f"{len(raw)} raw events -> {len(cleaned)} cleaned events", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    config = load_config(args.config)
    trace = _read_trace(args.events, config.registry)
    props = _load_props(args.properties, config)
    days = _day_range(args.date_from, args.date_to, trace)
    report = run_suite(
        trace, props, config, days=days, width=args.window, stride=args.stride, tz=_offset_tz(args.utc_offset)
    )
    _write_or_print(render_report(report, args.format), args.output)
    if args.figures:
        from .plotting import plot_report

        for path in plot_report(report, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    return exit_code(report)


def _day_setup(args):
    config = load_config(args.config)
    trace = clean(_read_trace(args.events, config.registry))
    prop = _find_property(_load_props(args.properties, config), args.property)
    tz = _offset_tz(args.utc_offset) or utc_offset(trace)
    plan = WindowPlan(args.date, prop.start, prop.end, args.window, args.stride, tz)
    return config, trace, prop, plan


def cmd_explain(args) -> int:
    config, trace, prop, plan = _day_setup(args)
    row = check_day(trace, config.registry, config.layout, prop.formula, plan, prop.name, config.groups)
    if args.format == "json":
        print(json.dumps(row_to_dict(row), indent=2))
        return 0 if row.seq else 1
    if row.seq:
        a, b = row.time_span
        print(f"{prop.name} on {row.date}: satisfied in {row.seq} window(s), {a:%H:%M}-{b:%H:%M}")
        return 0
    print(f"{prop.name} on {row.date}: violated in every window ({len(row.windows)})")
    for cx in row.counterexamples:
        print()
        print(f"window {cx.start:%H:%M}-{cx.end:%H:%M} [{cx.reason}]")
        print(cx.counterexample.to_text())
    return 1


def cmd_export_nusmv(args) -> int:
    config, trace, prop, plan = _day_setup(args)
    windows = plan_windows(plan)
    if not 0 <= args.window_index < len(windows):
        raise UsageError(f"--window-index must be in 0..{len(windows) - 1}")
    a, b = windows[args.window_index]
    path = build_path(
        subtrace(trace, a, b), initial_state(trace, a, config.registry), config.groups, config.registry, window=(a, b)
    )
    model = export_model(path, config.registry, config.groups)
    spec = export_property(prop.formula)
    stem = f"{prop.name}_{args.date.isoformat()}_w{args.window_index:02d}"
    target = write_window(args.output, stem, model, spec)
    internal = evaluate(path, prop.formula).holds
    print(f"wrote {target} (window {a:%H:%M}-{b:%H:%M}, internal verdict {str(internal).lower()})")
    if args.run:
        binary = nusmv_binary()
        if binary is None:
            print("no NuSMV binary found; skipped the external check", file=sys.stderr)
        else:
            external = run_nusmv(model, spec, binary)
            print(f"NuSMV verdict {str(external).lower()}")
            if external != internal:
                return 1
    return 0


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    scripts = load_scripts(args.scripts)
    if args.start:
        scripts = replace(scripts, start_date=args.start)
    trace = simulate(config.layout, config.registry, scripts, args.days, args.seed)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        write_events(trace, fh)
    print(f"wrote {len(trace)} raw events over {args.days} day(s) to {args.output}", file=sys.stderr)
    return 0


def _duration(text: str) -> timedelta:
    try:
        return parse_duration(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None


def _window_options(p):
    p.add_argument("--window", type=_duration, default=WIDTH, help=f"window width (default {format_duration(WIDTH)})")
    p.add_argument("--stride", type=_duration, default=STRIDE, help=f"window stride (default {format_duration(STRIDE)})")
    p.add_argument("--utc-offset", help="local offset for the time-of-day ranges, e.g. +01:00 (default: the trace's)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adlcheck", description="Check daily-living routines against smart-home sensor logs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a home configuration")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("clean", help="drop duplicate contact reports and motion clears")
    p.add_argument("events")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--config", help="also check sensor ids and states against this configuration")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("check", help="verify every property on every day")
    p.add_argument("events")
    p.add_argument("config")
    p.add_argument("properties")
    p.add_argument("--from", dest="date_from", type=_date, help="first local date (default: first day in the log)")
    p.add_argument("--to", dest="date_to", type=_date, help="last local date (default: last day in the log)")
    _window_options(p)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--figures", metavar="DIR", help="also draw one window grid PNG per property")
    p.set_defaults(func=cmd_check)

    for name, func, helptext in (
        ("explain", cmd_explain, "print the counterexamples for one property on one day"),
        ("export-nusmv", cmd_export_nusmv, "write one window as a NuSMV model with its LTLSPEC"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("events")
        p.add_argument("config")
        p.add_argument("property")
        p.add_argument("-p", "--properties", required=True, help="property file defining the named property")
        p.add_argument("--date", type=_date, required=True)
        _window_options(p)
        if name == "explain":
            p.add_argument("--format", choices=("text", "json"), default="text")
        else:
            p.add_argument("--window-index", type=int, required=True)
            p.add_argument("-o", "--output", required=True, help="output directory")
            p.add_argument("--run", action="store_true", help="also run NuSMV when available and compare")
        p.set_defaults(func=func)

    p = sub.add_parser("simulate", help="generate a synthetic raw event log")
    p.add_argument("config")
    p.add_argument("scripts")
    p.add_argument("--days", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", type=_date, help="override the script's start_date")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AdlCheckError, OSError, ValueError) as exc:
        print(f"adlcheck: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
