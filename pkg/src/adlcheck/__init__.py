"""Verify activities of daily living against smart-home sensor logs with past-time LTL."""

__version__ = "0.1.0"

from .checker import DayReport, Status, VerdictReport, WindowPlan, check_day, plan_windows, run_suite
from .events import EventTrace, SensorEvent, Value, clean, parse_events
from .layout import HomeConfig, HomeLayout, SensorRegistry, load_config, parse_config
from .model import PathModel, build_path, initial_state, subtrace
from .pltl import evaluate, explain_violation, load_properties, parse_property
from .simulator import load_scripts, simulate

__all__ = [
    "DayReport",
    "EventTrace",
    "HomeConfig",
    "HomeLayout",
    "PathModel",
    "SensorEvent",
    "SensorRegistry",
    "Status",
    "Value",
    "VerdictReport",
    "WindowPlan",
    "build_path",
    "check_day",
    "clean",
    "evaluate",
    "explain_violation",
    "initial_state",
    "load_config",
    "load_properties",
    "load_scripts",
    "parse_config",
    "parse_events",
    "parse_property",
    "plan_windows",
    "run_suite",
    "simulate",
    "subtrace",
]
