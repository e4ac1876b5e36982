from .ast import (
    And,
    Atom,
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
    WithinInterval,
    expand_macros,
    expand_within_interval,
)
from .evaluate import Counterexample, Verdict, evaluate, explain_violation, truth_tables
from .parser import parse_property, render
from .properties import PropertySpec, load_properties, parse_properties, render_properties

__all__ = [
    "And",
    "Atom",
    "Const",
    "Counterexample",
    "Eventually",
    "Formula",
    "Globally",
    "Implies",
    "Next",
    "Not",
    "Once",
    "Or",
    "Prev",
    "PropertySpec",
    "Release",
    "Until",
    "Verdict",
    "WithinInterval",
    "evaluate",
    "expand_macros",
    "expand_within_interval",
    "explain_violation",
    "load_properties",
    "parse_properties",
    "parse_property",
    "render",
    "render_properties",
    "truth_tables",
]
