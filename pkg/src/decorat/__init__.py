"""Decorated equational logic for state and exceptions, with an IMP front end."""

from .equations import SS, SW, WS, WW, EqKind, Equation
from .errors import DecoratError
from .imp import parse_cmd, parse_program, run
from .oracle import adequacy, combined_model, denote, exception_model, semantic_eq, state_model
from .rules import instantiate, rule_catalog
from .script import check_script, lemma_library, parse_script
from .terms import infer_decoration, show, typecheck
from .translate import d_cmd

__version__ = "0.1.0"

__all__ = [
    "SS", "SW", "WS", "WW", "EqKind", "Equation", "DecoratError",
    "parse_cmd", "parse_program", "run",
    "adequacy", "combined_model", "denote", "exception_model", "semantic_eq", "state_model",
    "instantiate", "rule_catalog", "check_script", "lemma_library", "parse_script",
    "infer_decoration", "show", "typecheck", "d_cmd",
]
