"""Scripting front end: lexer, parser, formatter, and interpreter."""

from .parsing import (
    AdaptApply,
    AdaptReport,
    AttrPred,
    Bins,
    Clear,
    DegreePred,
    Describe,
    Export,
    Filter,
    Group,
    Load,
    Pivot,
    Scope,
    Script,
    Select,
    Snip,
    Span,
    Statement,
    Undo,
    format_script,
    format_statement,
    parse,
    tokenize,
)
from .run import Interpreter, guess_format, run_script

__all__ = [
    "AdaptApply", "AdaptReport", "AttrPred", "Bins", "Clear", "DegreePred",
    "Describe", "Export", "Filter", "Group", "Interpreter", "Load", "Pivot",
    "Scope", "Script", "Select", "Snip", "Span", "Statement", "Undo",
    "format_script", "format_statement", "guess_format", "parse",
    "run_script", "tokenize",
]
