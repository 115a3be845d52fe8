"""Exception types shared across the engine, loaders, DSL, and service.

Every error carries a short machine-readable ``code`` so the HTTP layer can
emit structured 4xx bodies without string-matching messages.
"""

from __future__ import annotations


class PivotLadderError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


# -- graph store ------------------------------------------------------------

class GraphError(PivotLadderError):
    code = "graph_error"


class GraphLoadError(GraphError):
    """Malformed graph document. ``line``/``column`` locate the defect when known."""

    code = "parse_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column


class DuplicateIdError(GraphError):
    code = "duplicate_id"


class DanglingEdgeError(GraphError):
    code = "dangling_endpoint"


class UnknownClassError(GraphError):
    """Named class does not exist; message lists the known ones."""

    code = "unknown_class"

    def __init__(self, name: str, known: list[str], domain: str = "node"):
        known = sorted(known)
        super().__init__(f"unknown {domain} class {name!r}; known: {', '.join(known) or '(none)'}")
        self.name = name
        self.known = known


class ClassCollisionError(GraphError):
    code = "class_collision"


class ExtractionError(GraphError):
    code = "bad_extraction"


# -- adaptation ---------------------------------------------------------------

class AdaptationError(PivotLadderError):
    """Rewrite proposal cannot be built or applied."""

    code = "bad_adaptation"


# -- pivot engine -----------------------------------------------------------

class EngineError(PivotLadderError):
    code = "engine_error"


class SessionStateError(EngineError):
    """Operation issued in a state that does not admit it."""

    code = "bad_operation"


class FilterKindError(EngineError):
    """Predicate operator incompatible with the literal's value kind."""

    code = "kind_mismatch"


class UnknownFilterError(EngineError):
    code = "unknown_filter"


class UnknownLabelError(EngineError):
    code = "unknown_label"


class EmptyLogError(EngineError):
    code = "empty_log"


# -- DSL --------------------------------------------------------------------

class DslError(PivotLadderError):
    code = "dsl_error"


class DslParseError(DslError):
    """Syntax or lexical error with the offending source position (1-based)."""

    code = "parse_error"

    def __init__(self, message: str, line: int, column: int, expected: list[str] | None = None):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
        self.expected = expected or []


class DslRuntimeError(DslError):
    """Engine error surfaced while executing a statement; carries its span."""

    code = "runtime_error"

    def __init__(self, message: str, line: int, column: int, cause: PivotLadderError | None = None):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
        self.cause = cause
        if cause is not None:
            self.code = cause.code
