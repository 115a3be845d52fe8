"""Set-at-a-time graph exploration by categorical pivots.

The core loop: select a set of nodes of one class, pivot it to a
neighboring class, trim with filters or histogram bins, and keep going.
Sessions replay their whole operation log on every structural change, so
snipping a filter out of the middle or flipping the global scope rewrites
history consistently instead of patching the current set.
"""

from .adaptive import (
    AdaptationProposal,
    UsageLog,
    apply_proposal,
    detect_patterns,
    equivalence_report,
    materialize_connection,
    promote_attribute,
)
from .ambiguity import AmbiguityReport, HeuristicDecision, classify, decide, explain, suggest
from .engine import (
    FANIN,
    FANOUT,
    INTERSECT,
    MODES,
    SCOPE_DEFAULT,
    SMART,
    PivotSession,
    PivotStep,
    begin_session,
    replay_log,
)
from .errors import (
    AdaptationError,
    ClassCollisionError,
    DslParseError,
    DslRuntimeError,
    EngineError,
    FilterKindError,
    GraphError,
    GraphLoadError,
    PivotLadderError,
    SessionStateError,
    UnknownClassError,
    UnknownFilterError,
    UnknownLabelError,
)
from .filters import (
    FilterSpec,
    HistogramBin,
    HistogramView,
    build_histogram,
    make_attribute_filter,
    make_bins_filter,
    make_degree_filter,
)
from .formats import dump_graph, export_subgraph, load_graph
from .graph import (
    Edge,
    Extraction,
    Node,
    PropertyGraph,
    SchemaSummary,
    reify_attributed_edges,
    schema_summary,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptationError", "AdaptationProposal", "AmbiguityReport",
    "ClassCollisionError", "DslParseError", "DslRuntimeError", "Edge",
    "EngineError", "Extraction", "FANIN", "FANOUT", "FilterKindError",
    "FilterSpec", "GraphError", "GraphLoadError", "HeuristicDecision",
    "HistogramBin", "HistogramView", "INTERSECT", "MODES", "Node",
    "PivotLadderError", "PivotSession", "PivotStep", "PropertyGraph",
    "SCOPE_DEFAULT", "SMART", "SchemaSummary", "SessionStateError",
    "UnknownClassError", "UnknownFilterError", "UnknownLabelError",
    "UsageLog", "apply_proposal", "begin_session", "build_histogram",
    "classify", "decide", "detect_patterns", "dump_graph",
    "equivalence_report", "explain", "export_subgraph", "load_graph",
    "make_attribute_filter", "make_bins_filter", "make_degree_filter",
    "materialize_connection", "promote_attribute", "reify_attributed_edges",
    "replay_log", "schema_summary", "suggest",
]
