"""Failure-lattice exploration and N-gram fault localization."""

from ._core import (
    ExploreService,
    LatlocError,
    TraceContext,
    classify_dependency,
    failure_lattice,
    failure_rule_stats,
    generate_corpus,
    load_trace_context,
    localize,
    mine_failure_rules,
    parse_trace_context,
    run_program,
    run_scripted,
)

__all__ = [
    "ExploreService",
    "LatlocError",
    "TraceContext",
    "classify_dependency",
    "failure_lattice",
    "failure_rule_stats",
    "generate_corpus",
    "load_trace_context",
    "localize",
    "mine_failure_rules",
    "parse_trace_context",
    "run_program",
    "run_scripted",
]

__version__ = "0.1.0"
