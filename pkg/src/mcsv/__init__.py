"""Exact toolkit for the maximum-cardinality balanced subset-of-vectors problem."""

from .core import (
    Instance,
    InstanceError,
    Solution,
    SolveOutcome,
    Threshold,
    format_instance,
    is_feasible,
    parse_instance,
    spread_identity_check,
    subset_sum,
    threshold,
)
from .dp import (
    Budget,
    DpBudgetExceeded,
    DpError,
    DpStats,
    dp_feasible_set,
    dp_run,
    dp_scan,
    dp_solve,
    format_stats_report,
)
from .oracle import brute_solve

__all__ = [
    "Budget",
    "DpBudgetExceeded",
    "DpError",
    "DpStats",
    "Instance",
    "InstanceError",
    "Solution",
    "SolveOutcome",
    "Threshold",
    "brute_solve",
    "dp_feasible_set",
    "dp_run",
    "dp_scan",
    "dp_solve",
    "format_instance",
    "format_stats_report",
    "is_feasible",
    "parse_instance",
    "spread_identity_check",
    "subset_sum",
    "threshold",
]
