"""Exact item model, offline oracles and trace legality."""

from .model import (
    InvalidInstance,
    Instance,
    Item,
    Mode,
    Removability,
    competitive_ratio,
    total_size,
    total_value,
)
from .search import (
    DEFAULT_SEARCH_CAP,
    PackingResult,
    SearchCapExceeded,
    best_packable_subset,
    exact_optimum,
    find_subset_in_range,
    offline_optimum,
)
from .trace import BufferTrace, TraceInvalid, TraceReport, validate_trace

__all__ = [
    "BufferTrace",
    "DEFAULT_SEARCH_CAP",
    "Instance",
    "InvalidInstance",
    "Item",
    "Mode",
    "PackingResult",
    "Removability",
    "SearchCapExceeded",
    "TraceInvalid",
    "TraceReport",
    "best_packable_subset",
    "competitive_ratio",
    "exact_optimum",
    "find_subset_in_range",
    "offline_optimum",
    "total_size",
    "total_value",
    "validate_trace",
]
