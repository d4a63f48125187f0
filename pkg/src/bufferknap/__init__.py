"""Online knapsack with a resizable buffer: exact algorithms, adversaries and a fuzzing harness."""

from .algorithms import lower_bound, make_algorithm, select_algorithm, theoretical_bound
from .core import Instance, Item, Mode, Removability, offline_optimum, validate_trace
from .harness import run_simulation

__version__ = "0.1.0"

__all__ = [
    "Instance",
    "Item",
    "Mode",
    "Removability",
    "lower_bound",
    "make_algorithm",
    "offline_optimum",
    "run_simulation",
    "select_algorithm",
    "theoretical_bound",
    "validate_trace",
]
