"""Single runs, fuzzing, bound tables and their reports."""

from .fuzz import FuzzConfig, FuzzResult, InstanceSampler, fuzz_upper_bound, size_boundaries, trial_rng
from .simulation import ACCEPTANCE_MARGIN, RunReport, run_simulation, within
from .table import CSV_HEADER, TableRow, linear_grid, parse_variant, ratio_table, table_csv, variant_name

__all__ = [
    "ACCEPTANCE_MARGIN",
    "CSV_HEADER",
    "FuzzConfig",
    "FuzzResult",
    "InstanceSampler",
    "RunReport",
    "TableRow",
    "fuzz_upper_bound",
    "linear_grid",
    "parse_variant",
    "ratio_table",
    "run_simulation",
    "size_boundaries",
    "table_csv",
    "trial_rng",
    "variant_name",
    "within",
]
