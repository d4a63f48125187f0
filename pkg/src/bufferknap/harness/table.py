"""Lower and upper ratio bounds over a grid of buffer sizes, as CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from ..algorithms import Unsupported, lower_bound, select_algorithm, theoretical_bound
from ..core import Mode, Removability
from ..numeric import Number, format_decimal, format_number, parse_rational, simplify

CSV_HEADER = ("R", "lower", "upper", "algorithm")
GRID_LIMITS = (Fraction(1), Fraction(1000))


def parse_variant(text: str) -> tuple[Mode, Removability]:
    """Read ``prop-removable``, ``general-nonremovable``, ``gen-rem`` and the like."""
    head, sep, tail = str(text).strip().lower().partition("-")
    if not sep:
        raise ValueError(f"variant {text!r} should look like 'prop-removable'")
    try:
        return Mode.parse(head), Removability.parse(tail)
    except ValueError:
        raise ValueError(f"unknown variant {text!r}") from None


def variant_name(mode: Mode, removability: Removability) -> str:
    prefix = "prop" if mode is Mode.PROPORTIONAL else "gen"
    return f"{prefix}-{removability.value}"


@dataclass(frozen=True)
class TableRow:
    R: Number
    lower: mpmath.mpf
    upper: mpmath.mpf
    algorithm: str

    def as_strings(self) -> tuple[str, str, str, str]:
        return (format_number(self.R), format_decimal(self.lower), format_decimal(self.upper), self.algorithm)


def linear_grid(r_min, r_max, steps: int) -> list[Fraction]:
    """``steps`` evenly spaced exact points from r_min to r_max inclusive."""
    low, high = parse_rational(r_min), parse_rational(r_max)
    if steps < 1:
        raise ValueError("steps must be positive")
    if high < low:
        raise ValueError("r_max must not be below r_min")
    if steps == 1:
        return [low]
    gap = (high - low) / (steps - 1)
    return [low + k * gap for k in range(steps)]


def ratio_table(variant, R_grid: Iterable[Number]) -> list[TableRow]:
    """Best known lower bound and the selected algorithm's upper bound at each R."""
    mode, removability = parse_variant(variant) if isinstance(variant, str) else variant
    rows = []
    for raw in R_grid:
        R = simplify(raw) if not isinstance(raw, (str, int)) else parse_rational(raw)
        if not GRID_LIMITS[0] <= R <= GRID_LIMITS[1]:
            raise ValueError(f"grid point {format_number(R)} outside [1, 1000]")
        try:
            algorithm = select_algorithm(mode, removability, R).algorithm_id
        except Unsupported:
            algorithm = "none"
        rows.append(TableRow(R, lower_bound(mode, removability, R), theoretical_bound(mode, removability, R), algorithm))
    return rows


def table_csv(rows: Sequence[TableRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(row.as_strings() for row in rows)
    return buffer.getvalue()
