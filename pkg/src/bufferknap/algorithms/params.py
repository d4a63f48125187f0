"""Size-class thresholds of the proportional algorithms and their valid ranges.

Each threshold is an exact number: a Fraction when it happens to be
rational, otherwise a :class:`~bufferknap.numeric.Surd`. For the
algorithms built on r with r + r^2 = R the threshold is the positive root
(sqrt(1+4R) - 1)/2; for the two-bin algorithm it is the root of
(8r - 1)^2 = 16R + 1 above 1/8, i.e. (sqrt(16R+1) + 1)/8.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..numeric import Number, Surd, as_surd, simplify
from .base import RegimeViolation

SQRT2 = Surd(0, 1, 2)
SQRT3 = Surd(0, 1, 3)

SMALL_BUFFER_MAX = Fraction(10, 9)
SPLIT_BUFFER_MAX = (1 + SQRT2) / 2
SQRT2_PLATEAU_END = 2 - SQRT2 / 2
TWO_BIN_MAX = 17 - 9 * SQRT3
COMPANION_PLATEAU_END = 2 * SQRT3 - 2
HALF_CAPACITY_MAX = Fraction(3, 2)
HALF_CAPACITY_EXTENDED_MIN = SQRT2


def golden_threshold(buffer_capacity: Number) -> Number:
    """Positive root r of r + r^2 = R."""
    return simplify(((1 + 4 * as_surd(buffer_capacity)).sqrt() - 1) / 2)


def two_bin_threshold(buffer_capacity: Number) -> Number:
    """The r with (8r - 1)^2 = 16R + 1 and r > 1/8."""
    return simplify(((16 * as_surd(buffer_capacity) + 1).sqrt() + 1) / 8)


@dataclass(frozen=True)
class SizeClass:
    label: str
    upper: Number
    inclusive: bool


@dataclass(frozen=True)
class RegimeParams:
    """Thresholds one proportional algorithm works with at a given R."""

    algorithm_id: str
    buffer_capacity: Number
    threshold: Number
    witness_low: Number
    class_boundaries: tuple[SizeClass, ...]

    def classify(self, size: Fraction) -> str:
        for boundary in self.class_boundaries:
            if size < boundary.upper or (boundary.inclusive and size == boundary.upper):
                return boundary.label
        return "large"

    @property
    def boundary_values(self) -> list[Number]:
        return [boundary.upper for boundary in self.class_boundaries]


def _check_range(name: str, buffer_capacity: Number, low: Number, high: Number) -> None:
    if not low <= buffer_capacity <= high:
        raise RegimeViolation(f"{name} needs {low} <= R <= {high}; got R = {buffer_capacity}")


def small_buffer_params(buffer_capacity: Number) -> RegimeParams:
    _check_range("alg5", buffer_capacity, 1, SMALL_BUFFER_MAX)
    r = golden_threshold(buffer_capacity)
    square = simplify(as_surd(r) * r)
    return RegimeParams(
        "alg5",
        buffer_capacity,
        r,
        r,
        (SizeClass("small", square, True), SizeClass("medium", r, False)),
    )


def split_buffer_params(buffer_capacity: Number) -> RegimeParams:
    _check_range("alg6", buffer_capacity, SMALL_BUFFER_MAX, SPLIT_BUFFER_MAX)
    r = golden_threshold(buffer_capacity)
    rs = as_surd(r)
    return RegimeParams(
        "alg6",
        buffer_capacity,
        r,
        r,
        (
            SizeClass("small", simplify(1 - rs), True),
            SizeClass("M1", simplify(rs / 2), True),
            SizeClass("M2", simplify(rs * rs), False),
            SizeClass("M3", r, False),
        ),
    )


def two_bin_params(buffer_capacity: Number) -> RegimeParams:
    _check_range("alg7", buffer_capacity, SQRT2_PLATEAU_END, TWO_BIN_MAX)
    r = two_bin_threshold(buffer_capacity)
    rs = as_surd(r)
    return RegimeParams(
        "alg7",
        buffer_capacity,
        r,
        r,
        (
            SizeClass("small", simplify(1 - rs), True),
            SizeClass("M1", simplify(2 * rs - 1), False),
            SizeClass("M2", Fraction(1, 2), False),
            SizeClass("M3", simplify(rs * rs), False),
            SizeClass("M4", r, False),
        ),
    )


def half_capacity_params(buffer_capacity: Number, proven_only: bool = True) -> RegimeParams:
    """Half-capacity partition; ``proven_only=False`` admits any R in [sqrt 2, 3/2].

    Below 2*sqrt(3)-2 the 2/R analysis no longer applies, but the classes
    stay strictly ordered down to sqrt 2, so the rules remain well defined.
    """
    low = COMPANION_PLATEAU_END if proven_only else HALF_CAPACITY_EXTENDED_MIN
    _check_range("alg8", buffer_capacity, low, HALF_CAPACITY_MAX)
    capacity = Fraction(simplify(buffer_capacity))
    return RegimeParams(
        "alg8",
        capacity,
        capacity / 2,
        capacity / 2,
        (
            SizeClass("small", 1 - capacity / 2, True),
            SizeClass("M1", capacity / 4, False),
            SizeClass("M2", Fraction(1, 2), False),
            SizeClass("M3", capacity * capacity / 4, False),
            SizeClass("M4", capacity / 2, False),
        ),
    )
