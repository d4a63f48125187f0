"""Which algorithm to run for a variant and buffer size, and what it guarantees.

Upper bounds are the proven competitive ratios of the selected algorithm
at its effective R; lower bounds are the best adversary results known for
the variant. Both are returned as mpmath numbers at the working precision
(``mpmath.inf`` for unbounded cases).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from ..core import Mode, Removability
from ..numeric import Number, ceil_exact, parse_rational, simplify, to_mpf, working_digits
from .base import OnlineAlgorithm, RegimeViolation, Unsupported
from .greedy import DensityGreedy, NonRemovableGreedy
from .grouping import GroupedThreshold, GroupingParams, alg2_minimum_capacity
from .params import (
    COMPANION_PLATEAU_END,
    HALF_CAPACITY_MAX,
    SMALL_BUFFER_MAX,
    SPLIT_BUFFER_MAX,
    SQRT2_PLATEAU_END,
    TWO_BIN_MAX,
)
from .proportional import (
    HalfCapacityAlgorithm,
    SmallBufferAlgorithm,
    SplitBufferAlgorithm,
    TwoBinAlgorithm,
)

ALGORITHMS: dict[str, type[OnlineAlgorithm]] = {
    cls.algorithm_id: cls
    for cls in (
        NonRemovableGreedy,
        GroupedThreshold,
        DensityGreedy,
        SmallBufferAlgorithm,
        SplitBufferAlgorithm,
        TwoBinAlgorithm,
        HalfCapacityAlgorithm,
    )
}


def _exact(value: Number) -> Number:
    if isinstance(value, (int, Fraction, str)):
        return parse_rational(value)
    return simplify(value)


def clamped_capacity(algorithm_id: str, buffer_capacity: Number) -> Number:
    """The R an algorithm should be configured with inside a buffer of size R.

    Past the top of its own range a proportional algorithm is run as if
    the buffer ended there; the plateaus of the bound curve are exactly
    these clamped stretches.
    """
    R = _exact(buffer_capacity)
    if algorithm_id == "alg6" and SPLIT_BUFFER_MAX < R:
        return SPLIT_BUFFER_MAX
    if algorithm_id == "alg7" and TWO_BIN_MAX < R:
        return TWO_BIN_MAX
    if algorithm_id == "alg8" and HALF_CAPACITY_MAX < R:
        return HALF_CAPACITY_MAX
    return R


def make_algorithm(
    algorithm_id: str, buffer_capacity: Number, clamp: bool = True, proven_only: bool = True
) -> OnlineAlgorithm:
    """Instantiate an algorithm by id for a buffer of the given (rational) size.

    ``proven_only=False`` lets alg8 run below its proven range (down to
    sqrt 2); every other algorithm ignores it.
    """
    try:
        cls = ALGORITHMS[algorithm_id.lower()]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm_id!r}; choose from {sorted(ALGORITHMS)}") from None
    R = parse_rational(buffer_capacity)
    effective = clamped_capacity(cls.algorithm_id, R) if clamp else R
    effective = None if effective == R else effective
    if cls is HalfCapacityAlgorithm:
        return cls(R, effective, proven_only=proven_only)
    return cls(R, effective)


@dataclass(frozen=True)
class Selection:
    algorithm_id: str
    effective_capacity: Number
    guaranteed: bool


def _with_precision(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with mpmath.workdps(working_digits()):
            return fn(*args, **kwargs)

    return wrapper


def _golden_bound(R):
    return (1 + mpmath.sqrt(4 * R + 1)) / (2 * R)


def _two_bin_bound(R):
    return (mpmath.sqrt(16 * R + 1) - 1) / (2 * R)


def _greedy_bound(R):
    if R <= 1:
        return mpmath.inf
    return max(1 / (R - 1), mpmath.mpf(2))


@_with_precision
def algorithm_bound(algorithm_id: str, effective_capacity: Number, mode: Mode = Mode.PROPORTIONAL) -> mpmath.mpf:
    """Proven competitive ratio of an algorithm configured for ``effective_capacity``."""
    R = to_mpf(_exact(effective_capacity))
    if algorithm_id == "alg1":
        return _greedy_bound(R) if Mode.parse(mode) is Mode.PROPORTIONAL else mpmath.inf
    if algorithm_id == "alg4":
        return _greedy_bound(R)
    if algorithm_id in ("alg5", "alg6"):
        return _golden_bound(R)
    if algorithm_id == "alg7":
        return _two_bin_bound(R)
    if algorithm_id == "alg8":
        return 2 / R
    if algorithm_id == "alg2":
        return GroupingParams.for_capacity(_exact(effective_capacity)).bound()
    raise ValueError(f"unknown algorithm {algorithm_id!r}")


def algorithm_guarantee(algorithm_id: str, effective_capacity: Number, mode: Mode = Mode.PROPORTIONAL) -> bool:
    """Whether the algorithm's bound at this effective R is a proven theorem."""
    R = _exact(effective_capacity)
    if algorithm_id == "alg1":
        return Mode.parse(mode) is Mode.PROPORTIONAL and R > 1
    if algorithm_id == "alg4":
        return 1 < R < 2
    if algorithm_id == "alg2":
        with mpmath.workdps(working_digits()):
            return GroupingParams.for_capacity(R).epsilon < to_mpf(Fraction(1, 12))
    if algorithm_id == "alg8":
        return COMPANION_PLATEAU_END <= R <= HALF_CAPACITY_MAX
    # the other threshold algorithms refuse to be built outside their proven range
    return algorithm_id in ("alg5", "alg6", "alg7")


def select_algorithm(mode, removability, buffer_capacity: Number) -> Selection:
    """Pick the algorithm with the best proven ratio for the variant at R."""
    mode = Mode.parse(mode)
    removability = Removability.parse(removability)
    R = _exact(buffer_capacity)
    if R < 1:
        raise ValueError("the buffer must be at least as large as the knapsack")

    if removability is Removability.NONREMOVABLE:
        if mode is Mode.GENERAL:
            raise Unsupported("no online algorithm has a bounded ratio for general items without removal")
        if R == 1:
            raise Unsupported("without removal and without extra buffer the ratio is unbounded")
        return Selection("alg1", R, True)

    if mode is Mode.GENERAL:
        if R == 1:
            raise Unsupported("general items with removal need R > 1 for a bounded ratio")
        if R < 2:
            return Selection("alg4", R, True)
        if R >= alg2_minimum_capacity():
            return Selection("alg2", R, True)
        return Selection("alg4", R, False)

    if R <= SMALL_BUFFER_MAX:
        return Selection("alg5", R, True)
    if R <= SPLIT_BUFFER_MAX:
        return Selection("alg6", R, True)
    if R < SQRT2_PLATEAU_END:
        return Selection("alg6", SPLIT_BUFFER_MAX, True)
    if R <= TWO_BIN_MAX:
        return Selection("alg7", R, True)
    if R < COMPANION_PLATEAU_END:
        return Selection("alg7", TWO_BIN_MAX, True)
    if R <= HALF_CAPACITY_MAX:
        return Selection("alg8", R, True)
    # beyond 3/2 nothing specific is proven; use whichever known bound is smaller
    if R >= alg2_minimum_capacity():
        with mpmath.workdps(working_digits()):
            if GroupingParams.for_capacity(R).bound() < mpmath.mpf(4) / 3:
                return Selection("alg2", R, True)
    return Selection("alg8", HALF_CAPACITY_MAX, True)


@_with_precision
def theoretical_bound(mode, removability, buffer_capacity: Number) -> mpmath.mpf:
    """Upper bound on the competitive ratio achieved by the selected algorithm."""
    mode = Mode.parse(mode)
    try:
        selection = select_algorithm(mode, removability, buffer_capacity)
    except Unsupported:
        return mpmath.inf
    return algorithm_bound(selection.algorithm_id, selection.effective_capacity, mode)


@_with_precision
def lower_bound(mode, removability, buffer_capacity: Number) -> mpmath.mpf:
    """Best known lower bound on any deterministic algorithm's ratio."""
    mode = Mode.parse(mode)
    removability = Removability.parse(removability)
    exact_R = _exact(buffer_capacity)
    R = to_mpf(exact_R)

    if removability is Removability.NONREMOVABLE:
        if mode is Mode.GENERAL or exact_R == 1:
            return mpmath.inf
        return 1 / (R - 1) if exact_R <= Fraction(3, 2) else mpmath.mpf(2)

    if mode is Mode.GENERAL:
        if exact_R == 1:
            return mpmath.inf
        if exact_R <= Fraction(3, 2):
            return 1 / (R - 1)
        if exact_R < 2:
            return mpmath.mpf(2)
        return 1 + 1 / (R + 1)

    if exact_R <= SPLIT_BUFFER_MAX:
        return _golden_bound(R)
    if exact_R <= SQRT2_PLATEAU_END:
        return mpmath.sqrt(2)
    if exact_R <= TWO_BIN_MAX:
        return _two_bin_bound(R)
    if exact_R <= COMPANION_PLATEAU_END:
        return (1 + mpmath.sqrt(3)) / 2
    if exact_R <= HALF_CAPACITY_MAX:
        return 2 / R
    candidates = [1 + mpmath.mpf(1) / (ceil_exact(2 * exact_R) + 1)]
    if exact_R < 2:
        candidates += [2 / R, _golden_bound(R)]
    return max(candidates)


__all__ = [
    "ALGORITHMS",
    "RegimeViolation",
    "Selection",
    "algorithm_bound",
    "algorithm_guarantee",
    "clamped_capacity",
    "lower_bound",
    "make_algorithm",
    "select_algorithm",
    "theoretical_bound",
]
