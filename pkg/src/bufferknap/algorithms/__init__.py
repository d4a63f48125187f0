"""The online algorithms, their parameters and the regime selector."""

from .base import OnlineAlgorithm, RegimeViolation, Unsupported, VariantMismatch
from .greedy import DensityGreedy, NonRemovableGreedy, density_greedy, nonremovable_greedy
from .grouping import (
    GroupedThreshold,
    GroupingParams,
    InvalidM,
    RTooSmall,
    alg2_minimum_capacity,
    build_feasible_witness,
    grouped_threshold,
    solve_epsilon,
    witness_claim_failures,
)
from .params import RegimeParams, SizeClass
from .proportional import (
    HalfCapacityAlgorithm,
    SmallBufferAlgorithm,
    SplitBufferAlgorithm,
    ThresholdAlgorithm,
    TwoBinAlgorithm,
    prop_case2,
    prop_case3,
    prop_mid_r,
    prop_small_r,
)
from .regimes import (
    ALGORITHMS,
    Selection,
    algorithm_bound,
    algorithm_guarantee,
    clamped_capacity,
    lower_bound,
    make_algorithm,
    select_algorithm,
    theoretical_bound,
)

__all__ = [
    "ALGORITHMS",
    "DensityGreedy",
    "GroupedThreshold",
    "GroupingParams",
    "HalfCapacityAlgorithm",
    "InvalidM",
    "NonRemovableGreedy",
    "OnlineAlgorithm",
    "RTooSmall",
    "RegimeParams",
    "RegimeViolation",
    "Selection",
    "SizeClass",
    "SmallBufferAlgorithm",
    "SplitBufferAlgorithm",
    "ThresholdAlgorithm",
    "TwoBinAlgorithm",
    "Unsupported",
    "VariantMismatch",
    "alg2_minimum_capacity",
    "algorithm_bound",
    "algorithm_guarantee",
    "build_feasible_witness",
    "clamped_capacity",
    "density_greedy",
    "grouped_threshold",
    "lower_bound",
    "make_algorithm",
    "nonremovable_greedy",
    "prop_case2",
    "prop_case3",
    "prop_mid_r",
    "prop_small_r",
    "select_algorithm",
    "solve_epsilon",
    "theoretical_bound",
    "witness_claim_failures",
]
