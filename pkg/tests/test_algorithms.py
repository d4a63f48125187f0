from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bufferknap.algorithms import (
    RegimeViolation,
    Unsupported,
    VariantMismatch,
    algorithm_bound,
    algorithm_guarantee,
    density_greedy,
    lower_bound,
    make_algorithm,
    nonremovable_greedy,
    prop_case2,
    prop_case3,
    prop_mid_r,
    prop_small_r,
    select_algorithm,
    theoretical_bound,
)
from bufferknap.algorithms.params import (
    COMPANION_PLATEAU_END,
    SPLIT_BUFFER_MAX,
    SQRT2_PLATEAU_END,
    TWO_BIN_MAX,
)
from bufferknap.core import Instance, best_packable_subset, total_size, validate_trace

from conftest import proportional_sizes

F = Fraction


def alg_value(instance, trace):
    return best_packable_subset(instance.items_at(trace.final), 1).total_value


def close(x, y, tol="1e-30"):
    with mpmath.workdps(60):
        return abs(mpmath.mpf(x) - mpmath.mpf(y)) <= mpmath.mpf(tol)


# --- Alg1 ----------------------------------------------------------------------
def test_nonremovable_greedy_rejects_overflow():
    instance = Instance.proportional(["26/100", "1"], "5/4", "nonremovable")
    trace = nonremovable_greedy(instance)
    assert trace.rounds == [frozenset(), {1}, {1}]
    assert alg_value(instance, trace) == F(26, 100)


def test_nonremovable_greedy_simple_cases():
    single = Instance.proportional(["1/2"], "3/2", "nonremovable")
    assert alg_value(single, nonremovable_greedy(single)) == F(1, 2)
    three = Instance.proportional(["3/5", "4/5", "2/5"], "3/2", "nonremovable")
    trace = nonremovable_greedy(three)
    assert trace.final == {1, 2}
    assert alg_value(three, trace) == F(4, 5)


# --- Alg4 ----------------------------------------------------------------------
def test_density_greedy_examples():
    both = Instance.general([(1, 1), ("1/2", 2)], "3/2")
    trace = density_greedy(both)
    assert trace.final == {1, 2} and alg_value(both, trace) == 2
    swap = Instance.general([(1, 1), (1, 3)], "6/5")
    trace = density_greedy(swap)
    assert trace.final == {2} and alg_value(swap, trace) == 3
    single = Instance.general([("2/5", "2/5")], 2)
    assert alg_value(single, density_greedy(single)) == F(2, 5)


def test_density_greedy_refuses_nonremovable():
    with pytest.raises(VariantMismatch):
        density_greedy(Instance.general([(1, 1)], 2, "nonremovable"))


# --- Alg5 ----------------------------------------------------------------------
def test_small_buffer_examples():
    pair = Instance.proportional(["1/2", "1/2"], 1)
    assert alg_value(pair, prop_small_r(pair)) == 1
    large = Instance.proportional(["7/10"], 1)
    assert alg_value(large, prop_small_r(large)) == F(7, 10)


def test_small_buffer_keeps_incumbent_medium_on_tie():
    # two equal mediums that do not fit together at R=1
    instance = Instance.proportional(["5/10", "5/10"], 1)
    assert prop_small_r(instance).final == {1, 2}  # they make exactly 1, a witness
    instance = Instance.proportional(["55/100", "55/100"], 1)
    assert prop_small_r(instance).final == {1}


def test_small_buffer_swaps_to_strictly_smaller_medium():
    instance = Instance.proportional(["6/10", "55/100"], 1)
    assert prop_small_r(instance).final == {2}


def test_regime_violation_outside_range():
    with pytest.raises(RegimeViolation):
        make_algorithm("alg5", F(6, 5))
    with pytest.raises(RegimeViolation):
        make_algorithm("alg8", F(29, 20))
    with pytest.raises(ValueError):
        make_algorithm("alg3", 2)


def test_threshold_algorithms_need_proportional_items():
    with pytest.raises(VariantMismatch):
        prop_small_r(Instance.general([("1/2", 3)], 1))


# --- Alg6 ----------------------------------------------------------------------
def test_split_buffer_single_m3_item():
    algorithm = make_algorithm("alg6", F(115, 100))
    instance = Instance.proportional(["47/100"], "115/100")
    assert algorithm.label(instance.items[0]) == "M3"
    algorithm.run(instance)
    assert algorithm.primary == {1} and algorithm.secondary == frozenset()


def test_split_buffer_leftover_m1_goes_to_secondary():
    algorithm = make_algorithm("alg6", F(115, 100))
    instance = Instance.proportional(["34/100", "67/100"], "115/100")
    assert [algorithm.label(e) for e in instance.items] == ["M1", "M3"]
    trace = algorithm.run(instance)
    assert trace.final == {1, 2}
    assert algorithm.primary == {2} and algorithm.secondary == {1}


@settings(max_examples=200, deadline=None)
@given(proportional_sizes(max_n=10), st.sampled_from([F(10, 9), F(115, 100), F(6, 5), F(12071, 10000)]))
def test_split_buffer_partition_invariant(sizes, R):
    instance = Instance.proportional(sizes, R)
    algorithm = make_algorithm("alg6", R)
    r = algorithm.params.threshold
    square = r * r
    algorithm.reset()
    for item in instance.items:
        buffer = algorithm.step(item)
        assert algorithm.primary | algorithm.secondary == buffer
        assert not algorithm.primary & algorithm.secondary
        first = total_size(instance.items_at(algorithm.primary))
        second = total_size(instance.items_at(algorithm.secondary))
        assert (first < r and second <= square) or (r <= first <= 1 and second == 0)


# --- Alg7 / Alg8 -------------------------------------------------------------------
def test_two_bin_examples():
    witness = Instance.proportional(["72/100", "281/1000"], "135/100")
    trace = prop_case2(witness)
    assert alg_value(witness, trace) >= make_algorithm("alg7", F(135, 100)).params.threshold
    single = Instance.proportional(["6/10"], "135/100")
    algorithm = make_algorithm("alg7", F(135, 100))
    assert algorithm.label(single.items[0]) == "M4"
    assert alg_value(single, prop_case2(single)) == F(6, 10)


def test_half_capacity_examples():
    large = Instance.proportional(["3/4", "1/4"], "3/2")
    assert alg_value(large, prop_case3(large)) >= F(3, 4)
    pair = Instance.proportional(["4/10", "45/100"], "3/2")
    algorithm = make_algorithm("alg8", F(3, 2))
    assert [algorithm.label(e) for e in pair.items] == ["M2", "M2"]
    assert alg_value(pair, prop_case3(pair)) == F(85, 100)
    single = Instance.proportional(["55/100"], "3/2")
    assert alg_value(single, prop_case3(single)) == F(55, 100)


def test_mid_regime_wrapper_runs():
    instance = Instance.proportional(["1/3", "1/3"], "115/100")
    assert validate_trace(instance, prop_mid_r(instance)).ok


# --- shared properties ---------------------------------------------------------------
PROPORTIONAL_CASES = [
    ("alg5", F(1)),
    ("alg5", F(21, 20)),
    ("alg6", F(6, 5)),
    ("alg6", F(5, 4)),  # clamped
    ("alg7", F(13, 10)),
    ("alg7", F(27, 20)),
    ("alg8", F(147, 100)),
    ("alg8", F(3, 2)),
    ("alg8", F(2)),  # clamped
]


@pytest.mark.parametrize("algorithm_id,R", PROPORTIONAL_CASES)
@settings(max_examples=60, deadline=None)
@given(sizes=proportional_sizes(max_n=10))
def test_proportional_traces_are_legal_and_deterministic(algorithm_id, R, sizes):
    instance = Instance.proportional(sizes, R)
    algorithm = make_algorithm(algorithm_id, R)
    trace = algorithm.run(instance)
    assert validate_trace(instance, trace).ok
    assert make_algorithm(algorithm_id, R).run(instance) == trace
    assert all(total_size(instance.items_at(b)) <= algorithm.effective_capacity for b in trace.rounds)


@pytest.mark.parametrize("algorithm_id,R", PROPORTIONAL_CASES)
@settings(max_examples=60, deadline=None)
@given(sizes=proportional_sizes(max_n=10))
def test_witness_persists_once_found(algorithm_id, R, sizes):
    instance = Instance.proportional(sizes, R)
    algorithm = make_algorithm(algorithm_id, R)
    low = algorithm.params.witness_low
    algorithm.reset()
    locked_at = None
    for item in instance.items:
        buffer = algorithm.step(item)
        if algorithm.locked and locked_at is None:
            locked_at = buffer
        if locked_at is not None:
            assert buffer == locked_at
            assert best_packable_subset(instance.items_at(buffer), 1).total_value >= low


@pytest.mark.parametrize("R", [F(9, 8), F(3, 2), F(7, 4), F(3)])
@settings(max_examples=60, deadline=None)
@given(pairs=st.lists(st.tuples(st.integers(1, 100), st.integers(0, 100)), max_size=10))
def test_density_greedy_traces_are_legal(R, pairs):
    instance = Instance.general([(F(s, 100), F(v, 10)) for s, v in pairs], R)
    trace = density_greedy(instance)
    assert validate_trace(instance, trace).ok


# --- regime selection and bounds -----------------------------------------------------
def test_select_algorithm_examples():
    selection = select_algorithm("prop", "removable", 1)
    assert (selection.algorithm_id, selection.effective_capacity) == ("alg5", 1)
    selection = select_algorithm("prop", "removable", F(5, 4))
    assert (selection.algorithm_id, selection.effective_capacity) == ("alg6", SPLIT_BUFFER_MAX)
    with pytest.raises(Unsupported):
        select_algorithm("general", "nonremovable", 2)


@pytest.mark.parametrize(
    "R,expected",
    [
        (F(21, 20), "alg5"),
        (F(6, 5), "alg6"),
        (SQRT2_PLATEAU_END, "alg7"),
        (F(135, 100), "alg7"),
        (F(29, 20), "alg7"),
        (COMPANION_PLATEAU_END, "alg8"),
        (F(3, 2), "alg8"),
        (F(200), "alg2"),
    ],
)
def test_proportional_removable_regimes(R, expected):
    assert select_algorithm("prop", "rem", R).algorithm_id == expected


def test_general_removable_regimes():
    assert select_algorithm("gen", "rem", F(3, 2)).algorithm_id == "alg4"
    fallback = select_algorithm("gen", "rem", 10)
    assert fallback.algorithm_id == "alg4" and not fallback.guaranteed
    assert select_algorithm("gen", "rem", 67).algorithm_id == "alg2"
    with pytest.raises(Unsupported):
        select_algorithm("gen", "rem", 1)


def test_theoretical_bound_examples():
    with mpmath.workdps(60):
        golden = (1 + mpmath.sqrt(5)) / 2
        four_thirds = mpmath.mpf(4) / 3
    assert close(theoretical_bound("prop", "rem", 1), golden)
    assert close(theoretical_bound("prop", "rem", F(3, 2)), four_thirds)
    assert close(theoretical_bound("prop", "nonrem", F(5, 4)), 4)
    assert theoretical_bound("gen", "nonrem", 2) == mpmath.inf


def test_bounds_meet_on_tight_regimes():
    for R in (1, F(21, 20), SPLIT_BUFFER_MAX, F(125, 100), TWO_BIN_MAX, F(3, 2)):
        assert close(lower_bound("prop", "rem", R), theoretical_bound("prop", "rem", R))
    for R in (F(5, 4), F(3, 2), F(7, 4), 3):
        assert close(lower_bound("prop", "nonrem", R), theoretical_bound("prop", "nonrem", R))
    assert close(lower_bound("gen", "rem", F(3, 2)), 2) and close(theoretical_bound("gen", "rem", F(3, 2)), 2)


@given(st.integers(1000, 100000))
@settings(max_examples=200, deadline=None)
def test_upper_bound_never_below_lower_bound(k):
    R = F(k, 1000)
    for mode, removability in (("prop", "rem"), ("prop", "nonrem"), ("gen", "rem")):
        lower, upper = lower_bound(mode, removability, R), theoretical_bound(mode, removability, R)
        with mpmath.workdps(60):
            assert lower <= upper + mpmath.mpf("1e-30")


def test_golden_segment_decreases():
    values = [algorithm_bound("alg5", F(1) + F(k, 100)) for k in range(0, 21)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_bound_curve_is_continuous_at_breakpoints():
    for R in (F(10, 9), SPLIT_BUFFER_MAX, SQRT2_PLATEAU_END, TWO_BIN_MAX, COMPANION_PLATEAU_END):
        offset = F(1, 10**12)
        left = theoretical_bound("prop", "rem", R - offset)
        right = theoretical_bound("prop", "rem", R + offset)
        assert close(left, right, "1e-9")


def test_half_capacity_extension_below_proven_range():
    algorithm = make_algorithm("alg8", F(29, 20), proven_only=False)
    assert algorithm.params.threshold == F(29, 40)
    assert not algorithm_guarantee("alg8", F(29, 20)) and algorithm_guarantee("alg8", F(3, 2))
    with pytest.raises(RegimeViolation):
        make_algorithm("alg8", F(141, 100), proven_only=False)
