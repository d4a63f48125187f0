import math
from fractions import Fraction

import mpmath
import pytest

from bufferknap.algorithms import make_algorithm
from bufferknap.algorithms.params import COMPANION_PLATEAU_END, SPLIT_BUFFER_MAX, TWO_BIN_MAX
from bufferknap.core import Instance, Mode, Removability
from bufferknap.harness import (
    CSV_HEADER,
    FuzzConfig,
    fuzz_upper_bound,
    linear_grid,
    parse_variant,
    ratio_table,
    run_simulation,
    size_boundaries,
    table_csv,
    trial_rng,
    within,
)

F = Fraction
REPORT_FIELDS = {
    "instance_digest",
    "algorithm_id",
    "effective_R",
    "alg_value",
    "opt_value",
    "ratio",
    "theoretical_bound",
    "within_bound",
    "guaranteed_regime",
}


def test_run_simulation_examples():
    report = run_simulation(
        make_algorithm("alg1", F(3, 2)), Instance.proportional(["3/5", "4/5", "2/5"], "3/2", "nonremovable")
    )
    assert (report.alg_value, report.opt_value, report.ratio) == (F(4, 5), 1, F(5, 4))
    assert report.within_bound and report.guaranteed_regime
    report = run_simulation(make_algorithm("alg4", F(3, 2)), Instance.general([(1, 1), ("1/2", 2)], "3/2"))
    assert report.ratio == 1
    report = run_simulation(make_algorithm("alg5", 1), Instance.proportional([], 1))
    assert (report.alg_value, report.opt_value, report.ratio) == (0, 0, 1)


def test_report_fields_and_encoding():
    report = run_simulation(make_algorithm("alg5", 1), Instance.proportional(["1/2", "3/4"], 1))
    payload = report.to_dict()
    assert set(payload) == REPORT_FIELDS
    assert payload["alg_value"] == "3/4" and payload["opt_value"] == "3/4"
    assert payload["ratio"] == "1.000000000000000000000000000000000000000"
    assert payload["theoretical_bound"].startswith("1.6180339887498948482045868343656381177")
    assert isinstance(payload["within_bound"], bool)


def test_unguaranteed_regime_is_flagged():
    report = run_simulation(make_algorithm("alg4", 10), Instance.general([("1/2", 1)], 10))
    assert not report.guaranteed_regime


def test_within_margin():
    with mpmath.workdps(60):
        bound = mpmath.mpf(2)
    assert within(F(2) + F(5, 10**10), bound)
    assert not within(F(2) + F(2, 10**9), bound)
    assert not within(math.inf, bound)
    assert within(math.inf, mpmath.inf)


def test_fuzz_config_validation():
    with pytest.raises(ValueError):
        FuzzConfig(trials=1, n_max=17, seed=1, capacities=(1,))
    with pytest.raises(ValueError):
        FuzzConfig(trials=1, n_max=5, seed=1, capacities=(1,), denominator_bound=10**5)
    with pytest.raises(ValueError):
        FuzzConfig(trials=1, n_max=5, seed=-1, capacities=(1,))


def test_trial_streams_are_fixed():
    assert trial_rng(7, F(1), 0).random() == trial_rng(7, F(1), 0).random()
    assert trial_rng(7, F(1), 0).random() != trial_rng(7, F(1), 1).random()


def test_knife_edges_bracket_thresholds():
    algorithm = make_algorithm("alg5", 1)
    edges = size_boundaries(algorithm)
    r = algorithm.params.threshold
    assert r.rational_below(10**4) in edges
    assert (1 - r).rational_below(10**4) in edges


def _config(**overrides):
    base = dict(trials=120, n_max=8, seed=99, capacities=("1", "21/20"), mode="prop", removability="rem")
    base.update(overrides)
    return FuzzConfig(**base)


def test_fuzz_is_reproducible_and_order_independent():
    serial = fuzz_upper_bound(_config(), "alg5", block_size=50)
    again = fuzz_upper_bound(_config(), "alg5", block_size=17)
    parallel = fuzz_upper_bound(_config(), "alg5", workers=2, block_size=50)
    assert serial.runs == 240 and serial.ok
    assert serial.to_dict() == again.to_dict() == parallel.to_dict()


def test_fuzz_uniform_only():
    result = fuzz_upper_bound(_config(knife_edge=False), "alg5")
    assert result.ok and result.worst is not None


def test_fuzz_checks_variant():
    with pytest.raises(ValueError):
        fuzz_upper_bound(_config(removability="nonrem"), "alg5")


def test_parse_variant():
    assert parse_variant("prop-removable") == (Mode.PROPORTIONAL, Removability.REMOVABLE)
    assert parse_variant("general-nonremovable") == (Mode.GENERAL, Removability.NONREMOVABLE)
    assert parse_variant("gen-rem") == (Mode.GENERAL, Removability.REMOVABLE)
    with pytest.raises(ValueError):
        parse_variant("proportional")


def test_table_examples():
    sqrt2_row, companion_row = ratio_table("prop-removable", [SPLIT_BUFFER_MAX, TWO_BIN_MAX])
    with mpmath.workdps(60):
        assert abs(sqrt2_row.lower - mpmath.sqrt(2)) < 1e-35 and abs(sqrt2_row.upper - mpmath.sqrt(2)) < 1e-35
        target = (1 + mpmath.sqrt(3)) / 2
        for R in (TWO_BIN_MAX, F(1455, 1000), COMPANION_PLATEAU_END):
            (row,) = ratio_table("prop-removable", [R])
            assert abs(row.lower - target) < 1e-35 and abs(row.upper - target) < 1e-35
    (general,) = ratio_table("gen-removable", [F(3, 2)])
    assert general.lower == 2 and general.upper == 2 and general.algorithm == "alg4"


def test_table_grid_and_csv():
    rows = ratio_table("prop-removable", linear_grid(1, "3/2", 50))
    text = table_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 51
    assert lines[1].startswith("1,1.618033988749894848")
    assert all(row.upper >= row.lower for row in rows)
    golden = [row.upper for row in rows if row.algorithm == "alg5"]
    assert all(a > b for a, b in zip(golden, golden[1:]))


def test_table_marks_missing_algorithms():
    (row,) = ratio_table("gen-nonremovable", [2])
    assert row.algorithm == "none" and row.upper == mpmath.inf


def test_table_rejects_out_of_range_grid():
    with pytest.raises(ValueError):
        ratio_table("prop-removable", [F(1, 2)])
    with pytest.raises(ValueError):
        ratio_table("prop-removable", [1001])
    with pytest.raises(ValueError):
        linear_grid(2, 1, 5)
