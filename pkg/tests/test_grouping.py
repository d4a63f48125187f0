from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bufferknap.algorithms import (
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
from bufferknap.core import Instance, best_packable_subset, offline_optimum, total_size, validate_trace
from bufferknap.numeric import to_mpf

F = Fraction


def test_epsilon_for_one_group_is_golden():
    with mpmath.workdps(50):
        assert abs(solve_epsilon(1) - (mpmath.sqrt(5) - 1) / 2) < mpmath.mpf("1e-40")


def test_epsilon_for_two_groups_matches_cubic_root():
    # (1+e)^2 = 1/e  <=>  e^3 + 2e^2 + e - 1 = 0, solved independently by polyroots
    with mpmath.workdps(50):
        roots = [z.real for z in mpmath.polyroots([1, 2, 1, -1], maxsteps=200, extraprec=100) if abs(z.imag) < 1e-40]
        (root,) = [x for x in roots if 0 < x < 1]
        assert abs(solve_epsilon(2) - root) < mpmath.mpf("1e-40")
        assert mpmath.nstr(root, 20) == "0.46557123187676802666"


@pytest.mark.parametrize("m", [1, 2, 3, 10, 32, 100, 200])
def test_epsilon_equation_and_bracketing_inequalities(m):
    with mpmath.workdps(70):
        eps = solve_epsilon(m)
        assert abs((1 + eps) ** m - 1 / eps) * eps <= mpmath.mpf("1e-30")
        assert eps * m * mpmath.log(2) <= mpmath.log(1 / eps) <= eps * m


def test_epsilon_solver_rejects_zero_groups():
    with pytest.raises(InvalidM):
        solve_epsilon(0)


def test_epsilon_decreases_in_m():
    with mpmath.workdps(60):
        values = [solve_epsilon(m) for m in range(1, 40)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_guaranteed_threshold():
    assert alg2_minimum_capacity() == 67
    with mpmath.workdps(60):
        assert solve_epsilon(32) < mpmath.mpf(1) / 12 <= solve_epsilon(31)


def test_grouping_parameters():
    grouping = GroupingParams.for_capacity(F(9))
    assert grouping.m == 3
    assert GroupingParams.for_capacity(F(10)).m == 3
    with pytest.raises(RTooSmall):
        GroupingParams.for_capacity(F(4))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**6), st.integers(1, 10**3))
def test_group_index_brackets_value(p, q):
    grouping = GroupingParams.for_capacity(F(25))
    value = F(p, q)
    j = grouping.group_index(value)
    with mpmath.workdps(60):
        base = 1 + grouping.epsilon
        v = mpmath.mpf(p) / q
        margin = mpmath.mpf("1e-28") * v
        assert base**j <= v + margin and v < base ** (j + 1) + margin


def test_group_index_is_exact_on_powers():
    grouping = GroupingParams.for_m(1)
    # with m=1, (1+eps) = 1/eps is irrational, but 1 is always the start of group 0
    assert grouping.group_index(F(1)) == 0


def test_grouped_threshold_keeps_single_item():
    instance = Instance.general([("1/2", 7)], 9)
    trace = grouped_threshold(instance)
    assert trace.final == {1}


def test_grouped_threshold_small_items_overshoot_two_by_one_item():
    grouping = GroupingParams.for_capacity(F(9))
    with mpmath.workdps(60):
        half_eps = F(int(mpmath.floor(grouping.epsilon * 5000)), 10000)
        count = int(mpmath.ceil(5 / grouping.epsilon))
    instance = Instance.general([(half_eps, half_eps)] * count, 9)
    trace = grouped_threshold(instance)
    held = total_size(instance.items_at(trace.final))
    assert 2 < held <= 2 + half_eps
    alg = best_packable_subset(instance.items_at(trace.final), 1).total_value
    assert alg == offline_optimum(instance.items, 1).total_value


def test_grouped_threshold_one_unit_item_per_group():
    grouping = GroupingParams.for_capacity(F(9))
    first, second = F(100), F(1005, 10)
    assert grouping.group_index(first) == grouping.group_index(second)
    instance = Instance.general([(1, first), (1, second)], 9)
    trace = grouped_threshold(instance)
    assert trace.final == {1}


@st.composite
def general_instances(draw, R, max_n=10):
    pairs = draw(
        st.lists(
            st.tuples(
                st.one_of(st.integers(1, 1000).map(lambda k: F(k, 1000)), st.integers(1, 100).map(lambda k: F(k, 2000))),
                st.integers(0, 10**4).map(lambda k: F(k, 100)),
            ),
            max_size=max_n,
        )
    )
    return Instance.general(pairs, R)


@pytest.mark.parametrize("R", [F(9), F(25)])
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_grouped_threshold_invariants(R, data):
    instance = data.draw(general_instances(R))
    algorithm = GroupedThreshold(R)
    grouping = algorithm.grouping
    algorithm.reset()
    for item in instance.items:
        buffer = instance.items_at(algorithm.step(item))
        small = [e for e in buffer if grouping.is_small(e.size)]
        with mpmath.workdps(60):
            assert to_mpf(total_size(small)) <= 2 + grouping.epsilon
        groups = {}
        for e in buffer:
            if not grouping.is_small(e.size):
                groups.setdefault(grouping.group_index(e.value), []).append(e)
        assert all(total_size(members) <= 1 for members in groups.values())
        assert total_size(buffer) <= R
    assert validate_trace(instance, algorithm.run(instance)).ok


def test_witness_is_optimum_when_buffer_is_optimum():
    instance = Instance.general([("1/2", 3), ("1/2", 5)], 9)
    algorithm = GroupedThreshold(F(9))
    trace = algorithm.run(instance)
    optimum = offline_optimum(instance.items, 1)
    assert trace.final == optimum.subset
    witness = build_feasible_witness(
        instance.items_at(trace.final), instance.items_at(optimum.subset), algorithm.grouping, algorithm.window
    )
    assert {e.arrival_index for e in witness} == optimum.subset


def test_witness_picks_smallest_items_of_a_group():
    grouping = GroupingParams.for_capacity(F(9))
    value = F(100)
    buffer = Instance.general([("9/10", value), ("6/10", value), ("7/10", value), ("8/10", value)], 9).items
    # the optimum holds one of the group's items that the final buffer lacks
    outside = Instance.general([("1/2", value)] * 5, 9).items[4:]
    witness = build_feasible_witness(buffer, outside, grouping, (grouping.group_index(value) - 1, grouping.group_index(value)))
    assert {e.arrival_index for e in witness} == {2}


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_witness_claims_hold_at_small_capacity(data):
    instance = data.draw(general_instances(F(9)))
    algorithm = GroupedThreshold(F(9))
    trace = algorithm.run(instance)
    final = instance.items_at(trace.final)
    alg = best_packable_subset(final, 1).total_value
    optimum = instance.items_at(offline_optimum(instance.items, 1).subset)
    witness = build_feasible_witness(final, optimum, algorithm.grouping, algorithm.window)
    assert witness_claim_failures(witness, optimum, alg, algorithm.grouping) == []
