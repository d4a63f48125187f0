"""Value-grouped threshold algorithm for general items and a large buffer.

Items of size at most eps are *small* and kept greedily by density up to
a load of about 2. Every other item with positive value falls in the
geometric value group j with (1+eps)^j <= v < (1+eps)^(j+1); each round
keeps, for the 2m+1 groups ending at the group of the most valuable item
seen, a size-ascending greedy selection of load at most 1 per group.

eps is transcendental, so group indices and the size-vs-eps test are
computed in mpmath at the working precision. A computed log within
``GUARD_BAND`` of an integer is snapped to that integer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import mpmath

from ..core import BufferTrace, Instance, Item, total_size, total_value
from ..numeric import Number, floor_exact, to_mpf, working_digits
from .base import OnlineAlgorithm

GUARD_BAND = mpmath.mpf("1e-30")
ALG2_EPSILON_LIMIT = Fraction(1, 12)


class InvalidM(ValueError):
    """The group count m must be a positive integer."""


class RTooSmall(ValueError):
    """The buffer is too small for at least one value group (needs R >= 5)."""


@lru_cache(maxsize=None)
def _solve_epsilon(m: int, digits: int) -> mpmath.mpf:
    with mpmath.workdps(digits):
        target = mpmath.mpf(m)
        # log(1/eps)/log(1+eps) falls strictly from +inf to 0 on (0, 1]
        low, high = mpmath.mpf(0), mpmath.mpf(1)
        tolerance = mpmath.mpf(10) ** (-digits + 5)
        while high - low > tolerance * high:
            middle = (low + high) / 2
            if mpmath.log(1 / middle) / mpmath.log1p(middle) > target:
                low = middle
            else:
                high = middle
        return (low + high) / 2


def solve_epsilon(m: int, digits: int | None = None) -> mpmath.mpf:
    """The eps in (0, 1] with (1+eps)^m = 1/eps, by bisection."""
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise InvalidM(f"m must be a positive integer, got {m!r}")
    return _solve_epsilon(m, digits or working_digits())


def group_count(buffer_capacity: Number) -> int:
    """m = floor((R - 3) / 2)."""
    return floor_exact((buffer_capacity - 3) / Fraction(2))


@lru_cache(maxsize=None)
def _first_guaranteed_m() -> int:
    m = 1
    while solve_epsilon(m) >= to_mpf(ALG2_EPSILON_LIMIT):
        m += 1
    return m


def alg2_minimum_capacity() -> int:
    """Smallest R at which eps < 1/12, the premise of the 1 + 6 eps bound."""
    return 2 * _first_guaranteed_m() + 3


@dataclass(frozen=True)
class GroupingParams:
    m: int
    epsilon: mpmath.mpf
    digits: int
    _log_base: mpmath.mpf = field(repr=False, compare=False)

    @classmethod
    def for_capacity(cls, buffer_capacity: Number) -> "GroupingParams":
        m = group_count(buffer_capacity)
        if m < 1:
            raise RTooSmall(f"grouped threshold needs R >= 5 (m >= 1); got R = {buffer_capacity}")
        return cls.for_m(m)

    @classmethod
    def for_m(cls, m: int) -> "GroupingParams":
        digits = working_digits()
        epsilon = solve_epsilon(m, digits)
        with mpmath.workdps(digits):
            return cls(m, epsilon, digits, mpmath.log1p(epsilon))

    def group_index(self, value: Fraction) -> int:
        """The j with (1+eps)^j <= value < (1+eps)^(j+1)."""
        if value <= 0:
            raise ValueError("value groups are defined for positive values only")
        with mpmath.workdps(self.digits):
            position = mpmath.log(to_mpf(value)) / self._log_base
            nearest = mpmath.nint(position)
            if abs(position - nearest) < GUARD_BAND:
                return int(nearest)
            return int(mpmath.floor(position))

    def is_small(self, size: Fraction) -> bool:
        with mpmath.workdps(self.digits):
            return to_mpf(size) <= self.epsilon

    def bound(self) -> mpmath.mpf:
        with mpmath.workdps(self.digits):
            return 1 + 6 * self.epsilon


class GroupedThreshold(OnlineAlgorithm):
    """Greedy by density on small items, size-ascending greedy per value group.

    After each round ``window`` holds the active group range (nu, mu), or
    None when no item with positive value has arrived. Beyond the
    per-group load limit, an item is also refused if it would push the
    buffer past R: the 2m+1 active groups plus the small-item overshoot
    can reach 2m + 3 + eps, slightly more than R = 2m + 3.
    """

    algorithm_id = "alg2"

    def __init__(self, buffer_capacity: Number, effective_capacity: Number | None = None):
        target = buffer_capacity if effective_capacity is None else effective_capacity
        self.grouping = GroupingParams.for_capacity(target)
        super().__init__(buffer_capacity, effective_capacity)

    def reset(self):
        super().reset()
        self.window: tuple[int, int] | None = None
        self._small: dict[int, bool] = {}
        self._group: dict[int, int | None] = {}

    def classify(self, item: Item) -> tuple[bool, int | None]:
        index = item.arrival_index
        if index not in self._small:
            small = self.grouping.is_small(item.size)
            self._small[index] = small
            self._group[index] = None if small or item.value == 0 else self.grouping.group_index(item.value)
        return self._small[index], self._group[index]

    def step(self, item: Item) -> frozenset:
        pool = self.buffer_items() + [item]
        smalls, groups = [], {}
        for candidate in pool:
            small, group = self.classify(candidate)
            if small:
                smalls.append(candidate)
            elif group is not None:
                groups.setdefault(group, []).append(candidate)

        chosen: list[Item] = []
        load = Fraction(0)
        for candidate in sorted(smalls, key=lambda e: (-e.density, e.size, e.arrival_index)):
            chosen.append(candidate)
            load += candidate.size
            if load > 2:
                break

        best = max(pool, key=lambda e: (e.value, -e.arrival_index))
        if best.value > 0:
            top = self.grouping.group_index(best.value)
            self.window = (top - 2 * self.grouping.m, top)
            for group in sorted(j for j in groups if self.window[0] <= j <= top):
                group_load = Fraction(0)
                for candidate in sorted(groups[group], key=lambda e: (e.size, e.arrival_index)):
                    if group_load + candidate.size <= 1 and load + candidate.size <= self.effective_capacity:
                        chosen.append(candidate)
                        group_load += candidate.size
                        load += candidate.size
        else:
            self.window = None
        return self._set_buffer(chosen)


def grouped_threshold(instance: Instance) -> BufferTrace:
    return GroupedThreshold(instance.buffer_capacity).run(instance)


def build_feasible_witness(
    final_buffer: Iterable[Item],
    opt_subset: Iterable[Item],
    grouping: GroupingParams,
    window: tuple[int, int] | None,
) -> frozenset:
    """The comparison solution B* drawn from the final buffer.

    Start from the final buffer's overlap with the optimum; per active
    group, match the optimum's count with the smallest buffered items of
    that group; then top up with small items by density while they fit.
    """
    buffer = sorted(final_buffer, key=lambda e: e.arrival_index)
    optimum = {e.arrival_index for e in opt_subset}
    opt_items = list(opt_subset)
    witness = {e.arrival_index: e for e in buffer if e.arrival_index in optimum}

    def group_of(e: Item):
        if grouping.is_small(e.size) or e.value == 0:
            return None
        return grouping.group_index(e.value)

    if window is not None:
        for group in range(window[0], window[1] + 1):
            wanted = sum(1 for e in opt_items if e.arrival_index not in witness and group_of(e) == group)
            if not wanted:
                continue
            candidates = sorted(
                (e for e in buffer if e.arrival_index not in witness and group_of(e) == group),
                key=lambda e: (e.size, e.arrival_index),
            )
            for e in candidates[:wanted]:
                witness[e.arrival_index] = e

    load = total_size(witness.values())
    spare_smalls = sorted(
        (e for e in buffer if e.arrival_index not in witness and grouping.is_small(e.size)),
        key=lambda e: (-e.density, e.size, e.arrival_index),
    )
    for e in spare_smalls:
        if load + e.size > 1:
            break
        witness[e.arrival_index] = e
        load += e.size
    return frozenset(witness.values())


def witness_claim_failures(
    witness: Iterable[Item],
    opt_subset: Iterable[Item],
    alg_value: Fraction,
    grouping: GroupingParams,
    tolerance: str = "1e-25",
) -> list[str]:
    """Check the guarantees a witness must meet; return what failed."""
    witness = list(witness)
    optimum = list(opt_subset)
    failures = []
    if total_size(witness) > 1:
        failures.append(f"witness size {total_size(witness)} exceeds 1")
    if total_value(witness) > alg_value:
        failures.append(f"witness value {total_value(witness)} exceeds ALG {alg_value}")

    def split(items):
        small = [e for e in items if grouping.is_small(e.size)]
        return small, [e for e in items if not grouping.is_small(e.size)]

    opt_small, opt_medium = split(optimum)
    wit_small, wit_medium = split(witness)
    if total_size(opt_medium) < total_size(wit_medium):
        failures.append("witness uses more non-small size than the optimum")
    with mpmath.workdps(grouping.digits):
        eps = grouping.epsilon
        slack = mpmath.mpf(tolerance) * max(1, to_mpf(total_value(optimum)))
        opt_total = to_mpf(total_value(optimum))
        if to_mpf(total_value(opt_medium)) > (1 + eps) * to_mpf(total_value(wit_medium)) + eps * opt_total + slack:
            failures.append("non-small value of the optimum is not covered")
        if to_mpf(total_value(opt_small)) > to_mpf(total_value(wit_small)) + eps * (1 + 2 * eps) * opt_total + slack:
            failures.append("small value of the optimum is not covered")
    return failures
