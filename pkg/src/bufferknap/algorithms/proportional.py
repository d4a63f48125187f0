"""Online algorithms for proportional items with removal, buffer R in [1, 3/2].

All four share one outer rule: as soon as some subset of the buffer plus
the arrival has total size in [r, 1] (or [R/2, 1] for the half-capacity
algorithm), keep exactly that subset for the rest of the sequence. They
differ in how they arrange the buffer while no such subset exists.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from ..core import BufferTrace, Instance, Item, find_subset_in_range, total_size
from ..numeric import Number, simplify
from .base import OnlineAlgorithm
from .params import (
    RegimeParams,
    half_capacity_params,
    small_buffer_params,
    split_buffer_params,
    two_bin_params,
)


def _by_size(items: list[Item]) -> list[Item]:
    return sorted(items, key=lambda item: (item.size, item.arrival_index))


class ThresholdAlgorithm(OnlineAlgorithm):
    proportional_only = True
    make_params: Callable[[Number], RegimeParams]

    def __init__(self, buffer_capacity: Number, effective_capacity: Number | None = None):
        target = buffer_capacity if effective_capacity is None else effective_capacity
        self.params = type(self).make_params(simplify(target))
        super().__init__(buffer_capacity, effective_capacity)

    def reset(self):
        super().reset()
        self._labels: dict[int, str] = {}
        self.locked = False

    def label(self, item: Item) -> str:
        cached = self._labels.get(item.arrival_index)
        if cached is None:
            cached = self.params.classify(item.size)
            self._labels[item.arrival_index] = cached
        return cached

    def _witness(self, arrival: Item) -> frozenset | None:
        """Subset of buffer + arrival with size in [witness_low, 1], if any.

        Invariant: the buffer on its own holds no such subset (it would
        have been locked in earlier), so every candidate contains the
        arrival.
        """
        low = self.params.witness_low
        if arrival.size >= low:
            return frozenset((arrival,))
        held = list(self._held.values())
        if total_size(held) + arrival.size < low:
            return None
        rest = find_subset_in_range(held, low - arrival.size, 1 - arrival.size)
        if rest is None:
            return None
        return rest | {arrival}

    def step(self, item: Item) -> frozenset:
        if self.locked:
            return self._members
        witness = self._witness(item)
        if witness is not None:
            self.locked = True
            self._on_lock(witness)
            return self._set_buffer(witness)
        return self._set_buffer(self._arrange(item))

    def _on_lock(self, witness: frozenset) -> None:
        pass

    def _arrange(self, arrival: Item) -> list[Item]:
        raise NotImplementedError


class SmallBufferAlgorithm(ThresholdAlgorithm):
    """For 1 <= R <= 10/9: hold one medium item and pack small ones by size."""

    algorithm_id = "alg5"
    make_params = staticmethod(small_buffer_params)

    def _arrange(self, arrival: Item) -> list[Item]:
        held = self.buffer_items()
        if self.label(arrival) == "medium":
            mediums = [item for item in held if self.label(item) == "medium"]
            if len(mediums) == 1:
                incumbent = mediums[0]
                if arrival.size < incumbent.size:
                    return [item for item in held if item is not incumbent] + [arrival]
                return held
        chosen = []
        load = Fraction(0)
        for item in sorted(held + [arrival], key=lambda item: (-item.size, item.arrival_index)):
            if load + item.size <= self.effective_capacity:
                chosen.append(item)
                load += item.size
        return chosen


class SplitBufferAlgorithm(ThresholdAlgorithm):
    """For 10/9 <= R <= (1+sqrt 2)/2: a primary part below r plus one spare medium.

    ``primary`` and ``secondary`` expose the current partition of the buffer.
    """

    algorithm_id = "alg6"
    make_params = staticmethod(split_buffer_params)

    def reset(self):
        super().reset()
        self.primary: frozenset = frozenset()
        self.secondary: frozenset = frozenset()

    def _on_lock(self, witness):
        self.primary = frozenset(item.arrival_index for item in witness)
        self.secondary = frozenset()

    def _arrange(self, arrival: Item) -> list[Item]:
        pool = self.buffer_items() + [arrival]
        mediums = [item for item in pool if self.label(item) in ("M1", "M2", "M3")]
        smalls = [item for item in pool if self.label(item) == "small"]
        square = self.params.class_boundaries[2].upper
        if total_size(mediums) >= square:
            core = find_subset_in_range(mediums, square, None)
            primary = list(core) + smalls
            chosen = {item.arrival_index for item in primary}
            leftovers = [item for item in pool if item.arrival_index not in chosen]
            secondary = []
            if leftovers:
                spare = _by_size(leftovers)[0]
                if self.label(spare) in ("M1", "M2"):
                    secondary = [spare]
        else:
            primary, secondary = pool, []
        self.primary = frozenset(item.arrival_index for item in primary)
        self.secondary = frozenset(item.arrival_index for item in secondary)
        return primary + secondary


class TwoBinAlgorithm(ThresholdAlgorithm):
    """For 2 - sqrt(2)/2 <= R <= 17 - 9 sqrt 3: keep the buffer packable into two bins."""

    algorithm_id = "alg7"
    make_params = staticmethod(two_bin_params)

    def __init__(self, buffer_capacity, effective_capacity=None):
        super().__init__(buffer_capacity, effective_capacity)
        self._slack = simplify(self.effective_capacity - self.params.threshold)

    def _arrange(self, arrival: Item) -> list[Item]:
        pool = self.buffer_items() + [arrival]
        groups = {label: [] for label in ("small", "M1", "M2", "M3", "M4")}
        for item in _by_size(pool):
            groups[self.label(item)].append(item)
        m1, m4 = groups["M1"], groups["M4"]

        chosen: list[Item] = []
        lower_mediums = _by_size(m1 + groups["M2"] + groups["M3"])
        if lower_mediums:
            chosen.append(lower_mediums[0])
        if len(m1) >= 2:
            second = next(item for item in m1 if item not in chosen)
            if not m4 or total_size(chosen) + second.size <= m4[0].size:
                chosen.append(second)
        if m4 and sum(1 for item in chosen if self.label(item) == "M1") <= 1:
            chosen.append(m4[0])

        chosen_m1 = [item for item in chosen if self.label(item) == "M1"]
        chosen_m4 = [item for item in chosen if self.label(item) == "M4"]
        if (len(chosen_m1) == 2 and total_size(chosen_m1) <= self._slack) or (
            len(chosen_m4) == 1 and total_size(chosen_m4) <= self._slack
        ):
            remaining = [
                item
                for item in _by_size(m1 + groups["M2"] + groups["M3"] + m4)
                if item not in chosen
            ]
            if remaining and total_size(chosen) + remaining[0].size <= self.effective_capacity:
                chosen.append(remaining[0])
        return chosen + groups["small"]


class HalfCapacityAlgorithm(ThresholdAlgorithm):
    """For 2 sqrt 3 - 2 <= R <= 3/2: thresholds are the rationals R/4, R/2, R^2/4.

    ``proven_only=False`` also accepts sqrt 2 <= R < 2 sqrt 3 - 2, where the
    rules still make sense but carry no proven ratio.
    """

    algorithm_id = "alg8"
    make_params = staticmethod(half_capacity_params)

    def __init__(self, buffer_capacity, effective_capacity=None, proven_only: bool = True):
        target = buffer_capacity if effective_capacity is None else effective_capacity
        self.params = half_capacity_params(simplify(target), proven_only)
        OnlineAlgorithm.__init__(self, buffer_capacity, effective_capacity)

    def _arrange(self, arrival: Item) -> list[Item]:
        groups = {label: [] for label in ("small", "M1", "M2", "M3", "M4")}
        for item in _by_size(self.buffer_items() + [arrival]):
            groups[self.label(item)].append(item)
        m1, m2, m3, m4 = groups["M1"], groups["M2"], groups["M3"], groups["M4"]

        chosen: list[Item] = []
        if m1:
            first = m1[0]
            chosen.append(first)
            if len(m1) >= 2:
                second = m1[1]
                if not m2 or not m4 or first.size + second.size <= m4[0].size:
                    chosen.append(second)
        if m2:
            chosen.append(m2[0])
        if m3 and (not (m1 or m2) or not m4):
            chosen.append(m3[0])
        if m4 and sum(1 for item in chosen if self.label(item) in ("M1", "M2")) <= 2:
            chosen.append(m4[0])
        return chosen + groups["small"]


def prop_small_r(instance: Instance) -> BufferTrace:
    return SmallBufferAlgorithm(instance.buffer_capacity).run(instance)


def prop_mid_r(instance: Instance) -> BufferTrace:
    return SplitBufferAlgorithm(instance.buffer_capacity).run(instance)


def prop_case2(instance: Instance) -> BufferTrace:
    return TwoBinAlgorithm(instance.buffer_capacity).run(instance)


def prop_case3(instance: Instance) -> BufferTrace:
    return HalfCapacityAlgorithm(instance.buffer_capacity).run(instance)
