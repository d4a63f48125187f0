"""The two greedy algorithms: first-fit without removal, density order with removal."""

from __future__ import annotations

import math
from bisect import insort
from fractions import Fraction

from ..core import BufferTrace, Instance, Item
from ..numeric import floor_exact
from .base import OnlineAlgorithm


class NonRemovableGreedy(OnlineAlgorithm):
    """Take each arrival that fits in the buffer; never discard anything."""

    algorithm_id = "alg1"
    removes_items = False

    def reset(self):
        super().reset()
        self._load = Fraction(0)

    def step(self, item: Item) -> frozenset:
        if self._load + item.size <= self.effective_capacity:
            self._load += item.size
            self._held[item.arrival_index] = item
            self._members = self._members | {item.arrival_index}
        return self._members


class DensityGreedy(OnlineAlgorithm):
    """Rebuild the buffer each round by scanning items in non-increasing density.

    Ties go to the smaller item, then to the earlier arrival. Sizes are
    kept as integers over a common denominator that grows only when an
    arrival brings a new one, so a scan over a long buffer costs integer
    additions rather than fraction arithmetic.
    """

    algorithm_id = "alg4"

    def reset(self):
        super().reset()
        self._order: list[tuple] = []
        self._scaled: dict[int, int] = {}
        self._scale = 1
        self._load = 0
        self._limit = floor_exact(self.effective_capacity)

    def _adopt_denominator(self, denominator: int) -> None:
        if self._scale % denominator == 0:
            return
        grown = math.lcm(self._scale, denominator)
        factor = grown // self._scale
        self._scaled = {index: size * factor for index, size in self._scaled.items()}
        self._order = [(key, size, index, weight * factor) for key, size, index, weight in self._order]
        self._load *= factor
        self._scale = grown
        self._limit = floor_exact(self.effective_capacity * grown)

    def step(self, item: Item) -> frozenset:
        self._adopt_denominator(item.size.denominator)
        index = item.arrival_index
        weight = item.size.numerator * (self._scale // item.size.denominator)
        self._scaled[index] = weight
        self._held[index] = item
        insort(self._order, (-item.density, item.size, index, weight))
        if self._load + weight <= self._limit:
            self._load += weight
            self._members = self._members | {index}
            return self._members

        # the scan can stop once the room left is below every remaining weight
        smallest = min(self._scaled.values())
        room = self._limit
        kept = []
        keep = kept.append
        for entry in self._order:
            if entry[3] <= room:
                room -= entry[3]
                keep(entry)
                if room < smallest:
                    break
        self._order = kept
        survivors = frozenset([entry[2] for entry in kept])
        for gone in self._members - survivors:
            del self._held[gone]
            del self._scaled[gone]
        if index not in survivors:
            del self._held[index]
            del self._scaled[index]
        self._members = survivors
        self._load = self._limit - room
        return survivors


def nonremovable_greedy(instance: Instance) -> BufferTrace:
    return NonRemovableGreedy(instance.buffer_capacity).run(instance)


def density_greedy(instance: Instance) -> BufferTrace:
    return DensityGreedy(instance.buffer_capacity).run(instance)
