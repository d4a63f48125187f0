"""Buffer traces and their legality check."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from ..numeric import Number
from .model import Instance, Removability

CAPACITY_BREACH = "capacity breach"
ILLEGAL_INSERTION = "illegal insertion"
ILLEGAL_REINSERTION = "illegal re-insertion"
NONREMOVABLE_DELETION = "non-removable deletion"
ROUND_COUNT = "round count mismatch"


class TraceInvalid(AssertionError):
    """An algorithm produced an illegal trace. This is always a defect."""


class BufferTrace:
    """Buffer contents B_0..B_n, stored as per-round additions and removals.

    Long adversary sequences keep hundreds of items in the buffer for
    hundreds of thousands of rounds, so materialising every B_i would be
    wasteful. ``rounds`` rebuilds the full sets on demand.
    """

    def __init__(self, buffer_capacity: Number, rounds: Iterable[Iterable[int]] | None = None):
        self.buffer_capacity = buffer_capacity
        self._deltas: list[tuple[frozenset, frozenset]] = []
        self._current: frozenset = frozenset()
        if rounds is not None:
            for buffer in rounds:
                self.record(buffer)
        else:
            self.record(())

    def record(self, buffer: Iterable[int]) -> None:
        new = buffer if isinstance(buffer, frozenset) else frozenset(buffer)
        old = self._current
        self._deltas.append((new - old, old - new))
        self._current = new

    def __len__(self) -> int:
        return len(self._deltas)

    @property
    def deltas(self) -> list[tuple[frozenset, frozenset]]:
        return list(self._deltas)

    @property
    def final(self) -> frozenset:
        return self._current

    def iter_rounds(self) -> Iterator[frozenset]:
        state: set = set()
        for added, removed in self._deltas:
            state -= removed
            state |= added
            yield frozenset(state)

    @property
    def rounds(self) -> list[frozenset]:
        return list(self.iter_rounds())

    def __getitem__(self, position: int) -> frozenset:
        rounds = self.rounds
        return rounds[position]

    def __eq__(self, other):
        if not isinstance(other, BufferTrace):
            return NotImplemented
        return self.buffer_capacity == other.buffer_capacity and self._deltas == other._deltas

    def __repr__(self):
        return f"BufferTrace(R={self.buffer_capacity}, rounds={len(self)})"


@dataclass(frozen=True)
class TraceReport:
    ok: bool
    violation: str | None = None
    round: int | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def validate_trace(instance: Instance, trace: BufferTrace) -> TraceReport:
    """Check a trace against the buffer rules; report the first violation."""
    n = instance.n
    if len(trace) != n + 1:
        return TraceReport(False, ROUND_COUNT, None, f"expected {n + 1} rounds, got {len(trace)}")
    nonremovable = instance.removability is Removability.NONREMOVABLE
    capacity = instance.buffer_capacity
    ever_held: set = set()
    load = Fraction(0)
    for round_index, (added, removed) in enumerate(trace._deltas):
        for index in sorted(added):
            if round_index >= 1 and index == round_index:
                continue
            kind = ILLEGAL_REINSERTION if index in ever_held else ILLEGAL_INSERTION
            return TraceReport(False, kind, round_index, f"item {index} entered the buffer")
        if removed and nonremovable:
            return TraceReport(
                False, NONREMOVABLE_DELETION, round_index, f"items {sorted(removed)} were discarded"
            )
        for index in added:
            load += instance.item(index).size
            ever_held.add(index)
        for index in removed:
            load -= instance.item(index).size
        if load > capacity:
            return TraceReport(False, CAPACITY_BREACH, round_index, f"buffer holds {load} > {capacity}")
    return TraceReport(True)
