"""Shared machinery for the online algorithms."""

from __future__ import annotations

from typing import ClassVar, Iterable

from ..core import BufferTrace, Instance, Item, Mode, Removability
from ..numeric import Number, parse_rational


class RegimeViolation(ValueError):
    """The buffer capacity lies outside the algorithm's valid range."""


class VariantMismatch(ValueError):
    """Algorithm and instance (or adversary) disagree on mode or removability."""


class Unsupported(ValueError):
    """No algorithm with a bounded ratio exists for the requested variant."""


class OnlineAlgorithm:
    """A deterministic state machine that sees one item per round.

    ``buffer_capacity`` is the nominal buffer R of the instances the
    algorithm will face. ``effective_capacity`` is the R the algorithm's
    rules are written for; it is smaller when a regime is clamped, which
    is always legal because the algorithm then simply leaves part of the
    buffer unused.
    """

    algorithm_id: ClassVar[str] = ""
    removes_items: ClassVar[bool] = True
    proportional_only: ClassVar[bool] = False

    def __init__(self, buffer_capacity: Number, effective_capacity: Number | None = None):
        self.buffer_capacity = parse_rational(buffer_capacity)
        self.effective_capacity = self.buffer_capacity if effective_capacity is None else effective_capacity
        if self.effective_capacity > self.buffer_capacity:
            raise RegimeViolation("effective capacity cannot exceed the buffer")
        self.reset()

    # --- state ----------------------------------------------------------
    def reset(self) -> None:
        self._held: dict[int, Item] = {}
        self._members: frozenset = frozenset()

    @property
    def buffer(self) -> frozenset:
        return self._members

    def buffer_items(self) -> list[Item]:
        return [self._held[i] for i in sorted(self._held)]

    def _set_buffer(self, items: Iterable[Item]) -> frozenset:
        self._held = {item.arrival_index: item for item in items}
        self._members = frozenset(self._held)
        return self._members

    def step(self, item: Item) -> frozenset:
        """Consume the next arrival and return the new buffer (arrival indices)."""
        raise NotImplementedError

    # --- driving ---------------------------------------------------------
    def check_variant(self, mode: Mode, removability: Removability) -> None:
        if self.proportional_only and mode is not Mode.PROPORTIONAL:
            raise VariantMismatch(f"{self.algorithm_id} needs proportional items")
        if self.removes_items and removability is not Removability.REMOVABLE:
            raise VariantMismatch(f"{self.algorithm_id} discards items; the variant forbids it")

    def run(self, instance: Instance) -> BufferTrace:
        self.check_variant(instance.mode, instance.removability)
        if instance.buffer_capacity != self.buffer_capacity:
            raise VariantMismatch(
                f"algorithm built for R={self.buffer_capacity}, instance has R={instance.buffer_capacity}"
            )
        self.reset()
        trace = BufferTrace(instance.buffer_capacity)
        for item in instance.items:
            trace.record(self.step(item))
        return trace

    def __repr__(self):
        extra = ""
        if self.effective_capacity != self.buffer_capacity:
            extra = f", effective={self.effective_capacity}"
        return f"{type(self).__name__}(R={self.buffer_capacity}{extra})"
