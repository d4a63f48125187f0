"""Items, instances and their JSON form."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from ..numeric import format_rational, parse_rational


class Mode(str, Enum):
    PROPORTIONAL = "proportional"
    GENERAL = "general"

    @classmethod
    def parse(cls, text: "str | Mode") -> "Mode":
        if isinstance(text, Mode):
            return text
        key = str(text).strip().lower()
        aliases = {"prop": cls.PROPORTIONAL, "gen": cls.GENERAL}
        if key in aliases:
            return aliases[key]
        return cls(key)


class Removability(str, Enum):
    REMOVABLE = "removable"
    NONREMOVABLE = "nonremovable"

    @classmethod
    def parse(cls, text: "str | Removability") -> "Removability":
        if isinstance(text, Removability):
            return text
        key = str(text).strip().lower().replace("-", "").replace("_", "")
        aliases = {"rem": cls.REMOVABLE, "nonrem": cls.NONREMOVABLE}
        if key in aliases:
            return aliases[key]
        return cls(key)


class InvalidInstance(ValueError):
    pass


@dataclass(frozen=True, eq=False, slots=True)
class Item:
    """A single arrival. Identity (hash/eq) is the arrival index plus numbers."""

    size: Fraction
    value: Fraction
    arrival_index: int

    def __post_init__(self):
        size = self.size if type(self.size) is Fraction else parse_rational(self.size)
        value = self.value if type(self.value) is Fraction else parse_rational(self.value)
        if not 0 < size <= 1:
            raise InvalidInstance(f"item size must lie in (0, 1], got {size}")
        if value < 0:
            raise InvalidInstance(f"item value must be non-negative, got {value}")
        if not isinstance(self.arrival_index, int) or self.arrival_index < 1:
            raise InvalidInstance(f"arrival index must be a positive integer, got {self.arrival_index!r}")
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "value", value)

    @property
    def density(self) -> Fraction:
        return self.value / self.size

    def __hash__(self):
        return hash(self.arrival_index)

    def __eq__(self, other):
        if not isinstance(other, Item):
            return NotImplemented
        return (
            self.arrival_index == other.arrival_index
            and self.size == other.size
            and self.value == other.value
        )

    def __repr__(self):
        return f"Item(#{self.arrival_index}, size={self.size}, value={self.value})"


def total_size(items: Iterable[Item]) -> Fraction:
    return sum((item.size for item in items), Fraction(0))


def total_value(items: Iterable[Item]) -> Fraction:
    return sum((item.value for item in items), Fraction(0))


def competitive_ratio(opt_value: Fraction, alg_value: Fraction):
    """OPT/ALG as an exact Fraction; ``math.inf`` when ALG is 0 < OPT; 1 when both are 0."""
    if alg_value == 0:
        return Fraction(1) if opt_value == 0 else math.inf
    return Fraction(opt_value) / alg_value


@dataclass(frozen=True)
class Instance:
    """An input sequence together with the buffer it is played against."""

    items: tuple[Item, ...]
    buffer_capacity: Fraction
    mode: Mode = Mode.PROPORTIONAL
    removability: Removability = Removability.REMOVABLE
    _by_index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        items = tuple(self.items)
        capacity = parse_rational(self.buffer_capacity)
        mode = Mode.parse(self.mode)
        removability = Removability.parse(self.removability)
        if capacity < 1:
            raise InvalidInstance(f"buffer capacity must be at least 1, got {capacity}")
        for position, item in enumerate(items, start=1):
            if item.arrival_index != position:
                raise InvalidInstance(
                    f"arrival indices must run 1..n without gaps; position {position} "
                    f"holds index {item.arrival_index}"
                )
            if mode is Mode.PROPORTIONAL and item.value != item.size:
                raise InvalidInstance(f"proportional item #{position} has value != size")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "buffer_capacity", capacity)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "removability", removability)
        object.__setattr__(self, "_by_index", {item.arrival_index: item for item in items})

    # --- construction helpers ------------------------------------------
    @classmethod
    def proportional(cls, sizes: Sequence, buffer_capacity, removability=Removability.REMOVABLE) -> "Instance":
        items = []
        for position, raw in enumerate(sizes, start=1):
            size = parse_rational(raw)
            items.append(Item(size, size, position))
        return cls(tuple(items), buffer_capacity, Mode.PROPORTIONAL, removability)

    @classmethod
    def general(cls, pairs: Sequence, buffer_capacity, removability=Removability.REMOVABLE) -> "Instance":
        items = tuple(
            Item(parse_rational(size), parse_rational(value), position)
            for position, (size, value) in enumerate(pairs, start=1)
        )
        return cls(items, buffer_capacity, Mode.GENERAL, removability)

    # --- views ----------------------------------------------------------
    def __len__(self):
        return len(self.items)

    @property
    def n(self) -> int:
        return len(self.items)

    def item(self, arrival_index: int) -> Item:
        return self._by_index[arrival_index]

    def items_at(self, indices: Iterable[int]) -> list[Item]:
        lookup = self._by_index
        return [lookup[i] for i in sorted(indices)]

    def prefix(self, k: int) -> "Instance":
        return Instance(self.items[:k], self.buffer_capacity, self.mode, self.removability)

    # --- JSON -----------------------------------------------------------
    def to_dict(self) -> dict:
        payload = {
            "R": format_rational(self.buffer_capacity),
            "mode": self.mode.value,
            "removability": self.removability.value,
            "items": [
                {"size": format_rational(item.size), "value": format_rational(item.value)}
                for item in self.items
            ],
        }
        return payload

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, payload: dict) -> "Instance":
        if not isinstance(payload, dict):
            raise InvalidInstance("instance JSON must be an object")
        try:
            capacity = parse_rational(payload["R"])
            raw_items = payload["items"]
        except KeyError as exc:
            raise InvalidInstance(f"instance JSON lacks field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise InvalidInstance(str(exc)) from None
        try:
            mode = Mode.parse(payload.get("mode", Mode.PROPORTIONAL))
            removability = Removability.parse(payload.get("removability", Removability.REMOVABLE))
        except ValueError as exc:
            raise InvalidInstance(str(exc)) from None
        if not isinstance(raw_items, list):
            raise InvalidInstance("'items' must be a list")
        items = []
        for position, raw in enumerate(raw_items, start=1):
            if not isinstance(raw, dict) or "size" not in raw:
                raise InvalidInstance(f"item {position} must be an object with a 'size'")
            try:
                size = parse_rational(raw["size"])
                if "value" in raw:
                    value = parse_rational(raw["value"])
                elif mode is Mode.PROPORTIONAL:
                    value = size
                else:
                    raise InvalidInstance(f"general item {position} needs a 'value'")
            except (TypeError, ValueError) as exc:
                raise InvalidInstance(f"item {position}: {exc}") from None
            items.append(Item(size, value, position))
        return cls(tuple(items), capacity, mode, removability)

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInstance(f"invalid JSON: {exc}") from None
        return cls.from_dict(payload)
