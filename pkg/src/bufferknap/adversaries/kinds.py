"""Adaptive opponents that realise the lower-bound constructions.

Each adversary is a script written as a generator: it yields the next
item as a ``(size, value)`` pair and receives the algorithm's buffer
(a frozenset of arrival indices) after that round. Returning from the
generator ends the sequence. "The first discarded item" of a group is
always the one with the smallest arrival index missing from the buffer.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Callable, Generator, Iterator

import mpmath

from ..algorithms.params import SQRT2_PLATEAU_END, TWO_BIN_MAX, golden_threshold, two_bin_threshold
from ..core import Item, Mode, Removability
from ..numeric import Number, Surd, as_surd, ceil_exact, floor_exact, parse_rational, to_mpf, working_digits

Script = Generator[tuple, frozenset, None]

# r is irrational for most R; the constructions use the rational just above it
THRESHOLD_DENOMINATOR = 2**40
EMISSION_CAP = 10**6


class ParamOutOfRange(ValueError):
    """R, epsilon or c lies outside the range the construction is valid for."""


class SequenceCapExceeded(RuntimeError):
    """The adversary would emit more items than the configured cap."""


class AdversaryKind(str, Enum):
    GEN_NONREM = "gen-nonrem"
    PROP_NONREM_SMALL = "prop-nonrem-small"
    PROP_NONREM_LARGE = "prop-nonrem-large"
    GEN_REM_GENERAL = "gen-rem-general"
    GEN_REM_SMALL = "gen-rem-small"
    GEN_REM_MID = "gen-rem-mid"
    PROP_REM_I = "prop-rem-i"
    PROP_REM_II = "prop-rem-ii"
    PROP_REM_III = "prop-rem-iii"
    PROP_REM_GENERAL = "prop-rem-general"

    @classmethod
    def parse(cls, text: "str | AdversaryKind") -> "AdversaryKind":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown adversary kind {text!r}; choose from {[k.value for k in cls]}")


def _first_missing(buffer: frozenset, indices) -> int | None:
    for index in indices:
        if index not in buffer:
            return index
    return None


def _largest_half_power(condition: Callable[[Fraction], bool], start: Fraction = Fraction(1, 2)) -> Fraction:
    value = start
    for _ in range(400):
        if condition(value):
            return value
        value /= 2
    raise ParamOutOfRange("no admissible perturbation found; epsilon is too small")


def _rational_at_or_above(value: Number) -> Fraction:
    if isinstance(value, Surd):
        return value.rational_above(THRESHOLD_DENOMINATOR)
    return Fraction(value)


class Adversary:
    """Base class: drives a script and turns its pairs into numbered items."""

    kind: AdversaryKind
    mode: Mode
    removability: Removability

    def __init__(self, buffer_capacity: Number, epsilon: Number, emission_cap: int = EMISSION_CAP):
        self.buffer_capacity = parse_rational(buffer_capacity)
        self.epsilon = parse_rational(epsilon)
        if not 0 < self.epsilon < 1:
            raise ParamOutOfRange(f"epsilon must lie in (0, 1), got {self.epsilon}")
        self.emission_cap = emission_cap
        self.emitted: list[Item] = []
        self._script: Iterator | None = None
        self._finished = False
        self._check_range()

    # --- subclass hooks ---------------------------------------------------
    def _check_range(self) -> None:
        pass

    def _run(self) -> Script:
        raise NotImplementedError

    def _bound(self):
        raise NotImplementedError

    @property
    def max_items(self) -> int:
        raise NotImplementedError

    # --- public interface -----------------------------------------------
    @property
    def theorem_bound(self) -> mpmath.mpf:
        """The ratio the construction forces (before subtracting epsilon)."""
        with mpmath.workdps(working_digits()):
            return self._bound()

    @property
    def finished(self) -> bool:
        return self._finished

    def next_item(self, buffer: frozenset) -> Item | None:
        """Observe the buffer after the previous round and emit the next item (None = stop)."""
        if self._finished:
            return None
        try:
            if self._script is None:
                self._script = self._run()
                pair = next(self._script)
            else:
                pair = self._script.send(frozenset(buffer))
        except StopIteration:
            self._finished = True
            return None
        if len(self.emitted) >= self.emission_cap:
            raise SequenceCapExceeded(
                f"{self.kind.value} would exceed {self.emission_cap} items; use a larger epsilon"
            )
        size, value = pair
        item = Item(Fraction(size), Fraction(value), len(self.emitted) + 1)
        self.emitted.append(item)
        return item

    def __repr__(self):
        return f"{type(self).__name__}(R={self.buffer_capacity}, eps={self.epsilon})"


def _proportional(script: Callable[..., Generator]) -> Callable[..., Script]:
    """Let a proportional script yield bare sizes."""

    def wrapped(self):
        inner = script(self)
        try:
            size = next(inner)
            while True:
                buffer = yield (size, size)
                size = inner.send(buffer)
        except StopIteration:
            return

    return wrapped


# ---------------------------------------------------------------------------
# general items, no removal
# ---------------------------------------------------------------------------
class GeometricValues(Adversary):
    """Unit-size items of value c, c^2, ... until one is refused."""

    kind = AdversaryKind.GEN_NONREM
    mode = Mode.GENERAL
    removability = Removability.NONREMOVABLE

    def __init__(self, buffer_capacity, epsilon, growth: Number = 10, **kwargs):
        self.growth = parse_rational(growth)
        super().__init__(buffer_capacity, epsilon, **kwargs)

    def _check_range(self):
        if self.buffer_capacity < 1:
            raise ParamOutOfRange("R must be at least 1")
        if self.growth <= 1:
            raise ParamOutOfRange("the growth factor c must exceed 1")

    def _bound(self):
        return to_mpf(self.growth)

    @property
    def max_items(self):
        return floor_exact(self.buffer_capacity) + 1

    def _run(self):
        value = self.growth
        index = 1
        while True:
            buffer = yield (1, value)
            if index not in buffer:
                return
            value *= self.growth
            index += 1


# ---------------------------------------------------------------------------
# proportional items, no removal
# ---------------------------------------------------------------------------
class OverfullPair(Adversary):
    """R - 1 + eps' then 1: whoever takes the first cannot take the second."""

    kind = AdversaryKind.PROP_NONREM_SMALL
    mode = Mode.PROPORTIONAL
    removability = Removability.NONREMOVABLE

    def _check_range(self):
        R = self.buffer_capacity
        if not 1 < R <= Fraction(3, 2):
            raise ParamOutOfRange(f"{self.kind.value} needs 1 < R <= 3/2, got {R}")
        target = 1 / (R - 1) - self.epsilon
        self.offset = _largest_half_power(lambda e: R - 1 + e <= 1 and 1 / (R - 1 + e) >= target)

    def _bound(self):
        return 1 / to_mpf(self.buffer_capacity - 1)

    @property
    def max_items(self):
        return 2

    @_proportional
    def _run(self):
        buffer = yield self.buffer_capacity - 1 + self.offset
        if 1 not in buffer:
            return
        yield Fraction(1)


class ShrinkingHalves(Adversary):
    """1/2 + eps'/j for j = 1, 2, ... until refused at j = k, then 1/2 - eps'/k."""

    kind = AdversaryKind.PROP_NONREM_LARGE
    mode = Mode.PROPORTIONAL
    removability = Removability.NONREMOVABLE

    def _check_range(self):
        if not self.buffer_capacity > Fraction(3, 2):
            raise ParamOutOfRange(f"{self.kind.value} needs R > 3/2, got {self.buffer_capacity}")
        self.offset = _largest_half_power(lambda e: Fraction(2) / (1 + 2 * e) >= 2 - self.epsilon)

    def _bound(self):
        return mpmath.mpf(2)

    @property
    def max_items(self):
        return floor_exact(2 * self.buffer_capacity) + 2

    @_proportional
    def _run(self):
        half = Fraction(1, 2)
        k = 1
        while True:
            buffer = yield half + self.offset / k
            if k not in buffer:
                break
            k += 1
        yield half - self.offset / k


# ---------------------------------------------------------------------------
# general items with removal
# ---------------------------------------------------------------------------
class NearUnitStaircase(Adversary):
    """n near-unit items of falling value, then a filler matched to the first discard.

    The filler for a discarded item i (0-based) brings the pair to size
    exactly 1 and value 1 + 1/n. Sizes are shifted by delta^2 against the
    textbook sequence so that the filler is a legal item even for i = 0.
    """

    kind = AdversaryKind.GEN_REM_GENERAL
    mode = Mode.GENERAL
    removability = Removability.REMOVABLE

    def _check_range(self):
        R = self.buffer_capacity
        if R < 1:
            raise ParamOutOfRange("R must be at least 1")
        gap = floor_exact(R) + 1 - R

        def admissible(delta):
            n = ceil_exact(R + delta)
            return delta <= self.epsilon and delta < gap and n - Fraction(n * (n + 1), 2) * delta**2 > R

        self.delta = _largest_half_power(admissible)
        self.count = ceil_exact(R + self.delta)

    def _bound(self):
        return 1 + 1 / (to_mpf(self.buffer_capacity) + 1)

    @property
    def max_items(self):
        return self.count + 1

    def _run(self):
        n, step = self.count, self.delta**2
        buffer = frozenset()
        for i in range(n):
            buffer = yield (1 - (i + 1) * step, 1 - Fraction(i, n))
        discarded = _first_missing(buffer, range(1, n + 1))
        if discarded is None:
            return
        i = discarded - 1
        yield ((i + 1) * step, Fraction(i + 1, n))


class RisingDensities(Adversary):
    """(1, 1) then tiny items of slowly rising density until (1, 1) is dropped."""

    kind = AdversaryKind.GEN_REM_SMALL
    mode = Mode.GENERAL
    removability = Removability.REMOVABLE

    def _check_range(self):
        R = self.buffer_capacity
        if not 1 < R <= Fraction(3, 2):
            raise ParamOutOfRange(f"{self.kind.value} needs 1 < R <= 3/2, got {R}")
        target = 1 / (R - 1) - self.epsilon
        m = 1
        while True:
            tiny = Fraction(1, m)
            if min(1 / ((R - 1 + tiny) * (1 + tiny)), (1 - tiny**2) / (R - 1)) >= target:
                break
            m += 1
        self.inverse = m
        self.tiny = Fraction(1, m)

    def _bound(self):
        return 1 / to_mpf(self.buffer_capacity - 1)

    @property
    def max_items(self):
        return 1 + self.inverse**3

    def _run(self):
        buffer = yield (1, 1)
        if 1 not in buffer:
            return
        cube = self.tiny**3
        for j in range(1, self.inverse**3 + 1):
            buffer = yield (self.tiny, j * cube)
            if 1 not in buffer:
                return


class HeavyPairs(Adversary):
    """k items no two of which fit in R, then a partner for the one kept."""

    kind = AdversaryKind.GEN_REM_MID
    mode = Mode.GENERAL
    removability = Removability.REMOVABLE

    def _check_range(self):
        R = self.buffer_capacity
        if not Fraction(3, 2) <= R < 2:
            raise ParamOutOfRange(f"{self.kind.value} needs 3/2 <= R < 2, got {R}")
        self.k = floor_exact(max(1 / (2 - R), 1 / self.epsilon)) + 1

    def _bound(self):
        return mpmath.mpf(2)

    @property
    def max_items(self):
        return self.k + 1

    def _run(self):
        k = self.k
        buffer = frozenset()
        for i in range(1, k + 1):
            buffer = yield (1 - Fraction(i, 2 * k * k), 1 - Fraction(i, 2 * k))
        kept = min(buffer, default=None)
        if kept is None or kept == k:
            return
        # e_{kept+1} and this item fill the knapsack exactly
        yield (Fraction(kept + 1, 2 * k * k), 1 - Fraction(kept, 2 * k))


# ---------------------------------------------------------------------------
# proportional items with removal
# ---------------------------------------------------------------------------
class GoldenPair(Adversary):
    """r and r^2 + eps' (r + r^2 = R), then 1 - r^2 - eps' if r survived."""

    kind = AdversaryKind.PROP_REM_I
    mode = Mode.PROPORTIONAL
    removability = Removability.REMOVABLE

    def _check_range(self):
        R = self.buffer_capacity
        if not 1 <= R < 2:
            raise ParamOutOfRange(f"{self.kind.value} needs 1 <= R < 2, got {R}")
        self.exact_threshold = golden_threshold(R)
        r = self.size_r = _rational_at_or_above(self.exact_threshold)
        target = 1 / as_surd(self.exact_threshold) - self.epsilon
        self.offset = _largest_half_power(lambda e: e < r - r * r and target <= r / (r * r + e))

    def _bound(self):
        R = to_mpf(self.buffer_capacity)
        return (1 + mpmath.sqrt(4 * R + 1)) / (2 * R)

    @property
    def max_items(self):
        return 3

    @_proportional
    def _run(self):
        r = self.size_r
        yield r
        buffer = yield r * r + self.offset
        if 1 not in buffer:
            return
        # r survived, so (for ratio purposes) the second item is gone
        yield 1 - r * r - self.offset


class TwoBinTree(Adversary):
    """r, 1 - r + d/4, 2r - 1 and the follow-ups keyed on what was discarded.

    ``d`` is half the user-facing epsilon: in the branch where the first
    item is discarded after the fifth arrival, the loss is
    3d / (8 (2r - 1)) / r^2, which is about 2.2 d at these R, so the full
    epsilon would not keep the ratio within epsilon of 1/r there.
    The fifth item is R - 1 + d/2, the value under which the three-item
    total R + 3d/4 and the later ratios all evaluate as stated.
    """

    kind = AdversaryKind.PROP_REM_II
    mode = Mode.PROPORTIONAL
    removability = Removability.REMOVABLE

    def _check_range(self):
        R = self.buffer_capacity
        if not SQRT2_PLATEAU_END <= R < TWO_BIN_MAX:
            raise ParamOutOfRange(f"{self.kind.value} needs 2 - sqrt(2)/2 <= R < 17 - 9 sqrt(3), got {R}")
        self.exact_threshold = two_bin_threshold(R)
        self.size_r = _rational_at_or_above(self.exact_threshold)
        self.delta = self.epsilon / 2
        if not 1 + self.size_r - R - 3 * self.delta / 4 > 0:
            raise ParamOutOfRange("epsilon too large for the construction")

    def _bound(self):
        R = to_mpf(self.buffer_capacity)
        return (mpmath.sqrt(16 * R + 1) - 1) / (2 * R)

    @property
    def max_items(self):
        return 6

    @_proportional
    def _run(self):
        r, d, R = self.size_r, self.delta, self.buffer_capacity
        yield r
        yield 1 - r + d / 4
        buffer = yield 2 * r - 1
        gone = _first_missing(buffer, (1, 2, 3))
        if gone == 1:
            yield 1 - r
            return
        if gone == 2:
            yield r - d / 4
            return
        if gone is None:
            return
        buffer = yield 2 * r - 1
        gone = _first_missing(buffer, (1, 2, 4))
        if gone == 1:
            yield 1 - r
            return
        if gone == 2:
            yield r - d / 4
            return
        if gone is None:
            return
        buffer = yield R - 1 + d / 2
        gone = _first_missing(buffer, (1, 2, 5))
        if gone == 2:
            yield r - d / 4
        elif gone == 5:
            yield 1 + r - R - 3 * d / 4


class HalfCapacityTree(Adversary):
    """R/2, (R^2 + eps)/4, R - 1 and the follow-ups keyed on what was discarded."""

    kind = AdversaryKind.PROP_REM_III
    mode = Mode.PROPORTIONAL
    removability = Removability.REMOVABLE

    def _check_range(self):
        R = self.buffer_capacity
        if not (R * R + 4 * R - 8 > 0 and R < 2):
            raise ParamOutOfRange(f"{self.kind.value} needs 2 sqrt(3) - 2 < R < 2, got {R}")
        if not self.epsilon < 2 * R - R * R:
            raise ParamOutOfRange("epsilon must be below 2R - R^2 so that the sizes stay ordered")

    def _bound(self):
        return 2 / to_mpf(self.buffer_capacity)

    @property
    def max_items(self):
        return 5

    @_proportional
    def _run(self):
        R, e = self.buffer_capacity, self.epsilon
        yield R / 2
        yield (R * R + e) / 4
        buffer = yield R - 1
        gone = _first_missing(buffer, (1, 2, 3))
        if gone == 3:
            yield 2 - R
            return
        if gone != 2:
            return
        buffer = yield 1 - R / 2 + e / 4
        gone = _first_missing(buffer, (1, 3, 4))
        if gone == 1:
            yield 1 - R / 2
        elif gone == 3:
            yield 1 - (R * R + e) / 4
        elif gone == 4:
            yield R / 2 - e / 4


class ArithmeticSizes(Adversary):
    """Sizes i/n + eps/n^2 for i < n = ceil(2R) + 1, then the complement of the first discard."""

    kind = AdversaryKind.PROP_REM_GENERAL
    mode = Mode.PROPORTIONAL
    removability = Removability.REMOVABLE

    def _check_range(self):
        if self.buffer_capacity < 1:
            raise ParamOutOfRange("R must be at least 1")
        self.count = ceil_exact(2 * self.buffer_capacity) + 1

    def _bound(self):
        return 1 + mpmath.mpf(1) / self.count

    @property
    def max_items(self):
        return self.count

    @_proportional
    def _run(self):
        n = self.count
        sizes = [Fraction(i, n) + self.epsilon / (n * n) for i in range(1, n)]
        buffer = frozenset()
        for size in sizes:
            buffer = yield size
        gone = _first_missing(buffer, range(1, n))
        if gone is not None:
            yield 1 - sizes[gone - 1]


ADVERSARIES: dict[AdversaryKind, type[Adversary]] = {
    cls.kind: cls
    for cls in (
        GeometricValues,
        OverfullPair,
        ShrinkingHalves,
        NearUnitStaircase,
        RisingDensities,
        HeavyPairs,
        GoldenPair,
        TwoBinTree,
        HalfCapacityTree,
        ArithmeticSizes,
    )
}


def make_adversary(kind, buffer_capacity: Number, epsilon: Number, growth: Number = 10, **kwargs) -> Adversary:
    """Build a fresh, single-use adversary of the given kind."""
    cls = ADVERSARIES[AdversaryKind.parse(kind)]
    if cls is GeometricValues:
        return cls(buffer_capacity, epsilon, growth=growth, **kwargs)
    return cls(buffer_capacity, epsilon, **kwargs)
