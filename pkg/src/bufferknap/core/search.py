"""Exact subset searches: the offline knapsack optimum and subset-in-range.

Both searches scale sizes (and values) to integers over a common
denominator, split the pool into a low-index half and a high-index half,
and enumerate each half's subsets (meet in the middle). Every answer is
unique under the same total order: best objective first, then the
smaller total size, then the lexicographically smaller sorted tuple of
arrival indices.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..numeric import Number, ceil_exact, floor_exact
from .model import Item

DEFAULT_SEARCH_CAP = 24
DEFAULT_NODE_BUDGET = 2_000_000


class SearchCapExceeded(RuntimeError):
    """The pool is too large for exact enumeration; shrink the instance."""


@dataclass(frozen=True)
class PackingResult:
    subset: frozenset
    total_size: Fraction
    total_value: Fraction

    @classmethod
    def of(cls, chosen: Iterable[Item]) -> "PackingResult":
        chosen = list(chosen)
        return cls(
            frozenset(item.arrival_index for item in chosen),
            sum((item.size for item in chosen), Fraction(0)),
            sum((item.value for item in chosen), Fraction(0)),
        )


def _pool(items: Iterable[Item]) -> list[Item]:
    pool = sorted(items, key=lambda item: item.arrival_index)
    for left, right in zip(pool, pool[1:]):
        if left.arrival_index == right.arrival_index:
            raise ValueError(f"duplicate arrival index {left.arrival_index} in search pool")
    return pool


def _scaled(numbers: list[Fraction]) -> tuple[int, list[int]]:
    scale = math.lcm(*(x.denominator for x in numbers)) if numbers else 1
    return scale, [x.numerator * (scale // x.denominator) for x in numbers]


def _enumerate(weights: list[int], limit: int) -> tuple[list[int], list[int]]:
    """All subset sums of ``weights`` that stay <= limit, with bitmasks."""
    sums, masks = [0], [0]
    for bit, weight in enumerate(weights):
        flag = 1 << bit
        extra_sums, extra_masks = [], []
        for total, mask in zip(sums, masks):
            grown = total + weight
            if grown <= limit:
                extra_sums.append(grown)
                extra_masks.append(mask | flag)
        sums += extra_sums
        masks += extra_masks
    return sums, masks


def _members(mask: int, block: list[int]) -> tuple[int, ...]:
    out = []
    bit = 0
    while mask:
        if mask & 1:
            out.append(block[bit])
        mask >>= 1
        bit += 1
    return tuple(out)


def _enumerate_pairs(sizes: list[int], values: list[int], limit: int):
    sums, values_out, masks = [0], [0], [0]
    for bit, (size, value) in enumerate(zip(sizes, values)):
        flag = 1 << bit
        add_s, add_v, add_m = [], [], []
        for total, gained, mask in zip(sums, values_out, masks):
            grown = total + size
            if grown <= limit:
                add_s.append(grown)
                add_v.append(gained + value)
                add_m.append(mask | flag)
        sums += add_s
        values_out += add_v
        masks += add_m
    return sums, values_out, masks


def offline_optimum(
    items: Iterable[Item], capacity: Number, *, search_cap: int = DEFAULT_SEARCH_CAP
) -> PackingResult:
    """Maximum-value subset of ``items`` with total size <= ``capacity``."""
    pool = _pool(items)
    if capacity < 0:
        raise ValueError("capacity must be non-negative")
    if len(pool) > search_cap:
        raise SearchCapExceeded(f"{len(pool)} items exceed the search cap of {search_cap}")
    if not pool:
        return PackingResult(frozenset(), Fraction(0), Fraction(0))

    size_scale, sizes = _scaled([item.size for item in pool])
    _, values = _scaled([item.value for item in pool])
    limit = floor_exact(capacity * size_scale)
    # zero-value or oversized items never belong to the tie-broken optimum
    usable = [k for k in range(len(pool)) if values[k] > 0 and sizes[k] <= limit]
    half = len(usable) // 2
    low, high = usable[:half], usable[half:]
    low_ids = [pool[k].arrival_index for k in low]
    high_ids = [pool[k].arrival_index for k in high]

    left_s, left_v, left_m = _enumerate_pairs([sizes[k] for k in low], [values[k] for k in low], limit)
    right_s, right_v, right_m = _enumerate_pairs([sizes[k] for k in high], [values[k] for k in high], limit)

    order = sorted(range(len(right_s)), key=right_s.__getitem__)
    sorted_sizes = [right_s[j] for j in order]
    running_best = []
    best = -1
    for j in order:
        best = max(best, right_v[j])
        running_best.append(best)

    target = 0
    for s_a, v_a in zip(left_s, left_v):
        j = bisect_right(sorted_sizes, limit - s_a) - 1
        target = max(target, v_a + running_best[j])

    # smallest size at the optimal value, and for each (value, size) the
    # lexicographically first right-half subset
    best_right: dict[tuple[int, int], int] = {}
    smallest_by_value: dict[int, int] = {}
    for s_b, v_b, m_b in zip(right_s, right_v, right_m):
        key = (v_b, s_b)
        incumbent = best_right.get(key)
        if incumbent is None or _members(m_b, high_ids) < _members(incumbent, high_ids):
            best_right[key] = m_b
        if s_b < smallest_by_value.get(v_b, limit + 1):
            smallest_by_value[v_b] = s_b

    best_size = None
    for s_a, v_a in zip(left_s, left_v):
        s_b = smallest_by_value.get(target - v_a)
        if s_b is not None and s_a + s_b <= limit:
            if best_size is None or s_a + s_b < best_size:
                best_size = s_a + s_b

    best_members = None
    for s_a, v_a, m_a in zip(left_s, left_v, left_m):
        m_b = best_right.get((target - v_a, best_size - s_a))
        if m_b is None:
            continue
        members = _members(m_a, low_ids) + _members(m_b, high_ids)
        if best_members is None or members < best_members:
            best_members = members

    by_index = {item.arrival_index: item for item in pool}
    return PackingResult.of(by_index[i] for i in best_members)


def best_packable_subset(
    buffer: Iterable[Item], capacity: Number = 1, *, search_cap: int = DEFAULT_SEARCH_CAP
) -> PackingResult:
    """The knapsack filled from the final buffer: same contract as the optimum."""
    return offline_optimum(buffer, capacity, search_cap=search_cap)


def find_subset_in_range(
    buffer: Iterable[Item],
    lo: Number,
    hi: Number | None,
    *,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> frozenset | None:
    """Smallest-size subset with lo <= size <= hi, or None.

    ``lo`` and ``hi`` may be irrational surds; ``hi=None`` means no upper
    limit. Ties in size go to the lexicographically first index tuple.
    """
    pool = _pool(buffer)
    if len(pool) > search_cap:
        raise SearchCapExceeded(f"{len(pool)} items exceed the search cap of {search_cap}")
    if hi is not None and lo > hi:
        raise ValueError("empty range: lo > hi")
    scale, sizes = _scaled([item.size for item in pool])
    everything = sum(sizes)
    lo_int = ceil_exact(lo * scale)
    hi_int = everything if hi is None else min(floor_exact(hi * scale), everything)
    if lo_int > hi_int:
        return None
    if lo_int <= 0:
        return frozenset()

    usable = [k for k in range(len(pool)) if sizes[k] <= hi_int]
    half = len(usable) // 2
    low, high = usable[:half], usable[half:]
    low_ids = [pool[k].arrival_index for k in low]
    high_ids = [pool[k].arrival_index for k in high]

    left_s, left_m = _enumerate([sizes[k] for k in low], hi_int)
    right_s, right_m = _enumerate([sizes[k] for k in high], hi_int)
    first_mask: dict[int, int] = {}
    for s_b, m_b in zip(right_s, right_m):
        incumbent = first_mask.get(s_b)
        if incumbent is None or _members(m_b, high_ids) < _members(incumbent, high_ids):
            first_mask[s_b] = m_b
    right_sums = sorted(first_mask)

    best_total, best_members = None, None
    for s_a, m_a in zip(left_s, left_m):
        j = bisect_left(right_sums, lo_int - s_a)
        if j == len(right_sums):
            continue
        total = s_a + right_sums[j]
        if total > hi_int or (best_total is not None and total > best_total):
            continue
        members = _members(m_a, low_ids) + _members(first_mask[right_sums[j]], high_ids)
        if best_total is None or total < best_total or members < best_members:
            best_total, best_members = total, members
    if best_members is None:
        return None
    by_index = {item.arrival_index: item for item in pool}
    return frozenset(by_index[i] for i in best_members)


def exact_optimum(
    items: Iterable[Item],
    capacity: Number,
    *,
    search_cap: int = DEFAULT_SEARCH_CAP,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> PackingResult:
    """Exact optimum for pools of any length.

    Small pools go to :func:`offline_optimum`. Longer pools (the adversary
    sequences of some lower-bound proofs run to hundreds of thousands of
    items) are solved by enumerating how many items of each distinct size
    to take; within a size class the most valuable items are always the
    right ones. The enumeration is exact and gives up with
    ``SearchCapExceeded`` once ``node_budget`` partial choices are spent.
    """
    pool = _pool(items)
    if len(pool) <= search_cap:
        return offline_optimum(pool, capacity, search_cap=search_cap)
    return _size_class_optimum(pool, capacity, node_budget)


def _size_class_optimum(pool: list[Item], capacity: Number, node_budget: int) -> PackingResult:
    size_scale, sizes = _scaled([item.size for item in pool])
    _, values = _scaled([item.value for item in pool])
    limit = floor_exact(capacity * size_scale)

    members_by_size: dict[int, list[tuple[int, int]]] = {}
    for item, size, value in zip(pool, sizes, values):
        if value > 0 and size <= limit:
            members_by_size.setdefault(size, []).append((-value, item.arrival_index))
    if len(members_by_size) > 900:
        raise SearchCapExceeded(f"{len(members_by_size)} distinct sizes is too many for class enumeration")

    class_sizes = sorted(members_by_size, reverse=True)
    ranked = []
    prefix_values = []
    for size in class_sizes:
        entries = sorted(members_by_size[size])
        ranked.append([index for _, index in entries])
        running = [0]
        for negative_value, _ in entries:
            running.append(running[-1] - negative_value)
        prefix_values.append(running)
    smallest_after = [0] * (len(class_sizes) + 1)
    smallest_after[-1] = limit + 1
    for position in range(len(class_sizes) - 1, -1, -1):
        smallest_after[position] = min(class_sizes[position], smallest_after[position + 1])

    counts = [0] * len(class_sizes)
    best = {"value": -1, "size": 0, "members": None, "nodes": 0}

    def settle(value: int, used: int):
        if value < best["value"] or (value == best["value"] and used > best["size"]):
            return
        members = tuple(sorted(i for position, c in enumerate(counts) for i in ranked[position][:c]))
        if (
            value > best["value"]
            or used < best["size"]
            or best["members"] is None
            or members < best["members"]
        ):
            best.update(value=value, size=used, members=members)

    def descend(position: int, room: int, value: int):
        best["nodes"] += 1
        if best["nodes"] > node_budget:
            raise SearchCapExceeded(f"class enumeration exceeded {node_budget} nodes")
        if position == len(class_sizes) or room < smallest_after[position]:
            settle(value, limit - room)
            return
        size = class_sizes[position]
        most = min(len(ranked[position]), room // size)
        for count in range(most, -1, -1):
            counts[position] = count
            descend(position + 1, room - count * size, value + prefix_values[position][count])
        counts[position] = 0

    descend(0, limit, 0)
    by_index = {item.arrival_index: item for item in pool}
    return PackingResult.of(by_index[i] for i in best["members"])
