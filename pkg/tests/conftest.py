"""Shared brute-force oracles and hypothesis strategies."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from bufferknap.core import Item


def all_subsets(items):
    for k in range(len(items) + 1):
        yield from combinations(items, k)


def subset_key(subset):
    size = sum((e.size for e in subset), Fraction(0))
    return size, tuple(sorted(e.arrival_index for e in subset))


def brute_optimum(items, capacity):
    """Exhaustive knapsack with the library's tie-break (value, then small size, then indices)."""
    best, best_key = (), None
    for subset in all_subsets(list(items)):
        size, indices = subset_key(subset)
        if size > capacity:
            continue
        value = sum((e.value for e in subset), Fraction(0))
        key = (-value, size, indices)
        if best_key is None or key < best_key:
            best, best_key = subset, key
    return frozenset(e.arrival_index for e in best), -best_key[0]


def brute_range(items, lo, hi):
    """Exhaustive search for the smallest subset with lo <= size <= hi."""
    best, best_key = None, None
    for subset in all_subsets(list(items)):
        key = subset_key(subset)
        if lo <= key[0] and (hi is None or key[0] <= hi) and (best_key is None or key < best_key):
            best, best_key = subset, key
    return None if best is None else frozenset(best)


def make_items(pairs):
    return [Item(Fraction(s), Fraction(v), k) for k, (s, v) in enumerate(pairs, start=1)]


sizes = st.integers(1, 1000).map(lambda k: Fraction(k, 1000))
values = st.integers(0, 500).map(lambda k: Fraction(k, 50))


@st.composite
def general_items(draw, max_n=10):
    pairs = draw(st.lists(st.tuples(sizes, values), max_size=max_n))
    return make_items(pairs)


@st.composite
def proportional_sizes(draw, max_n=10):
    return draw(st.lists(sizes, min_size=0, max_size=max_n))


# (adversary kind, R, algorithm id): one duel per lower-bound construction
DUEL_CASES = [
    ("gen-nonrem", Fraction(2), "alg1"),
    ("prop-nonrem-small", Fraction(9, 8), "alg1"),
    ("prop-nonrem-small", Fraction(5, 4), "alg1"),
    ("prop-nonrem-small", Fraction(3, 2), "alg1"),
    ("prop-nonrem-large", Fraction(7, 4), "alg1"),
    ("prop-nonrem-large", Fraction(3), "alg1"),
    ("gen-rem-general", Fraction(3, 2), "alg4"),
    ("gen-rem-general", Fraction(25), "alg2"),
    ("gen-rem-small", Fraction(3, 2), "alg4"),
    ("gen-rem-mid", Fraction(3, 2), "alg4"),
    ("gen-rem-mid", Fraction(7, 4), "alg4"),
    ("prop-rem-i", Fraction(1), "alg5"),
    ("prop-rem-i", Fraction(21, 20), "alg5"),
    ("prop-rem-i", Fraction(6, 5), "alg6"),
    ("prop-rem-ii", Fraction(13, 10), "alg7"),
    ("prop-rem-ii", Fraction(27, 20), "alg7"),
    ("prop-rem-iii", Fraction(3, 2), "alg8"),
    ("prop-rem-iii", Fraction(37, 25), "alg8"),
    ("prop-rem-general", Fraction(6, 5), "alg6"),
    ("prop-rem-general", Fraction(3, 2), "alg8"),
    ("prop-rem-general", Fraction(1), "alg5"),
]
