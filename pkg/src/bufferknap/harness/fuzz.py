"""Randomised certification of upper bounds.

Every trial draws its own ``random.Random`` stream from a string seed
``"<seed>/<R>/<trial>"``; string seeds are hashed with SHA-512 by the
standard library, so streams are identical on every platform and trials
can be farmed out to worker processes in any order. Sizes and values are
built from integers, never from floats.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath

from ..algorithms import GroupedThreshold, OnlineAlgorithm, ThresholdAlgorithm, make_algorithm
from ..core import DEFAULT_SEARCH_CAP, Instance, Item, Mode, Removability
from ..numeric import Surd, parse_rational, simplify, to_mpf, working_digits
from .simulation import RunReport, run_simulation

KNIFE_GRID = 10**4
KNIFE_OFFSET = 10  # grid steps, so the band is +-1e-3 around each boundary
VALUE_SCALES = (Fraction(1, 100), Fraction(1, 10), Fraction(1), Fraction(10), Fraction(100))


@dataclass(frozen=True)
class FuzzConfig:
    trials: int
    n_max: int
    seed: int
    capacities: tuple
    mode: Mode = Mode.PROPORTIONAL
    removability: Removability = Removability.REMOVABLE
    knife_edge: bool = True
    denominator_bound: int = 1000

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not 1 <= self.n_max <= min(16, DEFAULT_SEARCH_CAP):
            raise ValueError("n_max must lie in [1, 16]")
        if not 1 <= self.denominator_bound <= 10**4:
            raise ValueError("denominator_bound must lie in [1, 10^4]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "capacities", tuple(parse_rational(R) for R in self.capacities))
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        object.__setattr__(self, "removability", Removability.parse(self.removability))


@dataclass
class FuzzResult:
    algorithm_id: str
    runs: int = 0
    worst: RunReport | None = None
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        worst = None
        if self.worst is not None:
            worst = self.worst.to_dict()
            worst["instance"] = self.worst.instance.to_dict()
        return {
            "algorithm_id": self.algorithm_id,
            "runs": self.runs,
            "violation_count": len(self.violations),
            "worst": worst,
            "violations": [dict(report.to_dict(), instance=report.instance.to_dict()) for report in self.violations],
        }


# --- boundaries worth probing -------------------------------------------
def _grid_point(value) -> Fraction:
    """Nearest multiple of 1/KNIFE_GRID at or below ``value``."""
    if isinstance(value, Surd):
        return value.rational_below(KNIFE_GRID)
    if isinstance(value, Fraction):
        return Fraction((value * KNIFE_GRID).__floor__(), KNIFE_GRID)
    with mpmath.workdps(working_digits()):
        return Fraction(int(mpmath.floor(value * KNIFE_GRID)), KNIFE_GRID)


def size_boundaries(algorithm: OnlineAlgorithm) -> list[Fraction]:
    """Grid approximations of the sizes at which the algorithm changes its mind."""
    R = algorithm.effective_capacity
    raw: list = []
    if isinstance(algorithm, ThresholdAlgorithm):
        params = algorithm.params
        raw += params.boundary_values + [params.witness_low, simplify(R - params.threshold)]
    elif isinstance(algorithm, GroupedThreshold):
        eps = algorithm.grouping.epsilon
        raw += [eps, eps * eps, Fraction(1, 2)]
    else:
        raw += [simplify(R - 1), Fraction(1, 2), simplify(R / 2), simplify(R / 3)]
    edges = set()
    for value in raw:
        for candidate in (value, 1 - value):
            point = _grid_point(candidate)
            if 0 < point <= 1:
                edges.add(point)
    return sorted(edges)


def value_boundaries(algorithm: OnlineAlgorithm) -> list[Fraction]:
    if not isinstance(algorithm, GroupedThreshold):
        return []
    with mpmath.workdps(working_digits()):
        base = 1 + algorithm.grouping.epsilon
        return [_grid_point(base**j) for j in range(-12, 13) if base**j * KNIFE_GRID >= 2]


# --- sampling ------------------------------------------------------------
class InstanceSampler:
    """Draws instances for one (config, algorithm) pair."""

    def __init__(self, config: FuzzConfig, algorithm: OnlineAlgorithm):
        self.config = config
        self.capacity = algorithm.buffer_capacity
        self.size_edges = size_boundaries(algorithm) if config.knife_edge else []
        self.value_edges = value_boundaries(algorithm) if config.knife_edge else []

    def _uniform_size(self, rng: random.Random) -> Fraction:
        bound = self.config.denominator_bound
        return Fraction(rng.randint(1, bound), bound)

    def _near(self, rng: random.Random, anchor: Fraction) -> Fraction:
        offset = Fraction(rng.randint(-KNIFE_OFFSET, KNIFE_OFFSET), KNIFE_GRID)
        return min(max(anchor + offset, Fraction(1, KNIFE_GRID)), Fraction(1))

    def size(self, rng: random.Random) -> Fraction:
        if self.size_edges and rng.random() < 0.5:
            return self._near(rng, rng.choice(self.size_edges))
        return self._uniform_size(rng)

    def value(self, rng: random.Random, size: Fraction) -> Fraction:
        roll = rng.random()
        if roll < 0.02:
            return Fraction(0)
        if self.value_edges and roll < 0.4:
            anchor = rng.choice(self.value_edges)
            return max(anchor + Fraction(rng.randint(-KNIFE_OFFSET, KNIFE_OFFSET), KNIFE_GRID), Fraction(0))
        if roll < 0.55:
            # density close to one, so value and size orders compete
            return size * Fraction(rng.randint(90, 110), 100)
        bound = self.config.denominator_bound
        return Fraction(rng.randint(1, bound), bound) * rng.choice(VALUE_SCALES)

    def instance(self, rng: random.Random) -> Instance:
        n = rng.randint(1, self.config.n_max)
        items = []
        for index in range(1, n + 1):
            size = self.size(rng)
            value = size if self.config.mode is Mode.PROPORTIONAL else self.value(rng, size)
            items.append(Item(size, value, index))
        return Instance(tuple(items), self.capacity, self.config.mode, self.config.removability)


def trial_rng(seed: int, capacity: Fraction, trial: int) -> random.Random:
    return random.Random(f"{seed}/{capacity}/{trial}")


# --- driving ------------------------------------------------------------
def _rank(report: RunReport, position: tuple) -> tuple:
    ratio = report.ratio
    with mpmath.workdps(working_digits()):
        key = mpmath.inf if ratio == float("inf") else to_mpf(ratio)
    # larger ratio first; among equals the earliest (capacity, trial) wins
    return (key, tuple(-p for p in position))


def _run_block(
    config: FuzzConfig, algorithm_id: str, clamp: bool, proven_only: bool, R_position: int, start: int, stop: int
):
    R = config.capacities[R_position]
    algorithm = make_algorithm(algorithm_id, R, clamp=clamp, proven_only=proven_only)
    algorithm.check_variant(config.mode, config.removability)
    sampler = InstanceSampler(config, algorithm)
    worst, worst_key, violations = None, None, []
    for trial in range(start, stop):
        instance = sampler.instance(trial_rng(config.seed, R, trial))
        report = run_simulation(algorithm, instance, keep_instance=True)
        key = _rank(report, (R_position, trial))
        if worst_key is None or key > worst_key:
            worst, worst_key = report, key
        if not report.within_bound:
            violations.append(((R_position, trial), report))
    return stop - start, worst, worst_key, violations


def fuzz_upper_bound(
    config: FuzzConfig,
    algorithm_id: str,
    *,
    clamp: bool = True,
    proven_only: bool = True,
    workers: int = 1,
    block_size: int = 500,
) -> FuzzResult:
    """Run ``config.trials`` random instances per capacity and collect bound violations."""
    blocks = [
        (config, algorithm_id, clamp, proven_only, position, start, min(start + block_size, config.trials))
        for position in range(len(config.capacities))
        for start in range(0, config.trials, block_size)
    ]
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_block, *zip(*blocks)))
    else:
        outputs = [_run_block(*block) for block in blocks]
    return _merge(algorithm_id, outputs)


def _merge(algorithm_id: str, outputs: Iterable) -> FuzzResult:
    result = FuzzResult(algorithm_id)
    best_key = None
    found = []
    for runs, worst, key, violations in outputs:
        result.runs += runs
        if worst is not None and (best_key is None or key > best_key):
            result.worst, best_key = worst, key
        found.extend(violations)
    result.violations = [report for _, report in sorted(found, key=lambda pair: pair[0])]
    return result
