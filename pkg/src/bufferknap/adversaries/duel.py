"""Play an adversary against an algorithm and score the realised sequence."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath

from ..algorithms import OnlineAlgorithm, VariantMismatch
from ..core import (
    BufferTrace,
    Instance,
    PackingResult,
    TraceInvalid,
    competitive_ratio,
    exact_optimum,
    validate_trace,
)
from ..numeric import format_decimal, format_number, format_rational, to_mpf, working_digits
from .kinds import Adversary

Oracle = Callable[..., PackingResult]


@dataclass(frozen=True)
class DuelResult:
    kind: str
    algorithm_id: str
    effective_R: object
    epsilon: Fraction
    instance: Instance
    trace: BufferTrace
    alg_value: Fraction
    opt_value: Fraction
    ratio: object  # Fraction, or math.inf when ALG = 0 < OPT
    theorem_bound: mpmath.mpf
    achieved: bool

    @property
    def rounds(self) -> int:
        return self.instance.n

    def to_dict(self, include_instance: bool = True) -> dict:
        payload = {
            "kind": self.kind,
            "algorithm_id": self.algorithm_id,
            "R": format_rational(self.instance.buffer_capacity),
            "effective_R": format_number(self.effective_R),
            "epsilon": format_rational(self.epsilon),
            "instance_digest": self.instance.digest(),
            "rounds": self.rounds,
            "alg_value": format_rational(self.alg_value),
            "opt_value": format_rational(self.opt_value),
            "ratio": format_decimal(self.ratio),
            "theorem_bound": format_decimal(self.theorem_bound),
            "achieved": self.achieved,
        }
        if include_instance:
            payload["instance"] = self.instance.to_dict()
        return payload


def duel(adversary: Adversary, algorithm: OnlineAlgorithm, oracle: Oracle = exact_optimum) -> DuelResult:
    """Let ``adversary`` build a sequence online against ``algorithm``.

    The adversary sees the full buffer after every round. ALG is the best
    packing of the final buffer into a unit knapsack; OPT the best packing
    of the whole realised sequence. ``achieved`` states whether the ratio
    reaches the construction's bound minus twice its epsilon.
    """
    algorithm.check_variant(adversary.mode, adversary.removability)
    if algorithm.buffer_capacity != adversary.buffer_capacity:
        raise VariantMismatch(
            f"algorithm has R={algorithm.buffer_capacity}, adversary R={adversary.buffer_capacity}"
        )
    algorithm.reset()
    trace = BufferTrace(adversary.buffer_capacity)
    buffer = frozenset()
    while True:
        item = adversary.next_item(buffer)
        if item is None:
            break
        buffer = algorithm.step(item)
        trace.record(buffer)

    instance = Instance(tuple(adversary.emitted), adversary.buffer_capacity, adversary.mode, adversary.removability)
    report = validate_trace(instance, trace)
    if not report.ok:
        raise TraceInvalid(f"{algorithm.algorithm_id} broke the rules: {report.violation} at round {report.round}")

    alg = oracle(instance.items_at(trace.final), 1)
    opt = oracle(instance.items, 1)
    ratio = competitive_ratio(opt.total_value, alg.total_value)
    bound = adversary.theorem_bound
    with mpmath.workdps(working_digits()):
        achieved = ratio == math.inf or to_mpf(ratio) >= bound - 2 * to_mpf(adversary.epsilon)
    return DuelResult(
        kind=adversary.kind.value,
        algorithm_id=algorithm.algorithm_id,
        effective_R=algorithm.effective_capacity,
        epsilon=adversary.epsilon,
        instance=instance,
        trace=trace,
        alg_value=alg.total_value,
        opt_value=opt.total_value,
        ratio=ratio,
        theorem_bound=bound,
        achieved=bool(achieved),
    )
