"""Single simulation runs and their reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from ..algorithms import OnlineAlgorithm, algorithm_bound, algorithm_guarantee
from ..core import (
    Instance,
    Mode,
    TraceInvalid,
    best_packable_subset,
    competitive_ratio,
    offline_optimum,
    validate_trace,
)
from ..numeric import format_decimal, format_number, format_rational, to_mpf, working_digits

ACCEPTANCE_MARGIN = mpmath.mpf("1e-9")


@lru_cache(maxsize=256)
def _bound_and_guarantee(algorithm_id: str, effective_capacity, mode: Mode):
    return algorithm_bound(algorithm_id, effective_capacity, mode), algorithm_guarantee(
        algorithm_id, effective_capacity, mode
    )


def within(ratio, bound) -> bool:
    """ratio <= bound + 1e-9, evaluated at the working precision."""
    if bound == mpmath.inf:
        return True
    if ratio == math.inf:
        return False
    with mpmath.workdps(working_digits()):
        return to_mpf(ratio) <= bound + ACCEPTANCE_MARGIN


@dataclass(frozen=True)
class RunReport:
    instance_digest: str
    algorithm_id: str
    effective_R: object
    alg_value: Fraction
    opt_value: Fraction
    ratio: object  # Fraction, or math.inf
    theoretical_bound: mpmath.mpf
    within_bound: bool
    guaranteed_regime: bool
    instance: Instance | None = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "instance_digest": self.instance_digest,
            "algorithm_id": self.algorithm_id,
            "effective_R": format_number(self.effective_R),
            "alg_value": format_rational(self.alg_value),
            "opt_value": format_rational(self.opt_value),
            "ratio": format_decimal(self.ratio),
            "theoretical_bound": format_decimal(self.theoretical_bound),
            "within_bound": self.within_bound,
            "guaranteed_regime": self.guaranteed_regime,
        }


def run_simulation(algorithm: OnlineAlgorithm, instance: Instance, keep_instance: bool = False) -> RunReport:
    """Run ``algorithm`` on ``instance``, check the trace, and score it against OPT."""
    trace = algorithm.run(instance)
    verdict = validate_trace(instance, trace)
    if not verdict.ok:
        raise TraceInvalid(
            f"{algorithm.algorithm_id} produced an illegal trace: {verdict.violation} "
            f"at round {verdict.round} ({verdict.detail})"
        )
    alg = best_packable_subset(instance.items_at(trace.final), 1)
    opt = offline_optimum(instance.items, 1)
    ratio = competitive_ratio(opt.total_value, alg.total_value)
    bound, guaranteed = _bound_and_guarantee(algorithm.algorithm_id, algorithm.effective_capacity, instance.mode)
    return RunReport(
        instance_digest=instance.digest(),
        algorithm_id=algorithm.algorithm_id,
        effective_R=algorithm.effective_capacity,
        alg_value=alg.total_value,
        opt_value=opt.total_value,
        ratio=ratio,
        theoretical_bound=bound,
        within_bound=within(ratio, bound),
        guaranteed_regime=guaranteed,
        instance=instance if keep_instance else None,
    )
