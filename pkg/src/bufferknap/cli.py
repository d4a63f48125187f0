"""Command-line entry point: ``bufferknap {run,fuzz,duel,table}``.

Exit codes: 0 when every bound is respected (or every duel reaches its
target), 1 when a violation is found, 2 on malformed input or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .adversaries import ParamOutOfRange, duel, make_adversary
from .algorithms import OnlineAlgorithm, RegimeViolation, Unsupported, VariantMismatch, make_algorithm, select_algorithm
from .core import Instance, InvalidInstance, Removability, SearchCapExceeded
from .harness import FuzzConfig, fuzz_upper_bound, linear_grid, parse_variant, ratio_table, run_simulation, table_csv
from .numeric import parse_rational

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
AUTO = "auto"

USAGE_ERRORS = (
    OSError,
    ValueError,
    TypeError,
    KeyError,
    Unsupported,
    RegimeViolation,
    VariantMismatch,
    InvalidInstance,
    SearchCapExceeded,
    ParamOutOfRange,
)


def _choose_algorithm(algorithm_id: str, mode, removability, R, proven_only: bool = True) -> OnlineAlgorithm:
    if algorithm_id != AUTO:
        return make_algorithm(algorithm_id, R, proven_only=proven_only)
    try:
        selection = select_algorithm(mode, removability, R)
    except Unsupported:
        # without removal the greedy is the only legal player, even unbounded
        if Removability.parse(removability) is Removability.NONREMOVABLE:
            return make_algorithm("alg1", R)
        raise
    return make_algorithm(selection.algorithm_id, R)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _json(payload) -> str:
    return json.dumps(payload, indent=2)


def cmd_run(args) -> int:
    instance = Instance.from_dict(json.loads(Path(args.instance).read_text()))
    algorithm = _choose_algorithm(args.alg, instance.mode, instance.removability, instance.buffer_capacity)
    report = run_simulation(algorithm, instance)
    _emit(_json(report.to_dict()), args.out)
    return EXIT_OK if report.within_bound else EXIT_VIOLATION


def cmd_fuzz(args) -> int:
    mode, removability = parse_variant(args.variant)
    capacities = [parse_rational(r) for r in args.r]
    # with automatic selection, group the grid by the algorithm each R picks
    by_algorithm: dict[str, list] = {}
    for R in capacities:
        algorithm_id = _choose_algorithm(args.alg, mode, removability, R, not args.unproven).algorithm_id
        by_algorithm.setdefault(algorithm_id, []).append(R)
    results = []
    for algorithm_id, grid in by_algorithm.items():
        config = FuzzConfig(
            trials=args.trials,
            n_max=args.n_max,
            seed=args.seed,
            capacities=tuple(grid),
            mode=mode,
            removability=removability,
            knife_edge=args.knife_edge,
            denominator_bound=args.denominator_bound,
        )
        results.append(fuzz_upper_bound(config, algorithm_id, proven_only=not args.unproven, workers=args.workers))
    payload = {
        "variant": args.variant,
        "seed": args.seed,
        "trials": args.trials,
        "n_max": args.n_max,
        "knife_edge": args.knife_edge,
        "results": [result.to_dict() for result in results],
    }
    _emit(_json(payload), args.out)
    return EXIT_OK if all(result.ok for result in results) else EXIT_VIOLATION


def cmd_duel(args) -> int:
    R = parse_rational(args.r)
    adversary = make_adversary(args.kind, R, parse_rational(args.eps), growth=parse_rational(args.c))
    algorithm = _choose_algorithm(args.alg, adversary.mode, adversary.removability, R)
    result = duel(adversary, algorithm)
    _emit(_json(result.to_dict(include_instance=args.include_instance)), args.out)
    return EXIT_OK if result.achieved else EXIT_VIOLATION


def cmd_table(args) -> int:
    rows = ratio_table(args.variant, linear_grid(args.r_min, args.r_max, args.steps))
    _emit(table_csv(rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bufferknap", description="Online knapsack with a resizable buffer.")
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
        sub.set_defaults(handler=handler)
        return sub

    run = add("run", cmd_run, "run one algorithm on an instance file")
    run.add_argument("--instance", required=True, metavar="FILE")
    run.add_argument("--alg", default=AUTO, help="algorithm id (alg1, alg2, alg4..alg8) or 'auto'")

    fuzz = add("fuzz", cmd_fuzz, "randomised check of an upper bound")
    fuzz.add_argument("--variant", required=True, help="e.g. prop-removable, gen-removable, prop-nonremovable")
    fuzz.add_argument("--r", action="append", required=True, metavar="P/Q", help="buffer size; repeat for a grid")
    fuzz.add_argument("--trials", type=int, default=1000)
    fuzz.add_argument("--n-max", type=int, default=12)
    fuzz.add_argument("--seed", type=int, default=7)
    fuzz.add_argument("--knife-edge", action="store_true", help="mix in sizes near the class boundaries")
    fuzz.add_argument("--denominator-bound", type=int, default=1000)
    fuzz.add_argument("--alg", default=AUTO)
    fuzz.add_argument("--workers", type=int, default=1)
    fuzz.add_argument("--unproven", action="store_true", help="let alg8 run below its proven range (down to sqrt 2)")

    duel_cmd = add("duel", cmd_duel, "play a lower-bound adversary against an algorithm")
    duel_cmd.add_argument("--kind", required=True)
    duel_cmd.add_argument("--r", required=True, metavar="P/Q")
    duel_cmd.add_argument("--eps", default="1/100", metavar="P/Q")
    duel_cmd.add_argument("--alg", default=AUTO)
    duel_cmd.add_argument("--c", default="10", metavar="P/Q", help="value growth factor for gen-nonrem")
    duel_cmd.add_argument("--include-instance", action="store_true", help="embed the realised instance")

    table = add("table", cmd_table, "lower and upper bounds over a grid of R, as CSV")
    table.add_argument("--variant", required=True)
    table.add_argument("--r-min", required=True, metavar="P/Q")
    table.add_argument("--r-max", required=True, metavar="P/Q")
    table.add_argument("--steps", type=int, required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return EXIT_OK if stop.code == 0 else EXIT_USAGE
    try:
        return args.handler(args)
    except USAGE_ERRORS as error:
        print(f"bufferknap: error: {error}", file=sys.stderr)
        return EXIT_USAGE
