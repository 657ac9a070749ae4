"""scoop-rr: run, record, replay, verify and fuzz the bundled scenarios.

Exit codes: 0 terminated, 1 fault, 2 deadlocked, 3 replay divergence,
4 verify mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import first_difference, fuzz, schedules_equal
from .analysis.fuzz import FuzzFault
from .errors import MalformedSchedule, ReplayDivergence, ScoopError
from .kernel import DEFAULT_BUDGET
from .programs import SCENARIOS, get_scenario
from .schedule import encode, schedule_hash
from .schedule import trace as tracefile
from .session import RunResult, record, replay

EXIT_OK, EXIT_FAULT, EXIT_DEADLOCK, EXIT_DIVERGED, EXIT_MISMATCH = 0, 1, 2, 3, 4


class CliError(Exception):
    pass


def _param(text: str) -> tuple[str, int]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=INT, got {text!r}")
    try:
        return key.replace("-", "_"), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{key}: {value!r} is not an integer") from None


def _seed(text: str) -> int:
    seed = int(text, 0)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return seed


def _range(text: str) -> range:
    start, sep, stop = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("seed range is START:STOP (stop exclusive)")
    return range(int(start), int(stop))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scoop-rr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help=", ".join(SCENARIOS))
    common.add_argument("-p", "--param", action="append", type=_param, default=[],
                        metavar="KEY=INT", help="scenario parameter, e.g. n_items=5")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--report", choices=("text", "machine"), default="text")

    p = sub.add_parser("run", parents=[common], help="free run without writing a trace")
    p.add_argument("--seed", type=_seed, required=True)

    p = sub.add_parser("record", parents=[common], help="free run, write the logical schedule")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("replay", parents=[common], help="replay a recorded schedule")
    p.add_argument("--trace", type=Path, required=True)
    p.add_argument("--interleave-seed", type=_seed, default=0)
    p.add_argument("--out", type=Path, help="write the re-recorded schedule here")

    p = sub.add_parser("verify", parents=[common], help="record, replay, compare")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--seed", type=_seed)
    src.add_argument("--trace", type=Path, help="check an existing trace instead")
    p.add_argument("--interleave-seed", type=_seed, default=1)

    p = sub.add_parser("fuzz", parents=[common], help="search seeds for distinct schedules")
    p.add_argument("--seeds", type=_range, required=True, metavar="START:STOP")
    p.add_argument("--out", type=Path, help="directory for witness traces")
    return parser


def _scenario(args):
    try:
        return get_scenario(args.scenario, **dict(args.param))
    except KeyError:
        raise CliError(f"unknown scenario {args.scenario!r}") from None
    except TypeError as exc:
        raise CliError(f"bad scenario parameter: {exc}") from None


def _report(args, result: RunResult, out) -> None:
    sched = result.schedule
    report = result.outcome.report
    if args.report == "machine":
        print(f"status {result.status}", file=out)
        print(f"total {sched.total}", file=out)
        print(f"schedule_hash {schedule_hash(sched)}", file=out)
        print(f"steps {result.outcome.steps}", file=out)
        if report is not None:
            blocked = ",".join(map(str, sorted(report.blocked)))
            print(f"blocked {blocked}", file=out)
            cycle = ",".join(map(str, report.cycle)) if report.cycle else "none"
            print(f"cycle {cycle}", file=out)
        return
    print(f"outcome: {result.status} after {result.outcome.steps} steps", file=out)
    print(f"logical schedule (N = {sched.total}):", file=out)
    for p, ivs in sched.per_processor.items():
        print(f"  {p}: {' . '.join(f'[{iv.lower}, {iv.upper}]' for iv in ivs)}", file=out)
    if report is not None:
        print("deadlock:", file=out)
        print(report.describe(), file=out)


def _status_code(result: RunResult) -> int:
    return EXIT_DEADLOCK if result.outcome.deadlocked else EXIT_OK


def cmd_run(args, out) -> int:
    result = record(_scenario(args), args.seed, budget=args.budget)
    _report(args, result, out)
    return _status_code(result)


def cmd_record(args, out) -> int:
    result = record(_scenario(args), args.seed, budget=args.budget)
    if args.out is not None:
        tracefile.write(result.schedule, args.out)
    _report(args, result, out)
    return _status_code(result)


def cmd_replay(args, out) -> int:
    scenario = _scenario(args)
    schedule = tracefile.read(args.trace)
    result = replay(scenario, schedule, interleave_seed=args.interleave_seed, budget=args.budget)
    if args.out is not None:
        tracefile.write(result.schedule, args.out)
    _report(args, result, out)
    return _status_code(result)


def cmd_verify(args, out) -> int:
    scenario = _scenario(args)
    if args.trace is not None:
        original = tracefile.read(args.trace)
        first_status = None
    else:
        first = record(scenario, args.seed, budget=args.budget)
        # through the codec, as a trace file would be
        original = tracefile.decode(encode(first.schedule))
        first_status = first.status
    try:
        second = replay(scenario, original, interleave_seed=args.interleave_seed,
                        budget=args.budget)
    except ReplayDivergence as exc:
        print(f"mismatch: {exc}", file=out)
        return EXIT_MISMATCH
    if not schedules_equal(original, second.schedule):
        print(f"mismatch: {first_difference(original, second.schedule)}", file=out)
        return EXIT_MISMATCH
    if first_status is not None and first_status != second.status:
        print(f"mismatch: outcome {first_status} != {second.status}", file=out)
        return EXIT_MISMATCH
    print(f"verified: {second.status}, N = {original.total}, "
          f"hash {schedule_hash(original)[:16]}", file=out)
    return EXIT_OK


def cmd_fuzz(args, out) -> int:
    _scenario(args)  # validates name and parameters
    summary = fuzz(args.scenario, args.seeds, budget=args.budget, **dict(args.param))
    for line in summary.lines():
        print(line, file=out)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for h, sched in summary.schedules.items():
            name = f"{summary.outcomes[h]}-seed{summary.witness_seeds[h]}-{h[:12]}.trace"
            tracefile.write(sched, args.out / name)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "record": cmd_record,
    "replay": cmd_replay,
    "verify": cmd_verify,
    "fuzz": cmd_fuzz,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ReplayDivergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except FuzzFault as exc:
        print(f"error: fuzz run failed at seed {exc.seed}: {exc.cause}", file=sys.stderr)
        return EXIT_FAULT
    except MalformedSchedule as exc:
        print(f"error: malformed trace: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except (CliError, ScoopError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
