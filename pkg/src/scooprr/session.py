"""One-call entry points: record a free run, replay a schedule."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass

from .kernel import DEFAULT_BUDGET, Event, Kernel, RunOutcome
from .programs import Scenario
from .schedule import LogicalSchedule, Recorder, Replayer
from .scheduler import FreeRun, ReplayPolicy

Observer = Callable[[Kernel, Event], None]


@dataclass
class RunResult:
    outcome: RunOutcome
    schedule: LogicalSchedule
    kernel: Kernel

    @property
    def status(self) -> str:
        return self.outcome.status


def record(
    scenario: Scenario,
    seed: int,
    *,
    budget: int = DEFAULT_BUDGET,
    observers: Iterable[Observer] = (),
) -> RunResult:
    """Free run under ``seed`` with the recorder attached."""
    recorder = Recorder()
    kernel = Kernel(scenario, FreeRun(seed), recorder=recorder, budget=budget, observers=observers)
    outcome = kernel.run_until_quiescent()
    return RunResult(outcome, outcome.schedule, kernel)


def replay(
    scenario: Scenario,
    schedule: LogicalSchedule,
    *,
    interleave_seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    observers: Iterable[Observer] = (),
) -> RunResult:
    """Replay ``schedule`` while re-recording.

    ``interleave_seed`` varies the physical interleaving; the approval
    order is pinned by the schedule. Raises ReplayDivergence (or its
    IncompleteReplay subclass) when program and schedule disagree.
    """
    gate = Replayer(schedule)
    recorder = Recorder()
    kernel = Kernel(
        scenario,
        ReplayPolicy(gate),
        recorder=recorder,
        interleave_seed=interleave_seed,
        budget=budget,
        observers=observers,
    )
    outcome = kernel.run_until_quiescent()
    gate.assert_complete()
    return RunResult(outcome, outcome.schedule, kernel)
