"""Seeded search for outcome-distinct logical schedules."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from ..errors import ScoopError
from ..kernel import DEFAULT_BUDGET
from ..programs import get_scenario
from ..schedule import LogicalSchedule, schedule_hash
from ..session import record


class FuzzFault(ScoopError):
    def __init__(self, seed: int, cause: Exception) -> None:
        super().__init__(f"seed {seed}: {cause}")
        self.seed = seed
        self.cause = cause


@dataclass
class FuzzSummary:
    seeds_run: int = 0
    outcomes: dict[str, str] = field(default_factory=dict)
    witness_seeds: dict[str, int] = field(default_factory=dict)
    schedules: dict[str, LogicalSchedule] = field(default_factory=dict)

    @property
    def distinct_schedules(self) -> int:
        return len(self.outcomes)

    def count(self, status: str) -> int:
        return sum(1 for s in self.outcomes.values() if s == status)

    def lines(self) -> list[str]:
        out = [
            f"seeds_run {self.seeds_run}",
            f"distinct_schedules {self.distinct_schedules}",
            f"terminated {self.count('terminated')}",
            f"deadlocked {self.count('deadlocked')}",
        ]
        for h in sorted(self.outcomes, key=lambda k: self.witness_seeds[k]):
            out.append(f"schedule {h[:16]} {self.outcomes[h]} seed {self.witness_seeds[h]}")
        return out


def fuzz(
    scenario: str, seeds: Iterable[int], *, budget: int = DEFAULT_BUDGET, **params
) -> FuzzSummary:
    prog = get_scenario(scenario, **params)
    summary = FuzzSummary()
    for seed in seeds:
        try:
            result = record(prog, seed, budget=budget)
        except Exception as exc:
            raise FuzzFault(seed, exc) from exc
        summary.seeds_run += 1
        h = schedule_hash(result.schedule)
        if h not in summary.outcomes:
            summary.outcomes[h] = result.status
            summary.witness_seeds[h] = seed
            summary.schedules[h] = result.schedule
    return summary
