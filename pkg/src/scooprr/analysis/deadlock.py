"""Wait-for analysis of a kernel that stopped making progress."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import networkx as nx

from ..ids import ProcessorId
from ..scheduler import LockingRequest
from ..state import ResultSlot, Status

if TYPE_CHECKING:
    from ..kernel import Kernel


@dataclass(frozen=True)
class DeadlockReport:
    """Why a run stopped.

    ``blocked`` maps each stuck processor to what it waits on: a pending
    locking request or an unfilled result slot. ``wait_for_edges`` are
    (requester, lock holder) pairs. ``cycle`` walks the graph whose nodes are
    processors in both roles (a requester points at each handler it wants,
    a locked handler points at its holder); it starts at the smallest id and
    is None for pure condition starvation.
    """

    blocked: Mapping[ProcessorId, Union[LockingRequest, ResultSlot]]
    wait_for_edges: frozenset[tuple[ProcessorId, ProcessorId]]
    cycle: tuple[ProcessorId, ...] | None

    def describe(self) -> str:
        lines = []
        for p, what in sorted(self.blocked.items()):
            if isinstance(what, LockingRequest):
                targets = ", ".join(map(str, sorted(what.targets))) or "-"
                lines.append(f"  {p} waits to lock {{{targets}}} (wait: {what.wait})")
            else:
                lines.append(f"  {p} waits for a result from {what.supplier}")
        if self.cycle:
            lines.append("  cycle: " + " -> ".join(map(str, self.cycle + self.cycle[:1])))
        else:
            lines.append("  no lock cycle (condition wait)")
        return "\n".join(lines)


def normalize_cycle(cycle: list[ProcessorId]) -> tuple[ProcessorId, ...]:
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


def detect_deadlock(kernel: Kernel) -> DeadlockReport | None:
    if kernel.quiescent_and_clean():
        return None
    procs = kernel.processors
    graph = nx.DiGraph()
    blocked: dict[ProcessorId, Union[LockingRequest, ResultSlot]] = {}
    edges = set()
    for req in kernel.arbiter.pending:
        blocked[req.requester] = req
        for target in req.targets:
            holder = procs[target].locked_by
            if holder is not None:
                edges.add((req.requester, holder))
                graph.add_edge(req.requester, target)
                graph.add_edge(target, holder)
    for proc in procs.values():
        if proc.status is Status.BLOCKED_ON_FUTURE and proc.awaiting is not None:
            blocked[proc.id] = proc.awaiting
            graph.add_edge(proc.id, proc.awaiting.supplier)
    cycles = [normalize_cycle(c) for c in nx.simple_cycles(graph)]
    cycle = min(cycles, key=lambda c: (len(c), c)) if cycles else None
    return DeadlockReport(blocked, frozenset(edges), cycle)
