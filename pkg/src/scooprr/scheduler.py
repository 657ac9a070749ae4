"""The arbiter between processors.

Locking requests queue here until their targets are free and their wait
condition holds; approving one is the only critical event of a run. Under
free-run the choice among approvable requests is a seeded draw, under replay
a recorded schedule decides who goes next.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .errors import DoubleSynchronization, KernelFault, ReplayDivergence
from .ids import ProcessorId
from .programs.lang import TRUE, Predicate
from .schedule import Recorder, Replayer
from .state import ProcessorState, Status


@dataclass(eq=False)
class LockingRequest:
    """``targets`` are the handlers to lock; ``bindings`` maps every controlled
    formal argument (including ones the requester already holds) to its
    handler, for evaluating ``wait``. ``serial`` is the per-requester
    submission ordinal, assigned on submit."""

    requester: ProcessorId
    targets: frozenset[ProcessorId]
    wait: Predicate = TRUE
    bindings: Mapping[str, ProcessorId] = field(default_factory=dict)
    env: Mapping[str, Any] = field(default_factory=dict)
    serial: int = 0

    def __repr__(self) -> str:
        tgt = ", ".join(map(str, sorted(self.targets)))
        return f"<LockingRequest #{self.serial} of {self.requester} on {{{tgt}}} wait {self.wait}>"


class FreeRun:
    def __init__(self, seed: int) -> None:
        self.seed = seed
        self.rng = random.Random(seed)


class ReplayPolicy:
    def __init__(self, replayer: Replayer) -> None:
        self.gate = replayer


Listener = Callable[[str, dict], None]


class Arbiter:
    def __init__(
        self,
        processors: Mapping[ProcessorId, ProcessorState],
        policy: FreeRun | ReplayPolicy,
        recorder: Recorder | None = None,
        listener: Listener | None = None,
    ) -> None:
        self.processors = processors
        self.policy = policy
        self.recorder = recorder
        self.pending: list[LockingRequest] = []
        self._serials: dict[ProcessorId, int] = {}
        self._listener = listener or (lambda kind, info: None)

    def submit(self, req: LockingRequest) -> LockingRequest:
        if any(r.requester == req.requester for r in self.pending):
            raise DoubleSynchronization(f"double synchronization by {req.requester}")
        if req.requester in req.targets:
            raise KernelFault(f"{req.requester} cannot lock itself")
        self._serials[req.requester] = self._serials.get(req.requester, 0) + 1
        req.serial = self._serials[req.requester]
        self.pending.append(req)
        self.processors[req.requester].status = Status.BLOCKED_ON_LOCK
        self._listener("submit", {"request": req})
        return req

    def condition_holds(self, req: LockingRequest) -> bool:
        views = {name: self.processors[p].object.snapshot() for name, p in req.bindings.items()}
        return bool(req.wait.test(views, req.env))

    def satisfiable(self, req: LockingRequest) -> bool:
        if any(self.processors[p].locked_by is not None for p in req.targets):
            return False
        return self.condition_holds(req)

    def approve(self, req: LockingRequest) -> None:
        assert self.satisfiable(req), f"approving unsatisfiable {req!r}"
        self._listener("approve", {"request": req})
        for p in req.targets:
            self.processors[p].locked_by = req.requester
        self.pending.remove(req)
        self.processors[req.requester].status = Status.RUNNING
        if self.recorder is not None:
            self.recorder.on_approved(req.requester)

    def approvable(self) -> list[LockingRequest]:
        ready = [r for r in self.pending if self.satisfiable(r)]
        if isinstance(self.policy, ReplayPolicy):
            ready = [r for r in ready if self.policy.gate.is_next(r.requester)]
        return ready

    def schedule_round(self) -> bool:
        """Approve at most one request; report whether one was approved."""
        if isinstance(self.policy, FreeRun):
            ready = [r for r in self.pending if self.satisfiable(r)]
            if not ready:
                return False
            self.approve(self.policy.rng.choice(ready))
            return True
        for req in list(self.pending):
            if self.satisfiable(req) and self.policy.gate.check(req.requester):
                self.approve(req)
                return True
        return False

    def check_divergence(self) -> None:
        """At quiescence under replay, a satisfiable leftover means mismatch."""
        if not isinstance(self.policy, ReplayPolicy):
            return
        stuck = [r for r in self.pending if self.satisfiable(r)]
        if stuck:
            gate = self.policy.gate
            raise ReplayDivergence(
                f"replay divergence at approval {gate.counter_g} of "
                f"{gate.schedule.total}: schedule rejects "
                + ", ".join(str(r.requester) for r in stuck)
            )
