"""Processors, request queues and the cooperative driver.

Every processor is a Python generator that yields at each physical step
boundary. The driver picks one candidate among the runnable processors and,
when some locking request is approvable, the arbiter: each candidate holds a
random priority, the highest one runs, and after each step its priority is
re-drawn with probability ``RESHUFFLE``. This gives bursty interleavings in
which a processor can be starved for a while, which a per-step uniform draw
almost never produces. All draws come from one seeded generator, so a run is
a deterministic function of (scenario, policy, seed); under replay the
interleaving is free but the arbiter is gated.
"""

from __future__ import annotations

import copy
import random
from collections.abc import Callable, Generator, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    BudgetExhausted,
    KernelFault,
    LostResult,
    NoSuchFeature,
    PreconditionViolation,
    UncontrolledCall,
    UnknownProcessor,
)
from .ids import ROOT, ProcessorId
from .programs.lang import (
    TRUE,
    Call,
    Compute,
    Create,
    If,
    Local,
    NonSeparateCall,
    Predicate,
    Query,
    Repeat,
    Routine,
    Scenario,
    SeparateBlock,
    SetField,
    evaluate,
)
from .schedule import LogicalSchedule, Recorder
from .scheduler import Arbiter, FreeRun, LockingRequest, ReplayPolicy
from .state import (
    FeatureRequest,
    ObjectState,
    ProcessorState,
    RequestKind,
    ResultSlot,
    Status,
    freeze,
)

DEFAULT_BUDGET = 1_000_000
RESHUFFLE = 0.2
ARBITER = "arbiter"

Task = Generator[None, None, Any]


class NeedResult(Exception):
    """Raised when an expression reads a result that has not arrived yet."""

    def __init__(self, slot: ResultSlot) -> None:
        super().__init__(slot)
        self.slot = slot


class Locals(dict):
    """Local variables; reading an unfilled result slot raises NeedResult."""

    def __getitem__(self, key: str) -> Any:
        value = super().__getitem__(key)
        if isinstance(value, ResultSlot):
            if not value.filled:
                raise NeedResult(value)
            return value.value
        return value

    def resolved(self) -> dict[str, Any]:
        out = {}
        for k, v in self.items():
            if isinstance(v, ResultSlot):
                if not v.filled:
                    continue
                v = v.value
            out[k] = v
        return out


class Frame:
    """Activation record handed to expressions."""

    def __init__(self, pid: ProcessorId, fields: dict, bindings: Mapping[str, Any]) -> None:
        self.id = pid
        self.fields = fields
        self.locals = Locals(bindings)


@dataclass(frozen=True)
class Event:
    step: int
    kind: str
    pid: ProcessorId
    info: Mapping[str, Any] = field(default_factory=dict)


@dataclass
class RunOutcome:
    status: str  # "terminated" | "deadlocked"
    report: Any = None  # analysis.deadlock.DeadlockReport when deadlocked
    schedule: LogicalSchedule | None = None
    steps: int = 0

    @property
    def deadlocked(self) -> bool:
        return self.status == "deadlocked"


class Kernel:
    def __init__(
        self,
        scenario: Scenario,
        policy: FreeRun | ReplayPolicy,
        *,
        recorder: Recorder | None = None,
        interleave_seed: int = 0,
        budget: int = DEFAULT_BUDGET,
        observers: Iterable[Callable[[Kernel, Event], None]] = (),
    ) -> None:
        self.scenario = scenario
        self.processors: dict[ProcessorId, ProcessorState] = {}
        self.arbiter = Arbiter(self.processors, policy, recorder, self._on_arbiter)
        self.recorder = recorder
        if isinstance(policy, FreeRun):
            self.rng = policy.rng
        else:
            self.rng = random.Random(interleave_seed)
        self.budget = budget
        self.steps = 0
        self.events: list[Event] = []
        self.observers = list(observers)
        self._tasks: dict[ProcessorId, Task] = {}
        self._priority: dict[ProcessorId | str, float] = {}

    # -- events ----------------------------------------------------------

    def _emit(self, kind: str, pid: ProcessorId, **info: Any) -> None:
        event = Event(self.steps, kind, pid, info)
        self.events.append(event)
        for observe in self.observers:
            observe(self, event)

    def _on_arbiter(self, kind: str, info: dict) -> None:
        self._emit(kind, info["request"].requester, **info)

    # -- processors ------------------------------------------------------

    def processor(self, pid: ProcessorId) -> ProcessorState:
        try:
            return self.processors[pid]
        except KeyError:
            raise UnknownProcessor(f"unknown processor {pid}") from None

    def boot(self, *, external: bool = False) -> ProcessorId:
        """Create the root processor.

        Normally the root runs the scenario's root routine without a
        locking request. With ``external=True`` the root has no task and is
        driven by the caller through the public operations (tests use this).
        """
        if ROOT in self.processors:
            raise KernelFault("kernel already booted")
        root = ProcessorState(ROOT, self._instantiate(self.scenario.root_class, {}))
        root.status = Status.RUNNING
        self.processors[ROOT] = root
        self._emit("create", ROOT, cls=self.scenario.root_class)
        if not external:
            routine = self._routine(root, self.scenario.root_routine)
            self._tasks[ROOT] = self._apply(root, routine, (), queued=False)
        return ROOT

    def _instantiate(self, cls: str, init: Mapping[str, Any]) -> ObjectState:
        cdef = self.scenario.classes[cls]
        fields = copy.deepcopy(dict(cdef.fields))
        fields.update(copy.deepcopy(dict(init)))
        return ObjectState(cls, fields)

    def create_processor(
        self, creator: ProcessorId, cls: str, init: Mapping[str, Any] | None = None
    ) -> ProcessorId:
        parent = self.processor(creator)
        if cls not in self.scenario.classes:
            raise KernelFault(f"unknown class {cls}")
        parent.created += 1
        pid = creator.child(parent.created)
        proc = ProcessorState(pid, self._instantiate(cls, init or {}))
        self.processors[pid] = proc
        self._tasks[pid] = self._serve(proc)
        self._emit("create", pid, cls=cls, creator=creator)
        return pid

    def _routine(self, proc: ProcessorState, feature: str) -> Routine:
        routines = self.scenario.classes[proc.object.cls].routines
        try:
            return routines[feature]
        except KeyError:
            raise NoSuchFeature(f"no such feature {proc.object.cls}.{feature}") from None

    # -- public operations ---------------------------------------------

    def enqueue_separate_call(
        self,
        client: ProcessorId,
        supplier: ProcessorId,
        feature: str,
        args: tuple = (),
        wants_result: bool = False,
    ) -> ResultSlot | None:
        cproc = self.processor(client)
        sproc = self.processor(supplier)
        if not cproc.controls(supplier) or sproc.locked_by != client:
            raise UncontrolledCall(
                f"uncontrolled separate call {supplier}.{feature} from {client}"
            )
        slot = ResultSlot(client, supplier) if wants_result else None
        kind = RequestKind.QUERY if wants_result else RequestKind.COMMAND
        req = FeatureRequest(kind, client, feature, tuple(args), slot, sproc.queue.stamp())
        sproc.queue.put(req)
        self._emit("enqueue", supplier, request=req)
        return slot

    def issue_unlock_requests(self, holder: ProcessorId) -> list[ProcessorId]:
        """End the holder's innermost feature application.

        Appends one unlock marker to each handler that application locked;
        each handler releases itself once it dequeues the marker.
        """
        proc = self.processor(holder)
        locked = proc.lock_frames.pop() if proc.lock_frames else set()
        for pid in sorted(locked):
            target = self.processors[pid]
            marker = FeatureRequest(RequestKind.UNLOCK, holder, seq=target.queue.stamp())
            target.queue.put(marker)
            self._emit("enqueue", pid, request=marker)
        return sorted(locked)

    def execute_non_separate(self, pid: ProcessorId, feature: str, args: tuple = ()) -> Any:
        """Apply a feature synchronously on ``pid``'s own stack.

        Only for features that complete without waiting on other processors.
        """
        proc = self.processor(pid)
        routine = self._routine(proc, feature)
        saved = proc.status
        proc.status = Status.RUNNING
        task = self._apply(proc, routine, tuple(args), queued=False)
        try:
            while True:
                next(task)
                if proc.status is not Status.RUNNING:
                    raise KernelFault(f"{proc.object.cls}.{feature} would block")
        except StopIteration as stop:
            return stop.value
        finally:
            proc.status = saved

    def synchronize(
        self,
        client: ProcessorId,
        bindings: Mapping[str, ProcessorId],
        wait: Predicate = TRUE,
    ) -> LockingRequest:
        """Harness form of a synchronization step for an external root."""
        proc = self.processor(client)
        for p in bindings.values():
            self.processor(p)
        req = LockingRequest(
            client, frozenset(bindings.values()), wait, dict(bindings), freeze(proc.object.fields)
        )
        self.arbiter.submit(req)
        self._drive(lambda: proc.status is Status.RUNNING)
        if proc.status is not Status.RUNNING:
            raise KernelFault(f"synchronization of {client} never approved")
        proc.lock_frames.append(set(req.targets))
        return req

    def await_result(self, client: ProcessorId, slot: ResultSlot) -> Any:
        proc = self.processor(client)
        if slot.client != client:
            raise KernelFault(f"slot was issued to {slot.client}, not {client}")
        if slot.filled:
            return slot.value
        if client in self._tasks:
            raise KernelFault("await_result drives external clients only")
        proc.status, proc.awaiting = Status.BLOCKED_ON_FUTURE, slot
        self._drive(lambda: slot.filled)
        proc.status, proc.awaiting = Status.RUNNING, None
        if not slot.filled:
            raise LostResult(f"lost result from {slot.supplier}")
        return slot.value

    # -- driver ----------------------------------------------------------

    def _runnable(self, proc: ProcessorState) -> bool:
        if proc.id not in self._tasks:
            return False
        status = proc.status
        if status is Status.RUNNING:
            return True
        if status is Status.IDLE:
            return len(proc.queue) > 0
        if status is Status.BLOCKED_ON_FUTURE:
            return proc.awaiting.filled
        return False

    def _drive(self, until: Callable[[], bool] | None = None) -> None:
        while until is None or not until():
            candidates: list[ProcessorId | str] = [
                p.id for p in self.processors.values() if self._runnable(p)
            ]
            if self.arbiter.approvable():
                candidates.append(ARBITER)
            if not candidates:
                return
            self.steps += 1
            if self.steps > self.budget:
                raise BudgetExhausted(f"budget exhausted after {self.budget} steps")
            pick = self._pick(candidates)
            if pick == ARBITER:
                self.arbiter.schedule_round()
            else:
                self._resume(self.processors[pick])

    def _pick(self, candidates: list[ProcessorId | str]) -> ProcessorId | str:
        prio = self._priority
        for c in candidates:
            if c not in prio:
                prio[c] = self.rng.random()
        chosen = max(candidates, key=prio.__getitem__)
        if self.rng.random() < RESHUFFLE:
            prio[chosen] = self.rng.random()
        return chosen

    def _resume(self, proc: ProcessorState) -> None:
        try:
            next(self._tasks[proc.id])
        except StopIteration:
            proc.status = Status.DONE
            del self._tasks[proc.id]
            self._emit("done", proc.id)

    def run_until_quiescent(self) -> RunOutcome:
        from .analysis.deadlock import detect_deadlock

        if ROOT not in self.processors:
            self.boot()
        self._drive()
        self.arbiter.check_divergence()
        for proc in self.processors.values():
            slot = proc.awaiting
            if proc.status is Status.BLOCKED_ON_FUTURE and slot is not None:
                if self.processors[slot.supplier].status is Status.DONE:
                    raise LostResult(f"lost result: {slot.supplier} finished without replying")
        schedule = self.recorder.on_terminate() if self.recorder else None
        report = detect_deadlock(self)
        if report is None:
            for proc in self.processors.values():
                proc.status = Status.DONE
            self._emit("terminated", ROOT)
            return RunOutcome("terminated", None, schedule, self.steps)
        self._emit("deadlocked", ROOT)
        return RunOutcome("deadlocked", report, schedule, self.steps)

    def quiescent_and_clean(self) -> bool:
        """True when nothing is pending, blocked or queued."""
        if self.arbiter.pending:
            return False
        for proc in self.processors.values():
            if proc.status in (Status.BLOCKED_ON_FUTURE, Status.BLOCKED_ON_LOCK):
                return False
            if len(proc.queue):
                return False
        return True

    # -- interpreter -----------------------------------------------------

    def _serve(self, proc: ProcessorState) -> Task:
        while True:
            while not len(proc.queue):
                proc.status = Status.IDLE
                yield
            proc.status = Status.RUNNING
            req = proc.queue.get()
            self._emit("dequeue", proc.id, request=req)
            if req.kind is RequestKind.UNLOCK:
                assert proc.locked_by == req.client, (proc.locked_by, req)
                proc.locked_by = None
                self._emit("unlock", proc.id, client=req.client)
                yield
                continue
            routine = self._routine(proc, req.feature)
            result = yield from self._apply(proc, routine, req.args, queued=True, request=req)
            if req.reply is not None:
                req.reply.fill(result)
                self._emit("reply", proc.id, request=req, value=result)
            yield

    def _apply(
        self,
        proc: ProcessorState,
        routine: Routine,
        args: tuple,
        *,
        queued: bool,
        request: FeatureRequest | None = None,
    ) -> Task:
        if len(args) != len(routine.params):
            raise KernelFault(
                f"{routine.name} expects {len(routine.params)} args, got {len(args)}"
            )
        frame = Frame(proc.id, proc.object.fields, dict(zip(routine.params, args)))
        controlled = {name: frame.locals[name] for name in routine.separate}
        yield from self._synchronize(proc, frame, controlled, routine.require, queued)
        proc.call_stack_depth += 1
        self._emit("apply", proc.id, feature=routine.name, args=tuple(args),
                   client=request.client if request else None)
        yield from self._run(proc, frame, routine.steps)
        result = None
        if "Result" in frame.locals:
            result = yield from self._eval(proc, frame, Local("Result"))
        self._emit("applied", proc.id, feature=routine.name, args=tuple(args),
                   client=request.client if request else None)
        proc.call_stack_depth -= 1
        self.issue_unlock_requests(proc.id)
        return result

    def _synchronize(
        self,
        proc: ProcessorState,
        frame: Frame,
        controlled: Mapping[str, Any],
        wait: Predicate,
        queued: bool,
    ) -> Task:
        """Synchronization step; pushes the lock frame of the application.

        A queued request always synchronizes, even with nothing to lock.
        A non-separate call synchronizes only for handlers not already held.
        """
        for name, pid in controlled.items():
            if not isinstance(pid, ProcessorId):
                raise KernelFault(f"controlled argument {name} is not a processor")
            self.processor(pid)
        needed = frozenset(p for p in controlled.values() if not proc.controls(p))
        if queued or needed:
            env = freeze({**proc.object.fields, **frame.locals.resolved()})
            req = LockingRequest(proc.id, needed, wait, dict(controlled), env)
            self.arbiter.submit(req)
            yield
            assert proc.status is Status.RUNNING
        elif wait is not TRUE:
            views = {n: self.processors[p].object.snapshot() for n, p in controlled.items()}
            env = freeze({**proc.object.fields, **frame.locals.resolved()})
            if not wait.test(views, env):
                raise PreconditionViolation(f"{wait} is false on held targets")
        proc.lock_frames.append(set(needed))

    def _eval(self, proc: ProcessorState, frame: Frame, expr: Any) -> Task:
        while True:
            try:
                return evaluate(expr, frame)
            except NeedResult as need:
                yield from self._await(proc, need.slot)

    def _await(self, proc: ProcessorState, slot: ResultSlot) -> Task:
        if slot.filled:
            return
        proc.status, proc.awaiting = Status.BLOCKED_ON_FUTURE, slot
        self._emit("await", proc.id, supplier=slot.supplier)
        yield
        proc.status, proc.awaiting = Status.RUNNING, None

    def _eval_all(self, proc: ProcessorState, frame: Frame, exprs) -> Task:
        values = []
        for expr in exprs:
            values.append((yield from self._eval(proc, frame, expr)))
        return tuple(values)

    def _run(self, proc: ProcessorState, frame: Frame, steps) -> Task:
        for step in steps:
            yield from self._exec(proc, frame, step)
            yield

    def _exec(self, proc: ProcessorState, frame: Frame, step) -> Task:
        if isinstance(step, Compute):
            updates = yield from self._eval(proc, frame, step.update)
            frame.locals.update(updates)
            self._emit("compute", proc.id, label=step.label)
        elif isinstance(step, SetField):
            proc.object.fields[step.name] = yield from self._eval(proc, frame, step.value)
        elif isinstance(step, (Call, Query)):
            supplier = yield from self._eval(proc, frame, Local(step.target))
            args = yield from self._eval_all(proc, frame, step.args)
            slot = self.enqueue_separate_call(
                proc.id, supplier, step.feature, args, isinstance(step, Query)
            )
            if slot is not None:
                frame.locals[step.bind] = slot
        elif isinstance(step, SeparateBlock):
            controlled = {}
            for name in step.targets:
                controlled[name] = yield from self._eval(proc, frame, Local(name))
            yield from self._synchronize(proc, frame, controlled, step.wait, queued=False)
            proc.call_stack_depth += 1
            yield from self._run(proc, frame, step.body)
            proc.call_stack_depth -= 1
            self.issue_unlock_requests(proc.id)
        elif isinstance(step, NonSeparateCall):
            args = yield from self._eval_all(proc, frame, step.args)
            routine = self._routine(proc, step.feature)
            result = yield from self._apply(proc, routine, args, queued=False)
            if step.bind is not None:
                frame.locals[step.bind] = result
        elif isinstance(step, Create):
            init = {}
            for name, expr in step.init.items():
                init[name] = yield from self._eval(proc, frame, expr)
            frame.locals[step.handle] = self.create_processor(proc.id, step.cls, init)
        elif isinstance(step, If):
            cond = yield from self._eval(proc, frame, step.cond)
            yield from self._run(proc, frame, step.then if cond else step.orelse)
        elif isinstance(step, Repeat):
            count = yield from self._eval(proc, frame, step.count)
            for i in range(count):
                if step.index is not None:
                    frame.locals[step.index] = i
                yield from self._run(proc, frame, step.body)
        else:
            raise KernelFault(f"unknown step {step!r}")
