"""Exception hierarchy shared by the runtime, the schedule layer and the CLI."""

from __future__ import annotations


class ScoopError(Exception):
    """Base class for every error raised by this package."""


class KernelFault(ScoopError):
    """A scenario did something the runtime model forbids."""


class UnknownProcessor(KernelFault):
    pass


class UncontrolledCall(KernelFault):
    """Separate call on a supplier the client has not locked."""


class NoSuchFeature(KernelFault):
    pass


class LostResult(KernelFault):
    pass


class DoubleSynchronization(KernelFault):
    pass


class PreconditionViolation(KernelFault):
    pass


class BudgetExhausted(KernelFault):
    pass


class ReplayDivergence(ScoopError):
    """The program and the replayed schedule disagree."""


class IncompleteReplay(ReplayDivergence):
    def __init__(self, counter: int, total: int) -> None:
        super().__init__(
            f"incomplete replay: stuck at approval {counter} of {total}"
        )
        self.counter = counter
        self.total = total


class MalformedSchedule(ScoopError):
    """A logical schedule (in memory or on disk) violates its invariants.

    ``kind`` is a stable short tag used for diagnostics, ``line`` is the
    1-based trace line when the schedule came from a file.
    """

    def __init__(self, kind: str, message: str, line: int | None = None) -> None:
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{kind}: {message}")
        self.kind = kind
        self.line = line
