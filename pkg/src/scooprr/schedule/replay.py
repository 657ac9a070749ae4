"""Gate that enforces a recorded approval order."""

from __future__ import annotations

from ..errors import IncompleteReplay
from ..ids import ProcessorId
from .intervals import LogicalSchedule


class Replayer:
    """``counter_g`` is the number of the approval the scheduler wants next."""

    def __init__(self, schedule: LogicalSchedule) -> None:
        self.schedule = schedule.validate()
        self.counter_g = 1

    def is_next(self, p: ProcessorId) -> bool:
        """Side-effect-free form of :meth:`check`."""
        return self.schedule.intervals(p).contains(self.counter_g)

    def check(self, p: ProcessorId) -> bool:
        """True (Ok) advances the counter; False (NotOk) leaves it alone."""
        if self.is_next(p):
            self.counter_g += 1
            return True
        return False

    @property
    def complete(self) -> bool:
        return self.counter_g == self.schedule.total + 1

    def assert_complete(self) -> None:
        if not self.complete:
            raise IncompleteReplay(self.counter_g, self.schedule.total)
