"""Recording approvals as per-processor interval lists."""

from __future__ import annotations

from ..ids import ProcessorId
from .intervals import Interval, IntervalList, LogicalSchedule


class Recorder:
    """Scheduler hook that turns the approval stream into a logical schedule.

    ``counter_g`` numbers approvals globally. For each processor, ``base_l``
    holds the global counter value at which its current interval started and
    ``counter_l`` how many of its approvals that interval holds so far; absent
    keys mean "undefined". The open interval of ``p`` is therefore
    ``[base_l[p] + 1, base_l[p] + counter_l[p]]``.
    """

    def __init__(self) -> None:
        self.counter_g = 0
        self.counter_l: dict[ProcessorId, int] = {}
        self.base_l: dict[ProcessorId, int] = {}
        self.intervals: dict[ProcessorId, list[Interval]] = {}
        self._result: LogicalSchedule | None = None

    def _open_interval(self, p: ProcessorId) -> Interval:
        return Interval(self.base_l[p] + 1, self.base_l[p] + self.counter_l[p])

    def on_approved(self, p: ProcessorId) -> None:
        if self._result is not None:
            raise RuntimeError("recorder already terminated")
        count = self.counter_l.get(p)
        if count is None:
            # first approval of p: open its first interval
            self.base_l[p] = self.counter_g
            self.counter_l[p] = 1
        elif self.counter_g == self.base_l[p] + count:
            # p was also the previous approval: extend the open interval
            self.counter_l[p] = count + 1
        else:
            # someone else came in between: close and reopen
            self.intervals.setdefault(p, []).append(self._open_interval(p))
            self.base_l[p] = self.counter_g
            self.counter_l[p] = 1
        self.counter_g += 1

    def on_terminate(self) -> LogicalSchedule:
        # Idempotent: deadlocked runs terminate through the same path.
        if self._result is None:
            closed = {}
            for p in self.counter_l:
                ivs = self.intervals.setdefault(p, [])
                ivs.append(self._open_interval(p))
                closed[p] = IntervalList(tuple(ivs))
            self._result = LogicalSchedule(closed, self.counter_g)
        return self._result


def record_sequence(approvals) -> LogicalSchedule:
    """Run the recorder over an approval sequence and terminate it."""
    rec = Recorder()
    for p in approvals:
        rec.on_approved(p)
    return rec.on_terminate()
