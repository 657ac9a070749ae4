"""Record and replay of logical processor schedules for a miniature SCOOP runtime."""

from .ids import ROOT, ProcessorId
from .kernel import Kernel, RunOutcome
from .schedule import Interval, IntervalList, LogicalSchedule, Recorder, Replayer
from .session import RunResult, record, replay

__all__ = [
    "ROOT",
    "Interval",
    "IntervalList",
    "Kernel",
    "LogicalSchedule",
    "ProcessorId",
    "Recorder",
    "Replayer",
    "RunOutcome",
    "RunResult",
    "record",
    "replay",
]
