from .intervals import Interval, IntervalList, LogicalSchedule, check_partition
from .record import Recorder, record_sequence
from .replay import Replayer
from .trace import decode, encode, schedule_hash

__all__ = [
    "Interval",
    "IntervalList",
    "LogicalSchedule",
    "Recorder",
    "Replayer",
    "check_partition",
    "decode",
    "encode",
    "record_sequence",
    "schedule_hash",
]
