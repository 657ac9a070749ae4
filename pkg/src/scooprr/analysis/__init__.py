from .compare import first_difference, schedules_equal
from .deadlock import DeadlockReport, detect_deadlock
from .fuzz import FuzzFault, FuzzSummary, fuzz
from .monitor import SafetyMonitor

__all__ = [
    "DeadlockReport",
    "FuzzFault",
    "FuzzSummary",
    "SafetyMonitor",
    "detect_deadlock",
    "first_difference",
    "fuzz",
    "schedules_equal",
]
