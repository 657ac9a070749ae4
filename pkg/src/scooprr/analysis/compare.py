from __future__ import annotations

from ..schedule import Interval, LogicalSchedule


def schedules_equal(a: LogicalSchedule, b: LogicalSchedule) -> bool:
    """Same approval order: identical interval lists and the same N."""
    return a.total == b.total and dict(a.per_processor) == dict(b.per_processor)


def first_difference(a: LogicalSchedule, b: LogicalSchedule) -> str | None:
    """Human-readable first mismatch, or None when equal."""
    if a.total != b.total:
        return f"total {a.total} != {b.total}"
    for p in sorted(set(a.per_processor) | set(b.per_processor)):
        left, right = list(a.intervals(p)), list(b.intervals(p))
        for i in range(max(len(left), len(right))):
            x: Interval | str = left[i] if i < len(left) else "none"
            y: Interval | str = right[i] if i < len(right) else "none"
            if x != y:
                return f"{p} interval #{i + 1}: {x} != {y}"
    return None
