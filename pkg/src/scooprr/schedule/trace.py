"""Canonical text form of a logical schedule.

::

    SCOOP-RR 1
    total 9
    proc root 1-1
    proc root.1 2-2 6-6
    ...

ASCII, LF-terminated, processors in ascending id order. The encoding is
canonical, so its SHA-256 doubles as the schedule hash.
"""

from __future__ import annotations

import hashlib
import re
from pathlib import Path

from ..errors import MalformedSchedule
from ..ids import ProcessorId
from .intervals import Interval, IntervalList, LogicalSchedule, check_partition

MAGIC = "SCOOP-RR 1"

_TOTAL = re.compile(r"total (0|[1-9][0-9]*)")
_INTERVAL = re.compile(r"([1-9][0-9]*)-([1-9][0-9]*)")


def encode(schedule: LogicalSchedule) -> str:
    lines = [MAGIC, f"total {schedule.total}"]
    for p in sorted(schedule.per_processor):
        ivs = schedule.per_processor[p]
        lines.append(" ".join(["proc", str(p), *map(str, ivs)]))
    return "\n".join(lines) + "\n"


def schedule_hash(schedule: LogicalSchedule) -> str:
    return hashlib.sha256(encode(schedule).encode("ascii")).hexdigest()


def decode(text: str) -> LogicalSchedule:
    if "\r" in text:
        raise MalformedSchedule("syntax", "carriage return in trace", 1)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MAGIC:
        got = lines[0] if lines else ""
        raise MalformedSchedule("magic", f"expected {MAGIC!r}, got {got!r}", 1)
    if len(lines) < 2 or not (m := _TOTAL.fullmatch(lines[1])):
        raise MalformedSchedule("syntax", "expected 'total <N>'", 2)
    total = int(m.group(1))

    per: dict[ProcessorId, IntervalList] = {}
    where: dict[ProcessorId, int] = {}
    prev: ProcessorId | None = None
    for lineno, line in enumerate(lines[2:], start=3):
        fields = line.split(" ")
        if len(fields) < 2 or fields[0] != "proc":
            raise MalformedSchedule("syntax", f"expected 'proc <id> ...': {line!r}", lineno)
        try:
            p = ProcessorId.parse(fields[1])
        except ValueError as exc:
            raise MalformedSchedule("syntax", str(exc), lineno) from None
        if p in per:
            raise MalformedSchedule("duplicate", f"second line for {p}", lineno)
        if prev is not None and p < prev:
            raise MalformedSchedule("order", f"{p} listed after {prev}", lineno)
        prev = p
        ivs = []
        for tok in fields[2:]:
            if not (im := _INTERVAL.fullmatch(tok)):
                raise MalformedSchedule("syntax", f"bad interval token {tok!r}", lineno)
            try:
                ivs.append(Interval(int(im.group(1)), int(im.group(2))))
            except MalformedSchedule as exc:
                raise MalformedSchedule(exc.kind, f"{tok} has l > u", lineno) from None
        try:
            per[p] = IntervalList(tuple(ivs))
        except MalformedSchedule as exc:
            raise MalformedSchedule(exc.kind, str(exc), lineno) from None
        where[p] = lineno

    try:
        check_partition(per.items(), total, where)
    except MalformedSchedule as exc:
        if exc.kind == "total":
            raise MalformedSchedule("total", str(exc), 2) from None
        raise
    return LogicalSchedule(per, total)


def write(schedule: LogicalSchedule, path: str | Path) -> None:
    Path(path).write_bytes(encode(schedule).encode("ascii"))


def read(path: str | Path) -> LogicalSchedule:
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError:
        raise MalformedSchedule("syntax", "trace is not ASCII", 1) from None
    return decode(text)
