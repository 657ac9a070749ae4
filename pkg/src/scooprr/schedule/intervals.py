"""Intervals, interval lists and logical processor schedules."""

from __future__ import annotations

import bisect
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from ..errors import MalformedSchedule
from ..ids import ProcessorId


@dataclass(frozen=True, order=True)
class Interval:
    lower: int
    upper: int

    def __post_init__(self) -> None:
        if not 1 <= self.lower <= self.upper:
            raise MalformedSchedule(
                "bad-interval", f"need 1 <= l <= u, got [{self.lower}, {self.upper}]"
            )

    def __contains__(self, n: int) -> bool:
        return self.lower <= n <= self.upper

    def __len__(self) -> int:
        return self.upper - self.lower + 1

    def __str__(self) -> str:
        return f"{self.lower}-{self.upper}"


@dataclass(frozen=True)
class IntervalList:
    """Approved-request numbers of one processor, as maximal runs.

    Consecutive intervals are strictly increasing and separated by at least
    one foreign approval (``next.lower >= prev.upper + 2``).
    """

    items: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        for prev, nxt in zip(self.items, self.items[1:]):
            if nxt.lower <= prev.upper:
                raise MalformedSchedule(
                    "unsorted", f"interval {nxt} does not follow {prev}"
                )
            if nxt.lower == prev.upper + 1:
                raise MalformedSchedule(
                    "adjacency", f"interval {nxt} is adjacent to {prev}"
                )

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> IntervalList:
        return cls(tuple(Interval(lo, hi) for lo, hi in pairs))

    def contains(self, n: int) -> bool:
        # first interval whose upper bound reaches n
        i = bisect.bisect_left(self.items, n, key=lambda iv: iv.upper)
        return i < len(self.items) and n >= self.items[i].lower

    def numbers(self) -> Iterator[int]:
        for iv in self.items:
            yield from range(iv.lower, iv.upper + 1)

    def count(self) -> int:
        return sum(len(iv) for iv in self.items)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __str__(self) -> str:
        return " ".join(map(str, self.items))


@dataclass(frozen=True)
class LogicalSchedule:
    """Per-processor interval lists plus the total number of approvals."""

    per_processor: Mapping[ProcessorId, IntervalList] = field(default_factory=dict)
    total: int = 0

    def __post_init__(self) -> None:
        ordered = {p: self.per_processor[p] for p in sorted(self.per_processor)}
        object.__setattr__(self, "per_processor", ordered)

    def __hash__(self) -> int:
        return hash((self.total, tuple(self.per_processor.items())))

    def intervals(self, p: ProcessorId) -> IntervalList:
        return self.per_processor.get(p, IntervalList())

    def processors(self) -> list[ProcessorId]:
        return list(self.per_processor)

    def approval_sequence(self) -> list[ProcessorId]:
        """Owner of each approval number 1..N (requires a valid schedule)."""
        owners: list[ProcessorId | None] = [None] * self.total
        for p, ivs in self.per_processor.items():
            for n in ivs.numbers():
                owners[n - 1] = p
        return owners  # type: ignore[return-value]

    def validate(self) -> LogicalSchedule:
        """Check the partition invariant; return self for chaining."""
        check_partition(self.per_processor.items(), self.total)
        return self

    def __str__(self) -> str:
        body = ", ".join(f"{p}: {ivs}" for p, ivs in self.per_processor.items())
        return f"<N={self.total} {body}>"


def check_partition(
    entries: Iterable[tuple[ProcessorId, IntervalList]],
    total: int,
    lines: Mapping[ProcessorId, int] | None = None,
) -> None:
    """Raise MalformedSchedule unless the intervals tile 1..total exactly."""
    if total < 0:
        raise MalformedSchedule("total", f"negative total {total}")
    owner: dict[int, ProcessorId] = {}
    for p, ivs in entries:
        line = lines.get(p) if lines else None
        if not ivs:
            raise MalformedSchedule("empty", f"{p} has an empty interval list", line)
        for n in ivs.numbers():
            if n in owner:
                raise MalformedSchedule(
                    "overlap", f"approval {n} claimed by {owner[n]} and {p}", line
                )
            owner[n] = p
    missing = [n for n in range(1, total + 1) if n not in owner]
    extra = sorted(n for n in owner if n > total)
    if missing or extra:
        detail = f"missing {missing[:5]}" if missing else f"beyond total {extra[:5]}"
        raise MalformedSchedule(
            "total", f"intervals do not cover exactly 1..{total} ({detail})"
        )
