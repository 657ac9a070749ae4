"""Runtime data shared by the kernel and the scheduler."""

from __future__ import annotations

import enum
from collections import deque
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

from .ids import ProcessorId


class Status(enum.Enum):
    IDLE = "idle"
    RUNNING = "running"
    BLOCKED_ON_FUTURE = "blocked-on-future"
    BLOCKED_ON_LOCK = "blocked-on-lock"
    DONE = "done"


class RequestKind(enum.Enum):
    COMMAND = "separate-command"
    QUERY = "separate-query"
    UNLOCK = "unlock-marker"


_EMPTY = object()


class ResultSlot:
    """Future for a separate query; fills exactly once."""

    __slots__ = ("supplier", "client", "_value")

    def __init__(self, client: ProcessorId, supplier: ProcessorId) -> None:
        self.client = client
        self.supplier = supplier
        self._value: Any = _EMPTY

    @property
    def filled(self) -> bool:
        return self._value is not _EMPTY

    @property
    def value(self) -> Any:
        if self._value is _EMPTY:
            raise LookupError("result slot is still empty")
        return self._value

    def fill(self, value: Any) -> None:
        if self._value is not _EMPTY:
            raise RuntimeError("result slot filled twice")
        self._value = value

    def __repr__(self) -> str:
        state = f"filled({self._value!r})" if self.filled else "empty"
        return f"<ResultSlot {self.supplier} -> {self.client} {state}>"


@dataclass(frozen=True)
class FeatureRequest:
    kind: RequestKind
    client: ProcessorId
    feature: str | None = None
    args: tuple[Any, ...] = ()
    reply: ResultSlot | None = None
    seq: int = 0

    def __post_init__(self) -> None:
        if self.kind is RequestKind.UNLOCK:
            if self.feature is not None or self.args or self.reply is not None:
                raise ValueError("unlock markers carry no feature, args or reply")
        elif (self.reply is not None) != (self.kind is RequestKind.QUERY):
            raise ValueError("a reply slot is present iff the request is a query")


class RequestQueue:
    """Strict FIFO of feature requests; stamps each with an enqueue number."""

    def __init__(self) -> None:
        self._items: deque[FeatureRequest] = deque()
        self._next_seq = 0

    def stamp(self) -> int:
        self._next_seq += 1
        return self._next_seq

    def put(self, request: FeatureRequest) -> None:
        self._items.append(request)

    def get(self) -> FeatureRequest:
        return self._items.popleft()

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[FeatureRequest]:
        return iter(self._items)


@dataclass
class ObjectState:
    cls: str
    fields: dict[str, Any] = field(default_factory=dict)

    def snapshot(self) -> Mapping[str, Any]:
        """Read-only copy for wait-condition evaluation."""
        return freeze(self.fields)


def freeze(values: Mapping[str, Any]) -> Mapping[str, Any]:
    return MappingProxyType(
        {k: tuple(v) if isinstance(v, list) else v for k, v in values.items()}
    )


@dataclass(eq=False)
class ProcessorState:
    id: ProcessorId
    object: ObjectState
    queue: RequestQueue = field(default_factory=RequestQueue)
    locked_by: ProcessorId | None = None
    call_stack_depth: int = 0
    status: Status = Status.IDLE
    # set while blocked-on-future
    awaiting: ResultSlot | None = None
    # per active feature application: the handlers it locked
    lock_frames: list[set[ProcessorId]] = field(default_factory=list)
    created: int = 0

    def controls(self, other: ProcessorId) -> bool:
        return any(other in frame for frame in self.lock_frames)
