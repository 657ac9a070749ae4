from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class ProcessorId:
    """Hierarchical handler identity.

    The root processor has the empty path; the k-th processor created by a
    processor ``p`` has path ``p.path + (k,)``. Because creations happen inside
    sequentially executed feature bodies, ids do not depend on the physical
    interleaving.
    """

    path: tuple[int, ...] = ()

    def child(self, ordinal: int) -> ProcessorId:
        if ordinal < 1:
            raise ValueError("creation ordinals start at 1")
        return ProcessorId(self.path + (ordinal,))

    @property
    def is_root(self) -> bool:
        return not self.path

    def __hash__(self) -> int:
        # ids key every per-processor table; hash the path once
        try:
            return self._hash
        except AttributeError:
            h = hash(self.path)
            object.__setattr__(self, "_hash", h)
            return h

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, ProcessorId):
            return NotImplemented
        return self.path < other.path

    def __str__(self) -> str:
        return ".".join(["root", *map(str, self.path)])

    def __repr__(self) -> str:
        return f"ProcessorId({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> ProcessorId:
        head, *rest = text.split(".")
        if head != "root":
            raise ValueError(f"processor id must start with 'root': {text!r}")
        path = []
        for part in rest:
            if not part.isdigit() or part.startswith("0"):
                raise ValueError(f"bad path component {part!r} in {text!r}")
            path.append(int(part))
        return cls(tuple(path))


ROOT = ProcessorId()
