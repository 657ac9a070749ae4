"""Runtime safety checks wired into the kernel as an observer."""

from __future__ import annotations

from collections import defaultdict
from typing import TYPE_CHECKING

from ..state import RequestKind, freeze

if TYPE_CHECKING:
    from ..kernel import Event, Kernel


class SafetyMonitor:
    """Collects violations of mutual exclusion, wait conditions and FIFO order.

    The monitor re-derives everything from raw kernel state instead of asking
    the arbiter, so a broken arbiter cannot vouch for itself.
    """

    def __init__(self) -> None:
        self.violations: list[str] = []
        self.approvals = 0
        self.applied: dict = defaultdict(list)
        self._enqueued: dict = defaultdict(list)
        self._dequeued: dict = defaultdict(int)

    def __call__(self, kernel: Kernel, event: Event) -> None:
        handler = getattr(self, f"_on_{event.kind}", None)
        if handler is not None:
            handler(kernel, event)

    def _on_approve(self, kernel: Kernel, event: Event) -> None:
        self.approvals += 1
        req = event.info["request"]
        for target in req.targets:
            holder = kernel.processors[target].locked_by
            if holder is not None:
                self.violations.append(
                    f"{req.requester} approved on {target} already held by {holder}"
                )
        views = {n: freeze(kernel.processors[p].object.fields) for n, p in req.bindings.items()}
        if not req.wait.test(views, req.env):
            self.violations.append(f"{req.requester} approved with {req.wait} false")

    def _on_enqueue(self, kernel: Kernel, event: Event) -> None:
        req = event.info["request"]
        supplier = kernel.processors[event.pid]
        if req.kind is not RequestKind.UNLOCK and supplier.locked_by != req.client:
            self.violations.append(f"uncontrolled call on {event.pid} by {req.client}")
        self._enqueued[event.pid].append(req.seq)

    def _on_dequeue(self, kernel: Kernel, event: Event) -> None:
        req = event.info["request"]
        i = self._dequeued[event.pid]
        expected = self._enqueued[event.pid][i] if i < len(self._enqueued[event.pid]) else None
        if req.seq != expected:
            self.violations.append(
                f"{event.pid} dequeued request #{req.seq}, expected #{expected}"
            )
        self._dequeued[event.pid] = i + 1

    def _on_apply(self, kernel: Kernel, event: Event) -> None:
        if event.info["client"] is not None:
            self.applied[event.pid].append((event.info["feature"], event.info["args"]))
