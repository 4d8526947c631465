"""Discrete-event core: a time-ordered queue with stable tie-breaking."""

from __future__ import annotations

import heapq
from typing import Any


class EventQueue:
    """Min-heap keyed on (time, insertion order).

    Events scheduled for the same instant pop in the order they were
    pushed, so a run replays identically regardless of payload contents.
    """

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, Any]] = []
        self._count = 0

    def push(self, time_s: float, item: Any) -> None:
        if time_s < 0:
            raise ValueError(f"event time must be >= 0, got {time_s}")
        heapq.heappush(self._heap, (time_s, self._count, item))
        self._count += 1

    def pop(self) -> tuple[float, Any]:
        time_s, _, item = heapq.heappop(self._heap)
        return time_s, item

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)
