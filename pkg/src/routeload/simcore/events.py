"""Event types and the (time, sequence)-ordered queue."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Any, Optional

from ..errors import SimulationLogicError


@dataclass(frozen=True)
class TimerFire:
    node: int
    timer_id: str


@dataclass(frozen=True)
class PacketDelivery:
    sender: int
    recipient: int
    payload: Any
    send_time: float


@dataclass(frozen=True)
class MobilityStep:
    pass


@dataclass(frozen=True)
class LinkChange:
    a: int
    b: int
    up: bool


@dataclass(frozen=True)
class TrafficGeneration:
    flow_id: int


@dataclass(frozen=True)
class TransmitEnd:
    node: int


@dataclass(order=True)
class _Entry:
    time: float
    seq: int
    payload: Any = field(compare=False)


class EventQueue:
    """Priority queue processing events in (time, sequence) order.

    The sequence number is a monotone tiebreaker: events scheduled at the
    same instant are processed in scheduling order, which keeps runs
    deterministic.
    """

    def __init__(self):
        self._heap: list[_Entry] = []
        self._seq = itertools.count()
        self.now = 0.0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, time: float, payload: Any) -> None:
        if time < self.now:
            raise SimulationLogicError(
                f"scheduling at t={time:g} before current clock t={self.now:g}"
            )
        heapq.heappush(self._heap, _Entry(time, next(self._seq), payload))

    def pop(self) -> tuple[float, Any]:
        entry = heapq.heappop(self._heap)
        self.now = entry.time
        return entry.time, entry.payload

    def peek_time(self) -> Optional[float]:
        return self._heap[0].time if self._heap else None
