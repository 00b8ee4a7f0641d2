"""Protocol interface and control message types.

A protocol instance owns one node's routing state and is invoked only by
the simulation event loop: timers, received control messages, and
link-layer up/down notifications.  Handlers return control messages for
the node to broadcast; the engine owns all transmission mechanics.

Wire format for bandwidth accounting: 20-byte header plus 12 bytes per
carried route/link entry.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

HEADER_BYTES = 20
ENTRY_BYTES = 12

# metric value carried for unreachable destinations
UNREACHABLE = float("inf")


@dataclass(frozen=True)
class DsdvUpdate:
    origin: int
    created: float
    entries: tuple  # ((dest, seq, metric), ...)
    full: bool
    triggered: bool

    @property
    def kind(self) -> str:
        return "dsdv_full" if self.full else "dsdv_incremental"

    @property
    def size_bytes(self) -> int:
        return HEADER_BYTES + ENTRY_BYTES * len(self.entries)


@dataclass(frozen=True)
class OlsrHello:
    origin: int
    created: float
    neighbors: tuple  # ((neighbor_id, selected_as_mpr), ...)

    kind = "olsr_hello"
    triggered = False

    @property
    def size_bytes(self) -> int:
        return HEADER_BYTES + ENTRY_BYTES * len(self.neighbors)


@dataclass(frozen=True)
class OlsrTc:
    origin: int
    created: float
    selectors: tuple
    seq: int
    triggered: bool

    kind = "olsr_tc"

    @property
    def size_bytes(self) -> int:
        return HEADER_BYTES + ENTRY_BYTES * len(self.selectors)


@dataclass(frozen=True)
class FsrScopedUpdate:
    origin: int
    created: float
    entries: tuple  # ((origin_id, seq, (neighbor, ...)), ...)
    scope: str  # "inner" | "full"

    triggered = False

    @property
    def kind(self) -> str:
        return f"fsr_{self.scope}"

    @property
    def size_bytes(self) -> int:
        links = sum(max(1, len(nbrs)) for _, _, nbrs in self.entries)
        return HEADER_BYTES + ENTRY_BYTES * links


class RoutingProtocol:
    """Base class; one instance per node, invoked by the event loop only."""

    name = "base"

    def __init__(self, node_id: int, n_nodes: int):
        self.node_id = node_id
        self.n_nodes = n_nodes

    def timers(self) -> list[tuple[str, float]]:
        """(timer_id, interval) pairs; the engine adds a random phase."""
        return []

    def on_timer(self, timer_id: str, now: float) -> list:
        raise NotImplementedError

    def on_control_message(self, msg, sender: int, now: float) -> list:
        raise NotImplementedError

    def on_link_change(self, neighbor: int, up: bool, now: float) -> list:
        return []

    def next_hop(self, dest: int, now: float) -> Optional[int]:
        raise NotImplementedError


def bfs_hops(adjacency: dict, root: int) -> tuple[dict, dict]:
    """Hop distances and first hops from root over a directed adjacency map.

    Neighbor lists are visited in sorted order so tie-breaks are
    deterministic (lowest next-hop id wins among equal-length paths).
    """
    dist = {root: 0}
    first_hop: dict = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(adjacency.get(u, ())):
            if v in dist:
                continue
            dist[v] = dist[u] + 1
            first_hop[v] = v if u == root else first_hop[u]
            queue.append(v)
    return dist, first_hop
