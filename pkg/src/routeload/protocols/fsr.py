"""Fisheye State Routing: scoped link-state exchange with neighbors only.

Every node keeps a link-state table (origin -> neighbor list + sequence)
and periodically shares entries with its 1-hop neighbors; received
entries are merged when newer and never forwarded.  The fisheye grading
uses two levels: entries for origins within the inner scope (<= 2 hops)
go out every interval, the full table every third interval.  There are
no triggered updates: a broken link only changes the node's own entry,
which rides the next scheduled exchange.
"""

from __future__ import annotations

from typing import Optional

from .base import FsrScopedUpdate, RoutingProtocol, bfs_hops

HOLD_MULTIPLE = 3


class Fsr(RoutingProtocol):
    name = "fsr"

    def __init__(
        self,
        node_id: int,
        n_nodes: int,
        periodic_s: float,
        scope_hops: int = 2,
        slow_factor: int = 3,
    ):
        super().__init__(node_id, n_nodes)
        self.periodic_s = periodic_s
        self.scope_hops = scope_hops
        self.slow_factor = slow_factor
        self.own_seq = 0
        self.neighbors: dict[int, float] = {}  # neighbor -> expiry
        # origin -> (seq, neighbor set); own entry lives here too
        self.lsdb: dict[int, tuple[int, frozenset]] = {
            node_id: (0, frozenset())
        }
        self.tick = 0
        self._routes: dict[int, Optional[int]] = {}
        self._dist: dict[int, int] = {}
        self._routes_dirty = True

    def timers(self):
        return [("scoped", self.periodic_s)]

    # -- timers ------------------------------------------------------------

    def on_timer(self, timer_id: str, now: float) -> list:
        if timer_id != "scoped":
            raise KeyError(f"unknown FSR timer {timer_id!r}")
        self.tick += 1
        self._expire(now)
        self.own_seq += 1
        self.lsdb[self.node_id] = (self.own_seq, frozenset(self.neighbors))
        self._routes_dirty = True
        full = self.tick % self.slow_factor == 0
        if full:
            origins = sorted(self.lsdb)
        else:
            self._ensure_routes()
            origins = sorted(
                o for o in self.lsdb
                if self._dist.get(o, self.n_nodes) <= self.scope_hops
            )
        entries = tuple(
            (o, self.lsdb[o][0], tuple(sorted(self.lsdb[o][1]))) for o in origins
        )
        return [
            FsrScopedUpdate(
                origin=self.node_id, created=now, entries=entries,
                scope="full" if full else "inner",
            )
        ]

    def _expire(self, now: float) -> None:
        stale = [n for n, t in self.neighbors.items() if t <= now]
        for n in stale:
            del self.neighbors[n]
        if stale:
            self._routes_dirty = True

    # -- reception -----------------------------------------------------------

    def on_control_message(self, msg, sender: int, now: float) -> list:
        # any scoped update doubles as a hello: the sender is a live neighbor
        self.neighbors[sender] = now + HOLD_MULTIPLE * self.periodic_s
        for origin, seq, nbrs in msg.entries:
            if origin == self.node_id:
                continue
            cur = self.lsdb.get(origin)
            if cur is None or seq > cur[0]:
                self.lsdb[origin] = (seq, frozenset(nbrs))
                self._routes_dirty = True
        return []  # neighbor exchange only, never forwarded

    # -- link-layer feedback ---------------------------------------------------

    def on_link_change(self, neighbor: int, up: bool, now: float) -> list:
        if not up and neighbor in self.neighbors:
            # own link state changes now; it rides the next scheduled update
            del self.neighbors[neighbor]
            self._routes_dirty = True
        return []

    # -- forwarding --------------------------------------------------------------

    def _ensure_routes(self) -> None:
        if not self._routes_dirty:
            return
        adj: dict[int, set] = {self.node_id: set(self.neighbors)}
        for origin, (_, nbrs) in self.lsdb.items():
            adj.setdefault(origin, set()).update(nbrs)
        dist, first_hop = bfs_hops(adj, self.node_id)
        self._dist = dist
        self._routes = first_hop
        self._routes_dirty = False

    def next_hop(self, dest: int, now: float) -> Optional[int]:
        if dest == self.node_id:
            return None
        self._ensure_routes()
        return self._routes.get(dest)

    def hop_distance(self, dest: int) -> Optional[int]:
        self._ensure_routes()
        return self._dist.get(dest)
