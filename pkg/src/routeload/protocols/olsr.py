"""Optimized Link State Routing: HELLO/TC with multipoint relays.

HELLO messages (every H) carry the neighbor list with MPR markings and
drive neighbor, 2-hop and MPR-selector bookkeeping.  TC messages (every
2H) advertise the sender's MPR-selector set and are flooded under the MPR
forwarding rule: a node retransmits a TC only when it arrived from a
neighbor that selected it as relay.  A change in the selector set emits
an immediate (triggered) TC.  Routes are shortest hop count over the
partial topology known from HELLOs and TCs.

Out of scope: MID/HNA messages, link hysteresis, willingness.
"""

from __future__ import annotations

import math
from typing import Optional

from .base import OlsrHello, OlsrTc, RoutingProtocol, bfs_hops

# missed intervals before a neighbor/topology entry is declared lost
HOLD_MULTIPLE = 3


def compute_mpr(neighbors: set, two_hop: dict, selector: int) -> tuple[set, int]:
    """Greedy relay selection covering every strict 2-hop neighbor.

    two_hop maps each 1-hop neighbor to the node set it reaches.  Returns
    (mpr_set, uncoverable) where uncoverable counts 2-hop nodes no
    neighbor can reach (stale neighborhood data).  Ties break on larger
    uncovered coverage, then lower node id.
    """
    strict_two_hop = set()
    for nbr in neighbors:
        strict_two_hop |= two_hop.get(nbr, set())
    strict_two_hop -= neighbors
    strict_two_hop.discard(selector)

    uncovered = set(strict_two_hop)
    chosen: set = set()
    while uncovered:
        best = None
        best_cover = 0
        for nbr in sorted(neighbors - chosen):
            cover = len(two_hop.get(nbr, set()) & uncovered)
            if cover > best_cover:
                best, best_cover = nbr, cover
        if best is None:
            return chosen, len(uncovered)
        chosen.add(best)
        uncovered -= two_hop[best]
    return chosen, 0


class Olsr(RoutingProtocol):
    name = "olsr"

    def __init__(self, node_id: int, n_nodes: int, hello_s: float):
        super().__init__(node_id, n_nodes)
        self.hello_s = hello_s
        self.tc_s = 2.0 * hello_s
        self.link_set: dict[int, float] = {}  # neighbor -> expiry
        self.nbr_nbrs: dict[int, set] = {}  # neighbor -> its advertised neighbors
        self.selectors: dict[int, float] = {}  # who chose me as MPR -> expiry
        self.mpr: set = set()
        self.topology: dict[int, tuple] = {}  # origin -> (selectors, seq, expiry)
        self.tc_seq = 0
        self._last_tc_emit = -math.inf
        # immediate selector-change TCs by default; a positive gap enables
        # RFC-style rate limiting for comparison runs
        self.min_tc_gap = 0.0
        self._last_seen_tc: dict[int, int] = {}
        self._last_forwarded_tc: dict[int, int] = {}
        self._routes: dict[int, Optional[int]] = {}
        self._routes_dirty = True
        self.anomalies = 0

    def timers(self):
        return [("hello", self.hello_s), ("tc", self.tc_s)]

    # -- timers ----------------------------------------------------------------

    def on_timer(self, timer_id: str, now: float) -> list:
        if timer_id == "hello":
            self._expire(now)
            return [self._make_hello(now)]
        if timer_id == "tc":
            self._expire(now)
            if not self.selectors:
                return []
            return [self._make_tc(now, triggered=False)]
        raise KeyError(f"unknown OLSR timer {timer_id!r}")

    def _make_hello(self, now: float) -> OlsrHello:
        listed = tuple((nbr, nbr in self.mpr) for nbr in sorted(self.link_set))
        return OlsrHello(origin=self.node_id, created=now, neighbors=listed)

    def _make_tc(self, now: float, triggered: bool) -> OlsrTc:
        self.tc_seq += 1
        self._last_tc_emit = now
        return OlsrTc(
            origin=self.node_id, created=now,
            selectors=tuple(sorted(self.selectors)), seq=self.tc_seq,
            triggered=triggered,
        )

    def _triggered_tc(self, now: float) -> list:
        """Immediate TC on selector change, respecting the minimum gap.

        When the gap suppresses it, the regular schedule (every 2H) carries
        the new selector set instead.
        """
        if not self.selectors or now - self._last_tc_emit < self.min_tc_gap:
            return []
        return [self._make_tc(now, triggered=True)]

    def _expire(self, now: float) -> None:
        stale = [n for n, t in self.link_set.items() if t <= now]
        for n in stale:
            del self.link_set[n]
            self.nbr_nbrs.pop(n, None)
        sel_stale = [n for n, t in self.selectors.items() if t <= now]
        for n in sel_stale:
            del self.selectors[n]
        topo_stale = [o for o, (_, _, t) in self.topology.items() if t <= now]
        for o in topo_stale:
            del self.topology[o]
        if stale or topo_stale:
            self._recompute_mpr()
            self._routes_dirty = True

    def _recompute_mpr(self) -> None:
        nbrs = set(self.link_set)
        two_hop = {n: self.nbr_nbrs.get(n, set()) - {self.node_id} for n in nbrs}
        self.mpr, uncoverable = compute_mpr(nbrs, two_hop, self.node_id)
        self.anomalies += uncoverable

    # -- reception ---------------------------------------------------------------

    def on_control_message(self, msg, sender: int, now: float) -> list:
        if isinstance(msg, OlsrHello):
            return self._on_hello(msg, sender, now)
        if isinstance(msg, OlsrTc):
            return self._on_tc(msg, sender, now)
        raise TypeError(f"unexpected message for OLSR: {type(msg).__name__}")

    def _on_hello(self, msg: OlsrHello, sender: int, now: float) -> list:
        hold = now + HOLD_MULTIPLE * self.hello_s
        new_link = sender not in self.link_set
        self.link_set[sender] = hold
        advertised = {nbr for nbr, _ in msg.neighbors}
        nbr_changed = self.nbr_nbrs.get(sender) != advertised
        self.nbr_nbrs[sender] = advertised

        chose_me = any(nbr == self.node_id and is_mpr for nbr, is_mpr in msg.neighbors)
        selector_change = False
        if chose_me:
            selector_change = sender not in self.selectors
            self.selectors[sender] = hold
        elif sender in self.selectors:
            del self.selectors[sender]
            selector_change = True

        if new_link or nbr_changed:
            self._recompute_mpr()
            self._routes_dirty = True
        if selector_change:
            return self._triggered_tc(now)
        return []

    def _on_tc(self, msg: OlsrTc, sender: int, now: float) -> list:
        if sender not in self.link_set:
            self.anomalies += 1  # control traffic from a non-neighbor
            return []
        if msg.origin == self.node_id:
            return []
        out = []
        if msg.seq > self._last_seen_tc.get(msg.origin, 0):
            self._last_seen_tc[msg.origin] = msg.seq
            hold = now + HOLD_MULTIPLE * self.tc_s
            old = self.topology.get(msg.origin)
            self.topology[msg.origin] = (frozenset(msg.selectors), msg.seq, hold)
            if old is None or old[0] != frozenset(msg.selectors):
                self._routes_dirty = True
        # Forward only when the sender selected this node as its relay.
        if sender in self.selectors and msg.seq > self._last_forwarded_tc.get(msg.origin, 0):
            self._last_forwarded_tc[msg.origin] = msg.seq
            out.append(msg)
        return out

    # -- link-layer feedback -------------------------------------------------------

    def on_link_change(self, neighbor: int, up: bool, now: float) -> list:
        if up:
            return []  # neighbors are admitted through HELLO exchange only
        if neighbor not in self.link_set:
            return []
        del self.link_set[neighbor]
        self.nbr_nbrs.pop(neighbor, None)
        selector_change = neighbor in self.selectors
        if selector_change:
            del self.selectors[neighbor]
        self._recompute_mpr()
        self._routes_dirty = True
        if selector_change:
            return self._triggered_tc(now)
        return []

    # -- forwarding -------------------------------------------------------------

    def _recompute_routes(self) -> None:
        adj: dict[int, set] = {self.node_id: set(self.link_set)}
        for nbr, theirs in self.nbr_nbrs.items():
            adj.setdefault(nbr, set()).update(theirs)
        for origin, (sels, _, _) in self.topology.items():
            adj.setdefault(origin, set()).update(sels)
        _, first_hop = bfs_hops(adj, self.node_id)
        self._routes = first_hop
        self._routes_dirty = False

    def next_hop(self, dest: int, now: float) -> Optional[int]:
        if dest == self.node_id:
            return None
        if self._routes_dirty:
            self._recompute_routes()
        return self._routes.get(dest)

    def hop_distance(self, dest: int) -> Optional[int]:
        if self._routes_dirty:
            self._recompute_routes()
        adj: dict[int, set] = {self.node_id: set(self.link_set)}
        for nbr, theirs in self.nbr_nbrs.items():
            adj.setdefault(nbr, set()).update(theirs)
        for origin, (sels, _, _) in self.topology.items():
            adj.setdefault(origin, set()).update(sels)
        dist, _ = bfs_hops(adj, self.node_id)
        return dist.get(dest)
