"""Destination-Sequenced Distance Vector routing.

Periodic full-table dumps every periodic interval; triggered incremental
updates on link breaks and adopted route changes.  Each destination owns
an even sequence number bumped at every periodic dump; a detected link
break advertises the lost neighbor with the next (odd) sequence number
and an unreachable metric.

Link-break updates go out within the same event-time step.  All other
triggered changes coalesce in a pending buffer flushed on a short
aggregation timer, the standard damping that keeps adoption cascades from
storming the channel one destination at a time.

Settling time: when a newer sequence arrives with a worse metric than the
route held before, the entry is withheld from advertisement and from
forwarding until the settling window passes, since a better route with
that sequence may still arrive.
"""

from __future__ import annotations

import math
from typing import Optional

from .base import UNREACHABLE, DsdvUpdate, RoutingProtocol


class _Route:
    __slots__ = ("seq", "metric", "next_hop", "settling_until", "settle_ref")

    def __init__(self, seq: int, metric: float, next_hop: Optional[int]):
        self.seq = seq
        self.metric = metric
        self.next_hop = next_hop
        self.settling_until = -math.inf
        self.settle_ref = math.inf  # metric held before the worsening


class Dsdv(RoutingProtocol):
    name = "dsdv"

    def __init__(self, node_id: int, n_nodes: int, periodic_s: float,
                 settling_s: float, trigger_delay_s: float = 0.1):
        super().__init__(node_id, n_nodes)
        self.periodic_s = periodic_s
        self.settling_s = settling_s
        self.trigger_delay_s = trigger_delay_s
        self.own_seq = 0
        self.table: dict[int, _Route] = {
            node_id: _Route(seq=0, metric=0.0, next_hop=node_id)
        }
        # triggered entries awaiting the next flush, dest -> (seq, metric)
        self.pending: dict[int, tuple] = {}
        # last time an unreachable claim was countered, per destination
        self._countered: dict[int, float] = {}
        self._counter_holddown = 1.0

    def timers(self):
        return [("periodic", self.periodic_s), ("flush", self.trigger_delay_s)]

    # -- advertisement ------------------------------------------------------

    def _advertisable(self, dest: int, now: float) -> bool:
        return now >= self.table[dest].settling_until

    def _own_entry(self) -> tuple:
        return (self.node_id, self.own_seq, 0.0)

    def _flush(self, now: float, extra: list | None = None) -> list:
        entries = dict(self.pending)
        self.pending.clear()
        for dest, seq, metric in extra or ():
            entries[dest] = (seq, metric)
        if not entries:
            return []
        listed = tuple(
            (dest, seq, metric) for dest, (seq, metric) in sorted(entries.items())
        ) + (self._own_entry(),)
        return [
            DsdvUpdate(
                origin=self.node_id, created=now, entries=listed,
                full=False, triggered=True,
            )
        ]

    def on_timer(self, timer_id: str, now: float) -> list:
        if timer_id == "flush":
            return self._flush(now)
        if timer_id != "periodic":
            raise KeyError(f"unknown DSDV timer {timer_id!r}")
        self.own_seq += 2
        self.table[self.node_id].seq = self.own_seq
        self.pending.pop(self.node_id, None)  # the dump carries fresher state
        entries = tuple(
            (dest, r.seq, r.metric)
            for dest, r in sorted(self.table.items())
            if self._advertisable(dest, now)
        )
        return [
            DsdvUpdate(
                origin=self.node_id, created=now, entries=entries,
                full=True, triggered=False,
            )
        ]

    # -- reception ----------------------------------------------------------

    def on_control_message(self, msg, sender: int, now: float) -> list:
        for dest, seq, metric in msg.entries:
            if dest == self.node_id:
                if metric == UNREACHABLE and seq >= self.own_seq:
                    # someone advertises me as unreachable: outbid the stale
                    # break sequence with a fresh even one
                    self.own_seq = seq + 1 if (seq + 1) % 2 == 0 else seq + 2
                    self.table[self.node_id].seq = self.own_seq
                    self.pending[self.node_id] = (self.own_seq, 0.0)
                continue
            cand_metric = metric + 1 if metric != UNREACHABLE else UNREACHABLE
            if cand_metric >= self.n_nodes:
                cand_metric = UNREACHABLE  # no valid path uses n or more hops
            cur = self.table.get(dest)
            if cur is None:
                if cand_metric == UNREACHABLE:
                    continue  # nothing useful to install
                self.table[dest] = _Route(seq, cand_metric, sender)
                self.pending[dest] = (seq, cand_metric)
                continue
            newer = seq > cur.seq
            better = seq == cur.seq and cand_metric < cur.metric
            # Within one sequence epoch only invalidations may flow through
            # the current next hop; same-sequence finite increases would
            # count to infinity around dependency loops.
            through = (
                seq == cur.seq
                and cur.next_hop == sender
                and cand_metric == UNREACHABLE
                and cur.metric != UNREACHABLE
            )
            if not (newer or better or through):
                if (
                    cand_metric == UNREACHABLE
                    and cur.metric != UNREACHABLE
                    and now - self._countered.get(dest, -math.inf) >= self._counter_holddown
                ):
                    # unreachable claim no fresher than our finite route:
                    # counter it so the break heals at trigger speed
                    self._countered[dest] = now
                    self.pending[dest] = (cur.seq, cur.metric)
                continue
            if newer and cur.metric < cand_metric != UNREACHABLE:
                # worse path on a fresh sequence: hold it back for a while
                cur.settle_ref = cur.metric
                cur.settling_until = now + self.settling_s
            elif better and cand_metric <= cur.settle_ref:
                cur.settling_until = -math.inf
                cur.settle_ref = math.inf
            cur.seq = seq
            cur.metric = cand_metric
            cur.next_hop = sender if cand_metric != UNREACHABLE else None
            # every adoption is re-advertised (sequence advances included) so
            # fresh reachability propagates hop by hop within the interval
            if self._advertisable(dest, now):
                self.pending[dest] = (seq, cand_metric)
            else:
                self.pending.pop(dest, None)
        return []

    # -- link-layer feedback --------------------------------------------------

    def on_link_change(self, neighbor: int, up: bool, now: float) -> list:
        if up:
            return []  # learned through its updates
        changed = []
        for dest, route in sorted(self.table.items()):
            if dest == self.node_id or route.next_hop != neighbor:
                continue
            if dest == neighbor:
                # the lost neighbor itself: supersede its even sequence with
                # the odd break sequence so the loss propagates
                route.seq += 1
            # other routes through it keep their sequence: advertising them
            # as unreachable solicits same-sequence repairs from neighbors
            # whose routes bypass the broken link
            route.metric = UNREACHABLE
            route.next_hop = None
            route.settling_until = -math.inf
            route.settle_ref = math.inf
            changed.append((dest, route.seq, UNREACHABLE))
        if not changed:
            return []
        # break notices leave within the same event-time step, carrying any
        # pending entries along
        return self._flush(now, extra=changed)

    # -- forwarding -----------------------------------------------------------

    def next_hop(self, dest: int, now: float) -> Optional[int]:
        if dest == self.node_id:
            return None
        route = self.table.get(dest)
        if route is None or route.metric == UNREACHABLE:
            return None
        if now < route.settling_until:
            return None  # only settled best routes carry data
        return route.next_hop

    def hop_metric(self, dest: int) -> float:
        route = self.table.get(dest)
        return route.metric if route is not None else UNREACHABLE
