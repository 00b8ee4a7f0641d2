"""Single-run simulation engine.

Owns the clock, event queue, mobility, link table, per-node FIFO transmit
queues and the data plane.  Protocol instances are driven exclusively by
this loop.  All randomness (placement, waypoints, flow endpoints, timer
phases) comes from one seeded generator, so identical (config, seed)
pairs reproduce identical runs bit for bit.

MAC model: idealized.  One transmission at a time per node, serialization
delay = size / bandwidth, no contention or collisions.  A control
broadcast reaches every neighbor whose link stays up for the whole
serialization interval; a data unicast whose link drops mid-flight counts
a packet failure.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..metrics import MetricsCollector, MetricsRecord
from ..protocols import make_protocol
from .events import (
    EventQueue,
    LinkChange,
    MobilityStep,
    PacketDelivery,
    TimerFire,
    TrafficGeneration,
    TransmitEnd,
)
from .mobility import LinkTable, WaypointMobility


@dataclass
class DataPacket:
    flow_id: int
    source: int
    destination: int
    size_bytes: int
    created: float
    hops: int = 0
    hop_times: list = field(default_factory=list)


@dataclass(frozen=True)
class Flow:
    flow_id: int
    source: int
    destination: int
    interval: float
    payload_bytes: int


class Simulation:
    def __init__(self, cfg, seed: int, trace: Optional[Callable[[str], None]] = None):
        self.cfg = cfg
        self.seed = seed
        self.trace = trace
        self.rng = random.Random(seed)
        self.n = cfg.network.nodes
        self.queue = EventQueue()
        self.metrics = MetricsCollector()

        self.mobility = WaypointMobility(
            n=self.n,
            area=cfg.network.area_m,
            speed_min=cfg.mobility.speed_min,
            speed_max=cfg.mobility.speed_max if cfg.mobility_enabled() else 0.0,
            pause_s=cfg.mobility.pause_s,
            rng=self.rng,
        )
        self.links = LinkTable(self.n, cfg.network.range_m)
        self.links.rescan(self.mobility.xs, self.mobility.ys, now=0.0)

        self.protocols = [make_protocol(i, cfg) for i in range(self.n)]
        self._timer_intervals: dict[tuple[int, str], float] = {}

        self.tx_queue: list[deque] = [deque() for _ in range(self.n)]
        self.tx_busy = [False] * self.n

        self.flows = self._draw_flows()

    # -- setup ---------------------------------------------------------------

    def set_positions(self, coords: list[tuple[float, float]]) -> None:
        """Pin node positions (tests and fixed-topology studies)."""
        for i, (x, y) in enumerate(coords):
            self.mobility.xs[i] = x
            self.mobility.ys[i] = y
        self.links = LinkTable(self.n, self.cfg.network.range_m)
        self.links.rescan(self.mobility.xs, self.mobility.ys, now=0.0)

    def _draw_flows(self) -> list[Flow]:
        if self.n < 2 or self.cfg.traffic.flows == 0:
            return []
        wanted = min(self.cfg.traffic.flows, self.n * (self.n - 1))
        pairs: list[tuple[int, int]] = []
        seen = set()
        while len(pairs) < wanted:
            s = self.rng.randrange(self.n)
            d = self.rng.randrange(self.n)
            if s == d or (s, d) in seen:
                continue
            seen.add((s, d))
            pairs.append((s, d))
        interval = 1.0 / self.cfg.traffic.rate_pps
        return [
            Flow(i, s, d, interval, self.cfg.traffic.payload_bytes)
            for i, (s, d) in enumerate(pairs)
        ]

    def _schedule_initial(self) -> None:
        for node in range(self.n):
            for timer_id, interval in self.protocols[node].timers():
                self._timer_intervals[(node, timer_id)] = interval
                phase = self.rng.uniform(0.0, interval)
                self.queue.schedule(phase, TimerFire(node, timer_id))
        for flow in self.flows:
            phase = self.rng.uniform(0.0, flow.interval)
            self.queue.schedule(
                self.cfg.traffic.start_s + phase, TrafficGeneration(flow.flow_id)
            )
        if self.mobility.enabled:
            self.queue.schedule(self.cfg.mobility.step_s, MobilityStep())

    # -- main loop ----------------------------------------------------------

    def run(self) -> MetricsRecord:
        duration = self.cfg.sim.duration_s
        if duration == 0:
            return MetricsCollector.empty_record()
        self._schedule_initial()
        while len(self.queue):
            t = self.queue.peek_time()
            if t is None or t > duration:
                break
            now, ev = self.queue.pop()
            self._dispatch(now, ev)
        return self.metrics.finalize(duration)

    def _dispatch(self, now: float, ev) -> None:
        if isinstance(ev, PacketDelivery):
            self._on_delivery(now, ev)
        elif isinstance(ev, TimerFire):
            self._on_timer(now, ev)
        elif isinstance(ev, TransmitEnd):
            self.tx_busy[ev.node] = False
            self._kick(ev.node, now)
        elif isinstance(ev, TrafficGeneration):
            self._on_traffic(now, ev)
        elif isinstance(ev, MobilityStep):
            self._on_mobility(now)
        elif isinstance(ev, LinkChange):
            self._on_link_change(now, ev)
        else:
            raise TypeError(f"unknown event {ev!r}")

    # -- handlers ----------------------------------------------------------

    def _on_timer(self, now: float, ev: TimerFire) -> None:
        proto = self.protocols[ev.node]
        msgs = proto.on_timer(ev.timer_id, now)
        self._enqueue_ctrl(ev.node, msgs, now)
        interval = self._timer_intervals[(ev.node, ev.timer_id)]
        self.queue.schedule(now + interval, ev)
        if self.trace:
            self.trace(f"{now:.6f} node={ev.node} timer id={ev.timer_id} msgs={len(msgs)}")

    def _on_traffic(self, now: float, ev: TrafficGeneration) -> None:
        flow = self.flows[ev.flow_id]
        packet = DataPacket(
            flow_id=flow.flow_id,
            source=flow.source,
            destination=flow.destination,
            size_bytes=flow.payload_bytes,
            created=now,
        )
        self.metrics.record_data_sent()
        self.tx_queue[flow.source].append(("data", packet))
        self._kick(flow.source, now)
        self.queue.schedule(now + flow.interval, ev)

    def _on_mobility(self, now: float) -> None:
        self.mobility.advance(self.cfg.mobility.step_s)
        changes = self.links.rescan(self.mobility.xs, self.mobility.ys, now)
        for a, b, up in changes:
            self.queue.schedule(now, LinkChange(a, b, up))
        self.queue.schedule(now + self.cfg.mobility.step_s, MobilityStep())

    def _on_link_change(self, now: float, ev: LinkChange) -> None:
        if self.trace:
            state = "up" if ev.up else "down"
            self.trace(f"{now:.6f} link {ev.a}-{ev.b} {state}")
        for node, peer in ((ev.a, ev.b), (ev.b, ev.a)):
            msgs = self.protocols[node].on_link_change(peer, ev.up, now)
            self._enqueue_ctrl(node, msgs, now)

    def _on_delivery(self, now: float, ev: PacketDelivery) -> None:
        kind, payload = ev.payload
        if not self.links.stayed_up_since(ev.sender, ev.recipient, ev.send_time):
            if kind == "data":
                self.metrics.record_drop(payload, "link_break")
                if self.trace:
                    self.trace(f"{now:.6f} node={ev.recipient} drop link_break flow={payload.flow_id}")
            else:
                self.metrics.record_ctrl_lost()
            return
        if kind == "ctrl":
            proto = self.protocols[ev.recipient]
            replies = proto.on_control_message(payload, ev.sender, now)
            self._enqueue_ctrl(ev.recipient, replies, now)
            return
        packet: DataPacket = payload
        packet.hops += 1
        packet.hop_times.append(now)
        if packet.destination == ev.recipient:
            self.metrics.record_delivery(packet, now)
            if self.trace:
                self.trace(f"{now:.6f} node={ev.recipient} deliver flow={packet.flow_id} hops={packet.hops}")
        else:
            self.tx_queue[ev.recipient].append(("data", packet))
            self._kick(ev.recipient, now)

    # -- transmit path -------------------------------------------------------

    def _enqueue_ctrl(self, node: int, msgs, now: float) -> None:
        for msg in msgs:
            self.tx_queue[node].append(("ctrl", msg))
        if msgs:
            self._kick(node, now)

    def _kick(self, node: int, now: float) -> None:
        """Start the next transmission if the radio is idle."""
        while not self.tx_busy[node] and self.tx_queue[node]:
            kind, payload = self.tx_queue[node].popleft()
            if kind == "data":
                packet: DataPacket = payload
                if packet.hops >= self.n - 1:
                    self.metrics.record_drop(packet, "hop_limit")
                    continue
                nh = self.protocols[node].next_hop(packet.destination, now)
                if nh is None:
                    self.metrics.record_drop(packet, "no_route")
                    if self.trace:
                        self.trace(f"{now:.6f} node={node} drop no_route flow={packet.flow_id}")
                    continue
                if not self.links.is_up(node, nh):
                    self.metrics.record_drop(packet, "link_break")
                    if self.trace:
                        self.trace(f"{now:.6f} node={node} drop link_break flow={packet.flow_id}")
                    continue
                recipients = [nh]
                size_bits = packet.size_bytes * 8
            else:
                msg = payload
                recipients = self.links.neighbors(node)
                size_bits = msg.size_bytes * 8
                self.metrics.record_ctrl_tx(msg, node)
            end = now + size_bits / self.cfg.network.bandwidth_bps
            self.tx_busy[node] = True
            self.queue.schedule(end, TransmitEnd(node))
            arrive = end + self.cfg.network.prop_delay_s
            for r in recipients:
                self.queue.schedule(
                    arrive, PacketDelivery(node, r, (kind, payload), send_time=now)
                )
            if self.trace:
                what = "data" if kind == "data" else payload.kind
                self.trace(f"{now:.6f} node={node} tx {what} -> {recipients}")


def run_scenario(cfg, seed: int, trace: Optional[Callable[[str], None]] = None) -> MetricsRecord:
    """Run one scenario to completion and return its metrics."""
    return Simulation(cfg, seed, trace=trace).run()
