"""Per-run metric accumulation: throughput, delay, normalized routing load.

One collector per run, driven by the event loop.  Every control
transmission is classified exactly once as periodic or triggered; NRL
counts per-hop control transmissions by default (each forward counts),
with a per-origination alternative reported alongside.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import SimulationLogicError


@dataclass
class MetricsRecord:
    throughput_bps: float
    mean_delay_s: float  # nan when nothing was delivered
    nrl: float  # nan when nothing was delivered
    nrl_origination: float
    data_sent: int
    data_delivered: int
    data_dropped: int
    data_in_flight: int
    ctrl_transmissions: int
    ctrl_periodic: int
    ctrl_triggered: int
    ctrl_originated: int
    ctrl_lost: int
    pf_count: int
    anomalies: int
    delay_p50_s: float
    delay_p90_s: float
    delivered_bits: int
    duration_s: float
    ctrl_by_kind: dict = field(default_factory=dict)
    drops_by_cause: dict = field(default_factory=dict)

    def conservation_ok(self) -> bool:
        return self.data_sent == (
            self.data_delivered + self.data_dropped + self.data_in_flight
        )


def _percentile(sorted_vals: list[float], q: float) -> float:
    if not sorted_vals:
        return math.nan
    if len(sorted_vals) == 1:
        return sorted_vals[0]
    pos = q * (len(sorted_vals) - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, len(sorted_vals) - 1)
    frac = pos - lo
    return sorted_vals[lo] * (1 - frac) + sorted_vals[hi] * frac


class MetricsCollector:
    def __init__(self):
        self.data_sent = 0
        self.data_delivered = 0
        self.data_dropped = 0
        self.delivered_bits = 0
        self.delays: list[float] = []
        self.ctrl_periodic = 0
        self.ctrl_triggered = 0
        self.ctrl_originated = 0
        self.ctrl_lost = 0
        self.anomalies = 0
        self.ctrl_by_kind: Counter = Counter()
        self.drops_by_cause: Counter = Counter()

    # -- data plane -------------------------------------------------------

    def record_data_sent(self) -> None:
        self.data_sent += 1

    def record_delivery(self, packet, now: float) -> None:
        delay = now - packet.created
        if delay < 0:
            raise SimulationLogicError(
                f"delivery at t={now:g} precedes creation t={packet.created:g}"
            )
        self.delays.append(delay)
        self.data_delivered += 1
        self.delivered_bits += packet.size_bytes * 8

    def record_drop(self, packet, cause: str) -> None:
        self.data_dropped += 1
        self.drops_by_cause[cause] += 1

    # -- control plane ----------------------------------------------------

    def record_ctrl_tx(self, msg, sender: int) -> None:
        if msg.triggered:
            self.ctrl_triggered += 1
        else:
            self.ctrl_periodic += 1
        if msg.origin == sender:
            self.ctrl_originated += 1
        self.ctrl_by_kind[msg.kind] += 1

    def record_ctrl_lost(self) -> None:
        self.ctrl_lost += 1

    def record_anomaly(self) -> None:
        self.anomalies += 1

    # -- finalization -----------------------------------------------------

    @property
    def pf_count(self) -> int:
        """Data packets lost to routing failures; same events as data_dropped."""
        return self.data_dropped

    def finalize(self, duration: float) -> MetricsRecord:
        if duration <= 0:
            raise ValueError(f"duration must be > 0, got {duration}")
        ctrl_tx = self.ctrl_periodic + self.ctrl_triggered
        if self.data_delivered > 0:
            mean_delay = math.fsum(self.delays) / len(self.delays)
            nrl = ctrl_tx / self.data_delivered
            nrl_orig = self.ctrl_originated / self.data_delivered
        else:
            mean_delay = math.nan
            nrl = math.nan
            nrl_orig = math.nan
        ordered = sorted(self.delays)
        return MetricsRecord(
            throughput_bps=self.delivered_bits / duration,
            mean_delay_s=mean_delay,
            nrl=nrl,
            nrl_origination=nrl_orig,
            data_sent=self.data_sent,
            data_delivered=self.data_delivered,
            data_dropped=self.data_dropped,
            data_in_flight=self.data_sent - self.data_delivered - self.data_dropped,
            ctrl_transmissions=ctrl_tx,
            ctrl_periodic=self.ctrl_periodic,
            ctrl_triggered=self.ctrl_triggered,
            ctrl_originated=self.ctrl_originated,
            ctrl_lost=self.ctrl_lost,
            pf_count=self.pf_count,
            anomalies=self.anomalies,
            delay_p50_s=_percentile(ordered, 0.50),
            delay_p90_s=_percentile(ordered, 0.90),
            delivered_bits=self.delivered_bits,
            duration_s=duration,
            ctrl_by_kind=dict(self.ctrl_by_kind),
            drops_by_cause=dict(self.drops_by_cause),
        )

    @staticmethod
    def empty_record() -> MetricsRecord:
        """All-zero record for degenerate zero-duration runs."""
        return MetricsRecord(
            throughput_bps=0.0,
            mean_delay_s=math.nan,
            nrl=math.nan,
            nrl_origination=math.nan,
            data_sent=0,
            data_delivered=0,
            data_dropped=0,
            data_in_flight=0,
            ctrl_transmissions=0,
            ctrl_periodic=0,
            ctrl_triggered=0,
            ctrl_originated=0,
            ctrl_lost=0,
            pf_count=0,
            anomalies=0,
            delay_p50_s=math.nan,
            delay_p90_s=math.nan,
            delivered_bits=0,
            duration_s=0.0,
        )
