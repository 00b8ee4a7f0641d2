"""Deterministic discrete-event simulation kernel.

Protocol-agnostic: clock, event queue, random-waypoint mobility over a
unit-disk radio, and bandwidth-limited packet transport.  A single run is
strictly single-threaded; independent runs share nothing.
"""

from .engine import Simulation, run_scenario
from .events import (
    EventQueue,
    LinkChange,
    MobilityStep,
    PacketDelivery,
    TimerFire,
    TrafficGeneration,
    TransmitEnd,
)

__all__ = [
    "Simulation",
    "run_scenario",
    "EventQueue",
    "TimerFire",
    "PacketDelivery",
    "MobilityStep",
    "LinkChange",
    "TrafficGeneration",
    "TransmitEnd",
]
