"""Proactive routing protocol state machines behind one interface."""

from .base import (
    ENTRY_BYTES,
    HEADER_BYTES,
    UNREACHABLE,
    DsdvUpdate,
    FsrScopedUpdate,
    OlsrHello,
    OlsrTc,
    RoutingProtocol,
    bfs_hops,
)
from .dsdv import Dsdv
from .fsr import Fsr
from .olsr import Olsr, compute_mpr

PROTOCOL_NAMES = ("dsdv", "olsr", "fsr")


def make_protocol(node_id: int, cfg) -> RoutingProtocol:
    """Instantiate the protocol named in the scenario config for one node."""
    name = cfg.protocol.name
    if name == "dsdv":
        return Dsdv(
            node_id, cfg.network.nodes,
            periodic_s=cfg.resolved_periodic(),
            settling_s=cfg.resolved_settling(),
        )
    if name == "olsr":
        return Olsr(node_id, cfg.network.nodes, hello_s=cfg.protocol.hello_s)
    if name == "fsr":
        return Fsr(
            node_id, cfg.network.nodes,
            periodic_s=cfg.resolved_periodic(),
            scope_hops=cfg.protocol.fsr_scope_hops,
            slow_factor=cfg.protocol.fsr_slow_factor,
        )
    raise ValueError(f"unknown protocol {name!r}")


__all__ = [
    "RoutingProtocol",
    "Dsdv",
    "Olsr",
    "Fsr",
    "compute_mpr",
    "make_protocol",
    "bfs_hops",
    "DsdvUpdate",
    "OlsrHello",
    "OlsrTc",
    "FsrScopedUpdate",
    "PROTOCOL_NAMES",
    "HEADER_BYTES",
    "ENTRY_BYTES",
    "UNREACHABLE",
]
