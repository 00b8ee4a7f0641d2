"""Route convergence against an independent shortest-path oracle.

Random static connected topologies; after the protocol's convergence
horizon every next-hop chain must realize the exact Dijkstra hop count
(networkx is the oracle, independent of the protocols' own BFS).
"""

import random

import networkx as nx
import pytest

from routeload.config import ScenarioConfig, apply_overrides
from routeload.simcore.engine import Simulation

RANGE_M = 250.0


def random_connected_positions(rng: random.Random, n: int, area: float):
    """Uniform placements redrawn until the unit-disk graph is connected."""
    while True:
        pts = [(rng.uniform(0, area), rng.uniform(0, area)) for _ in range(n)]
        g = nx.Graph()
        g.add_nodes_from(range(n))
        for i in range(n):
            for j in range(i + 1, n):
                dx = pts[i][0] - pts[j][0]
                dy = pts[i][1] - pts[j][1]
                if dx * dx + dy * dy <= RANGE_M * RANGE_M:
                    g.add_edge(i, j)
        if nx.is_connected(g):
            return pts, g


def build_sim(proto: str, n: int, duration: float, seed: int) -> Simulation:
    overrides = {
        "network.nodes": n,
        "mobility.model": "static",
        "traffic.flows": 0,
        "sim.duration_s": duration,
        "protocol.name": proto,
        "protocol.periodic_s": 1.0,  # dsdv/fsr interval; olsr uses hello_s
        "protocol.hello_s": 1.0,
        "sim.seed": seed,
    }
    cfg = apply_overrides(ScenarioConfig(), overrides)
    return Simulation(cfg, seed)


def walk_next_hops(sim: Simulation, src: int, dst: int, now: float):
    """Follow next_hop pointers; returns hop count or None on a dead end."""
    hops = 0
    node = src
    while node != dst:
        nh = sim.protocols[node].next_hop(dst, now)
        if nh is None or hops > sim.n:
            return None
        node = nh
        hops += 1
    return hops


# convergence horizon: 3 periodic rounds for the table-driven protocols,
# one full slow-scope round (3 fast intervals) for FSR, plus margin for
# phase offsets and cascades
HORIZON = {"dsdv": 4.5, "olsr": 7.0, "fsr": 5.5}


@pytest.mark.parametrize("proto", ["dsdv", "olsr", "fsr"])
def test_static_tables_match_dijkstra(proto):
    rng = random.Random(975)
    for trial in range(6):
        n = rng.randint(8, 24)
        pts, g = random_connected_positions(rng, n, area=700.0)
        dist = dict(nx.all_pairs_shortest_path_length(g))
        sim = build_sim(proto, n, duration=HORIZON[proto], seed=trial + 1)
        sim.set_positions(pts)
        sim.run()
        now = sim.queue.now
        for s in range(n):
            for d in range(n):
                if s == d:
                    continue
                got = walk_next_hops(sim, s, d, now)
                assert got == dist[s][d], (
                    f"{proto} trial {trial}: {s}->{d} walked {got}, "
                    f"oracle {dist[s][d]}"
                )


def test_loop_freedom_in_converged_snapshot():
    rng = random.Random(1234)
    pts, g = random_connected_positions(rng, 15, area=700.0)
    oracle = dict(nx.all_pairs_shortest_path_length(g))
    for proto in ("dsdv", "olsr", "fsr"):
        sim = build_sim(proto, 15, duration=HORIZON[proto], seed=3)
        sim.set_positions(pts)
        sim.run()
        now = sim.queue.now
        for s in range(15):
            for d in range(15):
                if s == d:
                    continue
                # each next_hop step strictly decreases oracle distance
                node = s
                while node != d:
                    nh = sim.protocols[node].next_hop(d, now)
                    assert nh is not None
                    assert oracle[nh][d] < oracle[node][d]
                    node = nh
