"""FSR: scoped exchange cadence, merge-only dissemination, no triggers."""

from routeload.protocols import FsrScopedUpdate
from routeload.protocols.fsr import Fsr


def upd(origin, entries, scope="inner", t=0.0):
    return FsrScopedUpdate(origin=origin, created=t, entries=tuple(entries), scope=scope)


def test_no_trigger_on_link_down():
    f = Fsr(0, 5, periodic_s=1.0)
    f.on_control_message(upd(1, [(1, 1, (0, 2))]), sender=1, now=0.5)
    out = f.on_link_change(1, up=False, now=1.0)
    assert out == []  # no triggered updates in FSR
    # but the local state dropped the neighbor for the next exchange
    assert 1 not in f.neighbors


def test_messages_never_forwarded():
    f = Fsr(0, 5, periodic_s=1.0)
    out = f.on_control_message(upd(1, [(2, 3, (1,))]), sender=1, now=0.5)
    assert out == []
    assert f.lsdb[2] == (3, frozenset({1}))


def test_newer_sequence_wins_merge():
    f = Fsr(0, 5, periodic_s=1.0)
    f.on_control_message(upd(1, [(2, 3, (1,))]), sender=1, now=0.5)
    f.on_control_message(upd(1, [(2, 2, (1, 4))]), sender=1, now=0.6)
    assert f.lsdb[2] == (3, frozenset({1}))  # stale seq 2 ignored
    f.on_control_message(upd(1, [(2, 5, (1, 4))]), sender=1, now=0.7)
    assert f.lsdb[2] == (5, frozenset({1, 4}))


def test_sender_becomes_neighbor():
    f = Fsr(0, 5, periodic_s=1.0)
    f.on_control_message(upd(3, [(3, 1, ())]), sender=3, now=0.5)
    assert 3 in f.neighbors
    assert f.next_hop(3, 0.6) == 3


def test_inner_scope_limits_entries():
    f = Fsr(0, 10, periodic_s=1.0, scope_hops=2, slow_factor=3)
    # chain 0-1-2-3: 3 is three hops out
    f.on_control_message(upd(1, [(1, 1, (0, 2)), (2, 1, (1, 3)), (3, 1, (2,))]),
                         sender=1, now=0.1)
    msgs = f.on_timer("scoped", 1.0)  # tick 1: inner
    assert msgs[0].scope == "inner"
    origins = [e[0] for e in msgs[0].entries]
    assert 0 in origins and 1 in origins and 2 in origins
    assert 3 not in origins  # beyond the 2-hop scope
    f.on_timer("scoped", 2.0)  # tick 2: inner
    full = f.on_timer("scoped", 3.0)  # tick 3: full table
    assert full[0].scope == "full"
    assert 3 in [e[0] for e in full[0].entries]


def test_fast_slow_cadence_1_to_3():
    f = Fsr(0, 4, periodic_s=1.0, slow_factor=3)
    scopes = [f.on_timer("scoped", float(t + 1))[0].scope for t in range(99)]
    assert scopes.count("full") == 33
    assert scopes.count("inner") == 66


def test_entry_emission_ratio_on_static_line():
    # five-node line 0-1-2-3-4, viewed from node 0: nodes 3 and 4 are outer
    f = Fsr(0, 5, periodic_s=1.0, slow_factor=3)
    near_emissions = 0
    far_emissions = 0
    for t in range(1, 101):
        # the neighbor's own periodic exchange keeps it alive and refreshes
        # the topology entries each round
        f.on_control_message(
            upd(1, [(1, t, (0, 2)), (2, t, (1, 3)), (3, t, (2, 4)), (4, t, (3,))],
                t=t - 0.5),
            sender=1, now=t - 0.5,
        )
        msg = f.on_timer("scoped", float(t))[0]
        origins = [e[0] for e in msg.entries]
        near_emissions += sum(1 for o in origins if o in (0, 1, 2))
        far_emissions += sum(1 for o in origins if o in (3, 4))
    # near entries ride every update, far entries only each slow round
    assert near_emissions == 3 * 100
    assert far_emissions == 2 * (100 // 3)
    # per-entry emission frequency ratio is exactly the slow factor
    assert (near_emissions / 3) / (far_emissions / 2) == 100 / (100 // 3)


def test_own_entry_tracks_neighbors():
    f = Fsr(0, 4, periodic_s=1.0)
    f.on_control_message(upd(1, [(1, 1, (0,))]), sender=1, now=0.1)
    f.on_control_message(upd(2, [(2, 1, (0,))]), sender=2, now=0.2)
    msg = f.on_timer("scoped", 1.0)[0]
    own = [e for e in msg.entries if e[0] == 0][0]
    assert set(own[2]) == {1, 2}
    f.on_link_change(2, up=False, now=1.5)
    msg = f.on_timer("scoped", 2.0)[0]
    own = [e for e in msg.entries if e[0] == 0][0]
    assert set(own[2]) == {1}
