"""Random-waypoint mobility over a square area.

Each node picks a uniform waypoint and speed, travels in a straight line,
pauses on arrival, then repeats.  All randomness comes from the run's
seeded generator, drawn in node-id order so runs stay reproducible.
"""

from __future__ import annotations

import math
import random

import numpy as np

from . import kernels

MOVING = 0
PAUSED = 1


class WaypointMobility:
    def __init__(
        self,
        n: int,
        area: float,
        speed_min: float,
        speed_max: float,
        pause_s: float,
        rng: random.Random,
    ):
        self.n = n
        self.area = area
        self.speed_min = speed_min
        self.speed_max = speed_max
        self.pause_s = pause_s
        self.rng = rng
        self.xs = np.empty(n, dtype=np.float64)
        self.ys = np.empty(n, dtype=np.float64)
        self.mode = [PAUSED] * n
        self.pause_left = [0.0] * n
        self.target = [(0.0, 0.0)] * n
        self.speed = [0.0] * n
        for i in range(n):
            self.xs[i] = rng.uniform(0.0, area)
            self.ys[i] = rng.uniform(0.0, area)
        self.enabled = speed_max > 0
        if self.enabled:
            for i in range(n):
                self._pick_waypoint(i)

    def _pick_waypoint(self, i: int) -> None:
        self.target[i] = (self.rng.uniform(0.0, self.area), self.rng.uniform(0.0, self.area))
        self.speed[i] = self.rng.uniform(self.speed_min, self.speed_max)
        self.mode[i] = MOVING

    def advance(self, dt: float) -> None:
        """Move every node dt seconds along its waypoint trajectory."""
        if not self.enabled:
            return
        for i in range(self.n):
            if self.mode[i] == PAUSED:
                self.pause_left[i] -= dt
                if self.pause_left[i] <= 0.0:
                    self._pick_waypoint(i)
                continue
            tx, ty = self.target[i]
            dx = tx - float(self.xs[i])
            dy = ty - float(self.ys[i])
            dist = math.hypot(dx, dy)
            step = self.speed[i] * dt
            if step >= dist:
                self.xs[i] = tx
                self.ys[i] = ty
                if self.pause_s > 0.0:
                    self.mode[i] = PAUSED
                    self.pause_left[i] = self.pause_s
                else:
                    self._pick_waypoint(i)
            else:
                self.xs[i] = float(self.xs[i]) + dx / dist * step
                self.ys[i] = float(self.ys[i]) + dy / dist * step


class LinkTable:
    """Symmetric unit-disk link state with mid-flight break tracking."""

    def __init__(self, n: int, range_m: float):
        self.n = n
        self.range2 = range_m * range_m
        self.adj = np.zeros((n, n), dtype=np.uint8)
        # last time the pair (i, j) transitioned to down; -inf = never
        self.last_down = np.full((n, n), -math.inf, dtype=np.float64)

    def rescan(self, xs, ys, now: float) -> list[tuple[int, int, bool]]:
        """Refresh all pair states; record down-transitions timestamps."""
        changes = kernels.scan_links(xs, ys, self.adj, self.range2)
        for i, j, up in changes:
            if not up:
                self.last_down[i, j] = now
                self.last_down[j, i] = now
        return changes

    def is_up(self, a: int, b: int) -> bool:
        return bool(self.adj[a, b])

    def stayed_up_since(self, a: int, b: int, t: float) -> bool:
        """True when the link is up now and had no down transition since t."""
        return bool(self.adj[a, b]) and self.last_down[a, b] < t

    def neighbors(self, a: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.adj[a])]
