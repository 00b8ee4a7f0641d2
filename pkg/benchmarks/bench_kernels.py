#!/usr/bin/env python3
"""Benchmark the compiled link-scan kernel against the pure-Python fallback.

Two views:
  * microbenchmark of the O(n^2) pair scan at several node counts,
  * one full simulation run per backend (identical seed; also asserts the
    backends produce identical metrics).

Run: python benchmarks/bench_kernels.py
"""

import random
import time

import numpy as np

from routeload.config import ScenarioConfig, apply_overrides
from routeload.simcore import kernels, run_scenario


def bench_scan(n: int, steps: int, backend: str) -> float:
    rng = np.random.default_rng(12)
    xs = rng.uniform(0, 1000, n)
    ys = rng.uniform(0, 1000, n)
    adj = np.zeros((n, n), dtype=np.uint8)
    vel = rng.uniform(-10, 10, (2, n))
    kernels.set_backend(backend)
    kernels.scan_links(xs, ys, adj, 250.0 * 250.0)  # prime
    t0 = time.perf_counter()
    for _ in range(steps):
        xs += vel[0] * 0.05
        ys += vel[1] * 0.05
        kernels.scan_links(xs, ys, adj, 250.0 * 250.0)
    return time.perf_counter() - t0


def bench_full_run(backend: str):
    cfg = apply_overrides(ScenarioConfig(), {
        "protocol.name": "fsr",
        "mobility.pause_s": 0.0,
        "sim.duration_s": 60.0,
        "mobility.step_s": 0.1,  # scan-heavy cadence
    })
    kernels.set_backend(backend)
    t0 = time.perf_counter()
    rec = run_scenario(cfg, seed=3)
    return time.perf_counter() - t0, rec


def main():
    backends = kernels.available_backends()
    print(f"available backends: {backends}")
    if "c" not in backends:
        print("compiled kernel missing; only the fallback will be timed")

    print("\npair-scan microbenchmark (seconds, lower is better)")
    print(f"{'n':>6} {'steps':>6}" + "".join(f" {b:>10}" for b in backends) + "  speedup")
    for n, steps in ((50, 400), (200, 100), (800, 12)):
        times = {b: bench_scan(n, steps, b) for b in backends}
        row = f"{n:>6} {steps:>6}" + "".join(f" {times[b]:>10.4f}" for b in backends)
        if "c" in times and "py" in times:
            row += f"  {times['py'] / times['c']:.1f}x"
        print(row)

    print("\nfull simulation run (fsr, n=50, 60 s, 0.1 s mobility step)")
    records = {}
    for b in backends:
        wall, rec = bench_full_run(b)
        records[b] = rec
        print(f"  {b:>3}: {wall:.2f} s wall")
    if len(records) == 2:
        same = records["c"] == records["py"]
        print(f"  backend metrics identical: {same}")
        if not same:
            raise SystemExit("backend divergence: compiled and fallback runs differ")


if __name__ == "__main__":
    main()
