"""Pure-Python fallback for the link-scan kernel.

Kept semantically and numerically identical to _linkscan.pyx: same pair
order, same IEEE double arithmetic.
"""

from __future__ import annotations


def scan_links(xs, ys, adj, range2):
    """Update the adjacency matrix in place; return changed (i, j, up) pairs."""
    n = len(xs)
    changes = []
    for i in range(n):
        xi = float(xs[i])
        yi = float(ys[i])
        row = adj[i]
        for j in range(i + 1, n):
            dx = xi - float(xs[j])
            dy = yi - float(ys[j])
            up = dx * dx + dy * dy <= range2
            if up != bool(row[j]):
                adj[i, j] = up
                adj[j, i] = up
                changes.append((i, j, up))
    return changes


def pair_distances_sq(xs, ys, out):
    """Row-major upper-triangle squared distances, for benchmarking."""
    n = len(xs)
    k = 0
    for i in range(n):
        xi = float(xs[i])
        yi = float(ys[i])
        for j in range(i + 1, n):
            dx = xi - float(xs[j])
            dy = yi - float(ys[j])
            out[k] = dx * dx + dy * dy
            k += 1
