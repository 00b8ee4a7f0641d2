# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled O(n^2) link-scan kernel.

Semantics must stay bit-identical to _linkscan_py.scan_links: same pair
order, same double arithmetic (the build disables FP contraction so
dx*dx + dy*dy matches the interpreter exactly).
"""


def scan_links(double[::1] xs, double[::1] ys, unsigned char[:, ::1] adj,
               double range2):
    """Update the adjacency matrix in place; return changed (i, j, up) pairs."""
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy
    cdef unsigned char up, was
    changes = []
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            up = 1 if dx * dx + dy * dy <= range2 else 0
            was = adj[i, j]
            if up != was:
                adj[i, j] = up
                adj[j, i] = up
                changes.append((i, j, up == 1))
    return changes


def pair_distances_sq(double[::1] xs, double[::1] ys, double[::1] out):
    """Row-major upper-triangle squared distances, for benchmarking."""
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i, j, k = 0
    cdef double dx, dy
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            out[k] = dx * dx + dy * dy
            k += 1
