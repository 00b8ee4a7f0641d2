"""Backend selection for the hot link-scan kernel.

The compiled extension is preferred when importable; the pure-Python
fallback is numerically identical.  Set ROUTELOAD_KERNEL=py to force the
fallback (useful for benchmarking), or call set_backend() at runtime.
"""

from __future__ import annotations

import os

from . import _linkscan_py

try:
    from . import _linkscan as _compiled
except ImportError:
    _compiled = None

_BACKENDS = {"py": _linkscan_py}
if _compiled is not None:
    _BACKENDS["c"] = _compiled

_forced = os.environ.get("ROUTELOAD_KERNEL", "").strip().lower()
if _forced and _forced != "auto":
    if _forced not in _BACKENDS:
        raise ImportError(
            f"ROUTELOAD_KERNEL={_forced!r} requested but that backend is "
            f"unavailable (have: {sorted(_BACKENDS)})"
        )
    _active = _forced
else:
    _active = "c" if _compiled is not None else "py"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r} (have: {sorted(_BACKENDS)})")
    _active = name


def scan_links(xs, ys, adj, range2):
    """Rescan all node pairs against range2, updating adj in place.

    Returns the list of (i, j, up) threshold crossings in row-major pair
    order, deterministic for a given backend and identical across backends.
    """
    return _BACKENDS[_active].scan_links(xs, ys, adj, range2)


def pair_distances_sq(xs, ys, out):
    return _BACKENDS[_active].pair_distances_sq(xs, ys, out)
