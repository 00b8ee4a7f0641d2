"""Routing-overhead modeling and simulation of proactive MANET protocols.

Two halves behind one package:

  * `routeload.model` — closed-form overhead equations (packet failure,
    periodic, triggered), their sensitivities, and an optimal-interval
    solver, with finite-difference self-verification.
  * `routeload.simcore` / `routeload.protocols` — a deterministic
    discrete-event simulator of DSDV, OLSR and FSR over mobile wireless
    multi-hop networks, reporting throughput, end-to-end delay and
    normalized routing load.

The `routeload` CLI exposes both; see README for usage.
"""

from . import model
from .config import ScenarioConfig, apply_overrides, load_config
from .metrics import MetricsRecord
from .simcore import Simulation, run_scenario

__version__ = "0.1.0"

__all__ = [
    "model",
    "ScenarioConfig",
    "load_config",
    "apply_overrides",
    "MetricsRecord",
    "Simulation",
    "run_scenario",
    "__version__",
]
