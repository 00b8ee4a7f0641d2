"""Closed-form routing-overhead model for proactive protocols.

Aggregate overhead of a table-driven protocol is modeled as the sum of
three components:

  * packet-failure overhead: data packets lost because a route broke
    before the next table refresh,
  * periodic overhead: table broadcasts, scaling as k*n^3/(B*T_pr),
  * trigger overhead: out-of-schedule updates, a per-node ceiling ratio.

All sensitivities (rates of change with respect to each parameter) are
provided in closed form, plus a finite-difference self-verifier for the
smooth parts.  Ceiling expressions are not differentiable; every function
that involves them takes a `ceiling_mode`:

  * PAPER_FAITHFUL  — evaluate the published ceiling expressions verbatim,
  * MEASURE_ZERO    — treat every ceiling as locally constant (its true
    derivative almost everywhere) and differentiate the remaining smooth
    factors.

Finite-difference checks validate MEASURE_ZERO by construction; the
PAPER_FAITHFUL forms are reproduced as printed.

All functions are pure; ModelParams is immutable and safe to share across
threads.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

__all__ = [
    "CeilingMode",
    "CeilingDiscontinuityWarning",
    "ModelParams",
    "OverheadBreakdown",
    "uplink_change_probability",
    "packet_failure_overhead",
    "periodic_overhead",
    "trigger_ratio",
    "trigger_overhead",
    "aggregate_overhead",
    "sensitivity_tpr",
    "sensitivity_lambda",
    "sensitivity_t",
    "sensitivity_mu",
    "sensitivity_n",
    "total_derivative_tpr",
    "stationarity_residual",
    "solve_optimal_tpr",
    "update_coefficient_residual",
    "olsr_overhead",
    "olsr_sensitivity_h",
    "central_difference",
    "verify_sensitivities",
]

RESIDUAL_TOL = 1e-9
BRACKET_TOL = 1e-12


class CeilingMode(enum.Enum):
    PAPER_FAITHFUL = "paper"
    MEASURE_ZERO = "measure"


class CeilingDiscontinuityWarning(UserWarning):
    """Derivative evaluated exactly at a ceiling jump; value is one-sided."""


@dataclass(frozen=True)
class ModelParams:
    """All symbols of the overhead model in one validated record.

    Units: bandwidth_B in bits/s, time quantities in seconds, n / l_avg /
    pn_avg dimensionless counts.  `t_trig` is the triggered-update epoch T.
    `mu_k` may be set to a large sentinel (e.g. 1e12) to model links that
    never go down.
    """

    n: int
    bandwidth_B: float
    k: float = 1.0
    t_pr: float = 1.0
    mu_k: float = 100.0
    lambda_rate: float = 0.0
    t_trig: float = 10.0
    l_avg: int = 0
    pn_avg: int = 0
    hello_H: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n}")
        if self.bandwidth_B <= 0:
            raise ValueError(f"bandwidth_B must be > 0, got {self.bandwidth_B}")
        if self.k <= 0:
            raise ValueError(f"k must be > 0, got {self.k}")
        if self.t_pr <= 0:
            raise ValueError(f"t_pr must be > 0, got {self.t_pr}")
        if self.mu_k <= 0:
            raise ValueError(f"mu_k must be > 0, got {self.mu_k}")
        if self.lambda_rate < 0:
            raise ValueError(f"lambda_rate must be >= 0, got {self.lambda_rate}")
        if self.t_trig <= 0:
            raise ValueError(f"t_trig must be > 0, got {self.t_trig}")
        if int(self.l_avg) != self.l_avg or self.l_avg < 0:
            raise ValueError(f"l_avg must be an integer >= 0, got {self.l_avg}")
        if int(self.pn_avg) != self.pn_avg or self.pn_avg < 0:
            raise ValueError(f"pn_avg must be an integer >= 0, got {self.pn_avg}")
        if self.hello_H <= 0:
            raise ValueError(f"hello_H must be > 0, got {self.hello_H}")

    @property
    def c_rate(self) -> float:
        """Combined arrival factor C = pn_avg * lambda_rate."""
        return self.pn_avg * self.lambda_rate


@dataclass(frozen=True)
class OverheadBreakdown:
    """The three overhead components plus their raw sum.

    ro_pf is expected failed packets per periodic interval, ro_pr is the
    bandwidth-normalized periodic control traffic, ro_tr is a dimensionless
    per-node ratio sum.  ro_total is the model's raw sum of the three; the
    components keep their natural units and are reported separately in all
    outputs.
    """

    ro_pf: float
    ro_pr: float
    ro_tr: float
    ro_total: float

    def __post_init__(self):
        if self.ro_pf < 0 or self.ro_pr < 0 or self.ro_tr < 0:
            raise ValueError("overhead components must be nonnegative")
        if self.ro_total != self.ro_pf + self.ro_pr + self.ro_tr:
            raise ValueError("ro_total must equal the exact component sum")

    @classmethod
    def from_components(cls, ro_pf: float, ro_pr: float, ro_tr: float) -> "OverheadBreakdown":
        return cls(ro_pf, ro_pr, ro_tr, ro_pf + ro_pr + ro_tr)


# ---------------------------------------------------------------------------
# Overhead components
# ---------------------------------------------------------------------------

def uplink_change_probability(r: int, t_pr: float, mu_k: float) -> float:
    """Probability that a link on the first r hops goes down within t_pr.

    Exponential uplink model: 1 - exp(-r*t_pr/mu_k).  Nondecreasing in both
    r and t_pr; exactly 0 when r*t_pr == 0.
    """
    if mu_k <= 0:
        raise ValueError(f"mu_k must be > 0, got {mu_k}")
    if r < 0:
        raise ValueError(f"hop index must be >= 0, got {r}")
    if t_pr < 0:
        raise ValueError(f"t_pr must be >= 0, got {t_pr}")
    return -math.expm1(-r * t_pr / mu_k)


def packet_failure_overhead(params: ModelParams) -> float:
    """Expected data packets lost to route breakage per periodic interval.

    pn_avg * sum_{r=0}^{l_avg} Q_r(t_pr) * lambda_rate * t_pr, where the
    per-interval arrival count is lambda_rate * t_pr.
    """
    arrivals = params.lambda_rate * params.t_pr
    q_sum = math.fsum(
        uplink_change_probability(r, params.t_pr, params.mu_k)
        for r in range(params.l_avg + 1)
    )
    return params.pn_avg * q_sum * arrivals


def periodic_overhead(params: ModelParams) -> float:
    """Bandwidth-normalized periodic table broadcast cost: k*n^3/(B*t_pr)."""
    return params.k * params.n**3 / (params.bandwidth_B * params.t_pr)


def trigger_ratio(t_trig: float, t_pr: float) -> float:
    """Per-node triggered-update ratio ceil(T/t_pr) / (T/t_pr).

    Always in [1, 1 + t_pr/t_trig); equals 1 exactly when T is a positive
    integer multiple of t_pr.
    """
    if t_trig <= 0:
        raise ValueError(f"t_trig must be > 0, got {t_trig}")
    if t_pr <= 0:
        raise ValueError(f"t_pr must be > 0, got {t_pr}")
    x = t_trig / t_pr
    return math.ceil(x) / x


def trigger_overhead(params: ModelParams) -> float:
    """Network-wide trigger overhead: every node contributes one ratio."""
    return params.n * trigger_ratio(params.t_trig, params.t_pr)


def aggregate_overhead(params: ModelParams) -> OverheadBreakdown:
    """Sum of packet-failure, periodic and trigger overhead."""
    return OverheadBreakdown.from_components(
        packet_failure_overhead(params),
        periodic_overhead(params),
        trigger_overhead(params),
    )


# ---------------------------------------------------------------------------
# Sensitivities (partial derivatives of the aggregate overhead)
# ---------------------------------------------------------------------------

def _warn_if_on_jump(params: ModelParams, what: str) -> None:
    # The underlying aggregate jumps where t_trig/t_pr is an integer.
    x = params.t_trig / params.t_pr
    if x == math.floor(x):
        warnings.warn(
            f"{what} evaluated at a ceiling discontinuity "
            f"(t_trig/t_pr = {x:g} is an integer); value is one-sided",
            CeilingDiscontinuityWarning,
            stacklevel=3,
        )


def sensitivity_tpr(
    params: ModelParams, mode: CeilingMode = CeilingMode.PAPER_FAITHFUL
) -> float:
    """Rate of change of the aggregate overhead in the periodic interval.

    Smooth part: C * sum_r [1 - e^-x + x e^-x] - k n^3/(B t_pr^2) with
    x = r*t_pr/mu_k.  The trigger part follows `mode`.
    """
    _warn_if_on_jump(params, "sensitivity_tpr")
    tp, mu, t = params.t_pr, params.mu_k, params.t_trig
    smooth = params.c_rate * math.fsum(
        -math.expm1(-r * tp / mu) + (r * tp / mu) * math.exp(-r * tp / mu)
        for r in range(params.l_avg + 1)
    )
    smooth -= params.k * params.n**3 / (params.bandwidth_B * tp**2)
    if mode is CeilingMode.PAPER_FAITHFUL:
        trig = params.n * (math.ceil(-t / tp**2) + t / tp**2) / (t**2 / tp**2)
    else:
        # ceil(T/t_pr) frozen, remaining factor t_pr/T differentiated
        trig = params.n * math.ceil(t / tp) / t
    return smooth + trig


def sensitivity_lambda(params: ModelParams) -> float:
    """Rate of change in the packet arrival rate; always >= 0."""
    tp, mu = params.t_pr, params.mu_k
    return params.pn_avg * math.fsum(
        tp * -math.expm1(-r * tp / mu) for r in range(params.l_avg + 1)
    )


def sensitivity_t(
    params: ModelParams, mode: CeilingMode = CeilingMode.PAPER_FAITHFUL
) -> float:
    """Rate of change in the triggered-update epoch T.

    The published form sums an identical ceiling term over r = 0..n; it is
    identically zero when t_pr == 1.  MEASURE_ZERO gives the almost-
    everywhere derivative of the trigger component instead.
    """
    _warn_if_on_jump(params, "sensitivity_t")
    tp, t = params.t_pr, params.t_trig
    if mode is CeilingMode.PAPER_FAITHFUL:
        term = (math.ceil(1 / tp**2) - 1 / tp**2) / (t**2 / tp**2)
        return (params.n + 1) * term
    return -params.n * math.ceil(t / tp) * tp / t**2


def sensitivity_mu(params: ModelParams) -> float:
    """Rate of change in mean link uptime; always <= 0."""
    tp, mu = params.t_pr, params.mu_k
    return (params.c_rate * tp) * math.fsum(
        -(r * tp / mu**2) * math.exp(-r * tp / mu)
        for r in range(params.l_avg + 1)
    )


def sensitivity_n(params: ModelParams) -> float:
    """Rate of change in node count: 3*k*n^2/(B*t_pr)."""
    return 3.0 * params.k * params.n**2 / (params.bandwidth_B * params.t_pr)


def total_derivative_tpr(
    params: ModelParams,
    dT_dTpr: float,
    mode: CeilingMode = CeilingMode.PAPER_FAITHFUL,
) -> float:
    """Total derivative in t_pr given a coupling slope dT/dt_pr."""
    if not math.isfinite(dT_dTpr):
        raise ValueError(f"coupling slope must be finite, got {dT_dTpr}")
    return sensitivity_tpr(params, mode) + sensitivity_t(params, mode) * dT_dTpr


# ---------------------------------------------------------------------------
# Stationarity and the optimal periodic interval
# ---------------------------------------------------------------------------

def stationarity_residual(params: ModelParams) -> float:
    """Signed LHS - RHS of the stationarity condition for t_pr.

    LHS = C * sum_{r=0}^{l_avg} [(1 - e^-x) + e^-x], which collapses to
    C*(l_avg + 1) exactly; RHS = k*n^3/t_pr^2 minus the ceiling trigger
    term.  A zero crossing marks the optimal periodic interval.
    """
    tp, t = params.t_pr, params.t_trig
    lhs = params.c_rate * (params.l_avg + 1)
    rhs = params.k * params.n**3 / tp**2
    rhs -= (math.ceil(-t / tp**2) + t / tp**2) / (t**2 / tp**2)
    return lhs - rhs


def solve_optimal_tpr(params: ModelParams, bracket: tuple[float, float]) -> float:
    """Bisect the stationarity residual to find the optimal t_pr.

    Stops when |residual| < 1e-9 or the bracket width falls below 1e-12.
    Raises NoRootInBracketError when the residual does not change sign.
    """
    from .errors import NoRootInBracketError

    lo, hi = bracket
    if lo > hi:
        lo, hi = hi, lo
    f = lambda tp: stationarity_residual(replace(params, t_pr=tp))
    f_lo, f_hi = f(lo), f(hi)
    if abs(f_lo) <= RESIDUAL_TOL:
        return lo
    if abs(f_hi) <= RESIDUAL_TOL:
        return hi
    if f_lo * f_hi > 0:
        raise NoRootInBracketError(
            f"residual has the same sign at both ends of [{lo:g}, {hi:g}] "
            f"({f_lo:g}, {f_hi:g})"
        )
    # Refine past BRACKET_TOL while the residual target is unmet: steep
    # residuals need near-ulp brackets, and only jump crossings (where no
    # point satisfies the residual tolerance) stop on width alone.
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # float exhaustion
            break
        f_mid = f(mid)
        if abs(f_mid) <= RESIDUAL_TOL:
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def update_coefficient_residual(params: ModelParams, h: float) -> float:
    """Stationarity residual reparameterized by h = t_pr / mu_k."""
    if h <= 0:
        raise ValueError(f"update coefficient must be > 0, got {h}")
    return stationarity_residual(replace(params, t_pr=params.mu_k * h))


# ---------------------------------------------------------------------------
# OLSR HELLO/TC decomposition
# ---------------------------------------------------------------------------

def olsr_overhead(params: ModelParams) -> OverheadBreakdown:
    """Overhead with the periodic term split into HELLO and TC traffic.

    HELLO interval H, TC interval 2H, so the periodic component is
    k*n^3/(B*H) + k*n^3/(2*B*H) and triggered updates see the combined
    epoch 3H.  Packet-failure overhead is unchanged.
    """
    h = params.hello_H
    kn3 = params.k * params.n**3
    ro_pr = kn3 / (params.bandwidth_B * h) + kn3 / (params.bandwidth_B * 2 * h)
    ro_tr = params.n * trigger_ratio(params.t_trig, 3 * h)
    return OverheadBreakdown.from_components(
        packet_failure_overhead(params), ro_pr, ro_tr
    )


def olsr_sensitivity_h(
    params: ModelParams, mode: CeilingMode = CeilingMode.PAPER_FAITHFUL
) -> float:
    """Rate of change of the HELLO/TC overhead in the HELLO interval.

    Smooth part: -k*n^3/(B*H^2) - k*n^3/(2*B*H^2) = -(3/2)*k*n^3/(B*H^2).
    """
    h, t = params.hello_H, params.t_trig
    kn3 = params.k * params.n**3
    smooth = -kn3 / (params.bandwidth_B * h**2) - kn3 / (params.bandwidth_B * 2 * h**2)
    eff = 3 * h
    if mode is CeilingMode.PAPER_FAITHFUL:
        trig = params.n * (math.ceil(-t / eff**2) + t / eff**2) / (t**2 / eff**2)
    else:
        # ceil(T/3H) frozen; d/dH of n*ceil(T/3H)*3H/T
        trig = 3 * params.n * math.ceil(t / eff) / t
    return smooth + trig


# ---------------------------------------------------------------------------
# Finite-difference self-verifier
# ---------------------------------------------------------------------------

def central_difference(f, x: float, h: float) -> float:
    """Symmetric two-point derivative estimate of f at x."""
    return (f(x + h) - f(x - h)) / (2 * h)


def verify_sensitivities(params: ModelParams, rel_step: float = 1e-5) -> dict:
    """Check every smooth analytic derivative against a central difference.

    Returns {name: (analytic, numeric, rel_err)}.  Ceiling parts are
    excluded: the t_pr check differentiates only the smooth packet-failure
    plus periodic sum, and the H check differentiates only the periodic
    OLSR term, matching the closed forms being verified.
    """

    def pf_pr(tp: float) -> float:
        p = replace(params, t_pr=tp)
        return packet_failure_overhead(p) + periodic_overhead(p)

    def smooth_tpr(p: ModelParams) -> float:
        tp, mu = p.t_pr, p.mu_k
        s = p.c_rate * math.fsum(
            -math.expm1(-r * tp / mu) + (r * tp / mu) * math.exp(-r * tp / mu)
            for r in range(p.l_avg + 1)
        )
        return s - p.k * p.n**3 / (p.bandwidth_B * tp**2)

    def olsr_pr(h: float) -> float:
        p = replace(params, hello_H=h)
        kn3 = p.k * p.n**3
        return kn3 / (p.bandwidth_B * h) + kn3 / (p.bandwidth_B * 2 * h)

    checks = {
        "tpr_smooth": (
            smooth_tpr(params),
            central_difference(pf_pr, params.t_pr, rel_step * params.t_pr),
        ),
        "lambda": (
            sensitivity_lambda(params),
            central_difference(
                lambda lam: packet_failure_overhead(replace(params, lambda_rate=lam)),
                params.lambda_rate,
                rel_step * max(params.lambda_rate, 1.0),
            ),
        ),
        "mu": (
            sensitivity_mu(params),
            central_difference(
                lambda mu: packet_failure_overhead(replace(params, mu_k=mu)),
                params.mu_k,
                rel_step * params.mu_k,
            ),
        ),
        "n": (
            sensitivity_n(params),
            central_difference(
                lambda x: params.k * x**3 / (params.bandwidth_B * params.t_pr),
                float(params.n),
                rel_step * params.n,
            ),
        ),
        "olsr_h_smooth": (
            -1.5 * params.k * params.n**3 / (params.bandwidth_B * params.hello_H**2),
            central_difference(olsr_pr, params.hello_H, rel_step * params.hello_H),
        ),
    }
    out = {}
    for name, (analytic, numeric) in checks.items():
        scale = max(abs(analytic), abs(numeric), 1e-300)
        out[name] = (analytic, numeric, abs(analytic - numeric) / scale)
    return out
