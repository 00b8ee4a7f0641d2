"""Command-line surface.

Subcommands:
  model eval   — evaluate the overhead model at one parameter point
  model sweep  — grid sweep over one model axis, with all sensitivities
  sim run      — one simulation run
  sim sweep    — cross-product sweep (protocols x axis values x seeds)
  compare      — side-by-side model predictions vs measured counters

CSV goes to --out when given, otherwise to standard output (and is then
the only stdout content); the human-readable report goes to stdout when
the CSV is diverted to a file, to stderr otherwise.  Every CSV starts
with its documented header line; configuration echo follows the data as
trailing '#' comment lines so any output is self-describing.

Exit status: 0 success, 2 usage error, 3 config error, 4 I/O error,
5 internal error.
"""

from __future__ import annotations

import argparse
import math
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor

from . import model as m
from .config import ScenarioConfig, apply_overrides, load_config
from .errors import ConfigError, RouteloadError
from .metrics import MetricsRecord
from .simcore import run_scenario

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_IO = 4
EXIT_INTERNAL = 5

SIM_CSV_HEADER = (
    "protocol,seed,nodes,pause_s,speed_max,throughput_bps,mean_delay_s,nrl,"
    "data_sent,data_delivered,data_dropped,ctrl_periodic,ctrl_triggered"
)
MODEL_EVAL_HEADER = "form,ro_pf_packets,ro_pr_per_bandwidth,ro_tr_ratio,ro_total_sum"
MODEL_SWEEP_HEADER = (
    "axis,value,ro_pf_packets,ro_pr_per_bandwidth,ro_tr_ratio,ro_total_sum,"
    "sens_tpr,sens_lambda,sens_t,sens_mu,sens_n"
)
COMPARE_HEADER = "protocol,quantity,measured,model,ratio,note"


def fmt(x) -> str:
    """CSV cell: floats at 9 significant digits keep outputs byte-stable."""
    if isinstance(x, float):
        return "%.9g" % x
    return str(x)


def _emit(header: str, rows: list[list], meta: list[tuple[str, str]], out_path, report_lines: list[str]):
    lines = [header]
    lines += [",".join(fmt(c) for c in row) for row in rows]
    lines += [f"# {k} = {v}" for k, v in meta]
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
        for line in report_lines:
            print(line)
    else:
        sys.stdout.write(text)
        for line in report_lines:
            print(line, file=sys.stderr)


# ---------------------------------------------------------------------------
# model subcommands
# ---------------------------------------------------------------------------

def _model_params(args) -> m.ModelParams:
    return m.ModelParams(
        n=args.n,
        bandwidth_B=args.bandwidth_b,
        k=args.k,
        t_pr=args.t_pr,
        mu_k=args.mu_k,
        lambda_rate=args.lambda_rate,
        t_trig=args.t_trig,
        l_avg=args.l_avg,
        pn_avg=args.pn_avg,
        hello_H=args.hello_h,
    )


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=50, help="node count")
    p.add_argument("--bandwidth-b", type=float, default=2e6, help="link bandwidth, bits/s")
    p.add_argument("--k", type=float, default=1.0, help="protocol impulse adjustment factor")
    p.add_argument("--t-pr", type=float, default=15.0, help="periodic update interval, s")
    p.add_argument("--mu-k", type=float, default=100.0, help="mean link uptime, s")
    p.add_argument("--lambda-rate", type=float, default=4.0, help="packet arrival rate, pkts/s")
    p.add_argument("--t-trig", type=float, default=10.0, help="triggered-update epoch T, s")
    p.add_argument("--l-avg", type=int, default=3, help="average path length, hops")
    p.add_argument("--pn-avg", type=int, default=10, help="number of active paths")
    p.add_argument("--hello-h", type=float, default=1.0, help="HELLO interval H, s (TC = 2H)")
    p.add_argument(
        "--ceiling-mode", choices=["paper", "measure"], default="paper",
        help="ceiling terms in derivatives: published forms, or zero a.e.",
    )


def _ceiling_mode(args) -> m.CeilingMode:
    return m.CeilingMode.PAPER_FAITHFUL if args.ceiling_mode == "paper" else m.CeilingMode.MEASURE_ZERO


def _model_meta(params: m.ModelParams) -> list[tuple[str, str]]:
    return [
        ("model.n", str(params.n)),
        ("model.bandwidth_B", fmt(params.bandwidth_B)),
        ("model.k", fmt(params.k)),
        ("model.t_pr", fmt(params.t_pr)),
        ("model.mu_k", fmt(params.mu_k)),
        ("model.lambda_rate", fmt(params.lambda_rate)),
        ("model.t_trig", fmt(params.t_trig)),
        ("model.l_avg", str(params.l_avg)),
        ("model.pn_avg", str(params.pn_avg)),
        ("model.hello_H", fmt(params.hello_H)),
    ]


def cmd_model_eval(args) -> int:
    params = _model_params(args)
    if args.olsr:
        bd = m.olsr_overhead(params)
        form = "olsr"
    else:
        bd = m.aggregate_overhead(params)
        form = "aggregate"
    report = [
        f"routing overhead breakdown ({form} form)",
        f"  packet-failure overhead: {bd.ro_pf:.9g} packets per interval",
        f"  periodic overhead:       {bd.ro_pr:.9g} (bits/s, bandwidth-normalized)",
        f"  trigger overhead:        {bd.ro_tr:.9g} (dimensionless ratio sum)",
        f"  total (raw sum):         {bd.ro_total:.9g} (mixed units)",
    ]
    if args.verify:
        for name, (analytic, numeric, rel) in m.verify_sensitivities(params).items():
            report.append(
                f"  fd-check {name}: analytic={analytic:.9g} numeric={numeric:.9g} rel_err={rel:.3g}"
            )
    rows = [[form, bd.ro_pf, bd.ro_pr, bd.ro_tr, bd.ro_total]]
    _emit(MODEL_EVAL_HEADER, rows, _model_meta(params), args.out, report)
    return EXIT_OK


_SWEEP_AXES = {
    "n": lambda p, v: m.ModelParams(**{**_asdict(p), "n": int(round(v))}),
    "t_pr": lambda p, v: m.ModelParams(**{**_asdict(p), "t_pr": v}),
    "mu_k": lambda p, v: m.ModelParams(**{**_asdict(p), "mu_k": v}),
    "lambda": lambda p, v: m.ModelParams(**{**_asdict(p), "lambda_rate": v}),
    "t_trig": lambda p, v: m.ModelParams(**{**_asdict(p), "t_trig": v}),
    "hello": lambda p, v: m.ModelParams(**{**_asdict(p), "hello_H": v}),
}


def _asdict(p: m.ModelParams) -> dict:
    return {
        "n": p.n, "bandwidth_B": p.bandwidth_B, "k": p.k, "t_pr": p.t_pr,
        "mu_k": p.mu_k, "lambda_rate": p.lambda_rate, "t_trig": p.t_trig,
        "l_avg": p.l_avg, "pn_avg": p.pn_avg, "hello_H": p.hello_H,
    }


def cmd_model_sweep(args) -> int:
    if args.min >= args.max:
        raise ConfigError(f"sweep range needs min < max, got [{args.min}, {args.max}]")
    if args.steps < 2:
        raise ConfigError(f"sweep needs at least 2 steps, got {args.steps}")
    base = _model_params(args)
    mode = _ceiling_mode(args)
    make = _SWEEP_AXES[args.axis]
    rows = []
    for i in range(args.steps):
        v = args.min + i * (args.max - args.min) / (args.steps - 1)
        params = make(base, v)
        bd = m.olsr_overhead(params) if args.axis == "hello" else m.aggregate_overhead(params)
        rows.append([
            args.axis, v, bd.ro_pf, bd.ro_pr, bd.ro_tr, bd.ro_total,
            m.sensitivity_tpr(params, mode), m.sensitivity_lambda(params),
            m.sensitivity_t(params, mode), m.sensitivity_mu(params),
            m.sensitivity_n(params),
        ])
    report = [f"model sweep over {args.axis}: {args.steps} points in [{args.min:g}, {args.max:g}]"]
    _emit(MODEL_SWEEP_HEADER, rows, _model_meta(base), args.out, report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sim subcommands
# ---------------------------------------------------------------------------

_SIM_OVERRIDES = [
    ("nodes", "network.nodes", int),
    ("area_m", "network.area_m", float),
    ("range_m", "network.range_m", float),
    ("bandwidth_bps", "network.bandwidth_bps", float),
    ("prop_delay_s", "network.prop_delay_s", float),
    ("flows", "traffic.flows", int),
    ("rate_pps", "traffic.rate_pps", float),
    ("payload_bytes", "traffic.payload_bytes", int),
    ("traffic_start_s", "traffic.start_s", float),
    ("mobility_model", "mobility.model", str),
    ("speed_min", "mobility.speed_min", float),
    ("speed_max", "mobility.speed_max", float),
    ("pause_s", "mobility.pause_s", float),
    ("step_s", "mobility.step_s", float),
    ("protocol", "protocol.name", str),
    ("periodic_s", "protocol.periodic_s", float),
    ("hello_s", "protocol.hello_s", float),
    ("settling_s", "protocol.settling_s", float),
    ("duration_s", "sim.duration_s", float),
]


def _add_sim_flags(p: argparse.ArgumentParser, protocol_choice: bool = True) -> None:
    p.add_argument("--config", help="scenario config file (key = value sections)")
    p.add_argument("--nodes", type=int)
    p.add_argument("--area-m", type=float)
    p.add_argument("--range-m", type=float)
    p.add_argument("--bandwidth-bps", type=float)
    p.add_argument("--prop-delay-s", type=float)
    p.add_argument("--flows", type=int)
    p.add_argument("--rate-pps", type=float)
    p.add_argument("--payload-bytes", type=int)
    p.add_argument("--traffic-start-s", type=float)
    p.add_argument("--mobility-model", choices=["waypoint", "static"])
    p.add_argument("--speed-min", type=float)
    p.add_argument("--speed-max", type=float)
    p.add_argument("--pause-s", type=float)
    p.add_argument("--step-s", type=float)
    if protocol_choice:
        p.add_argument("--protocol", choices=["dsdv", "olsr", "fsr"])
    p.add_argument("--periodic-s", type=float)
    p.add_argument("--hello-s", type=float)
    p.add_argument("--settling-s", type=float)
    p.add_argument("--duration-s", type=float)
    p.add_argument("--seed", type=int, required=True, help="run seed (no wall-clock seeding)")


def _scenario_from_args(args, protocol_choice: bool = True) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    overrides = {}
    for attr, dotted, _ in _SIM_OVERRIDES:
        if not protocol_choice and attr == "protocol":
            continue
        val = getattr(args, attr, None)
        if val is not None:
            overrides[dotted] = val
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    return cfg


def _sim_row(cfg: ScenarioConfig, seed: int, rec: MetricsRecord) -> list:
    return [
        cfg.protocol.name, seed, cfg.network.nodes, cfg.mobility.pause_s,
        cfg.mobility.speed_max if cfg.mobility_enabled() else 0.0,
        rec.throughput_bps, rec.mean_delay_s, rec.nrl,
        rec.data_sent, rec.data_delivered, rec.data_dropped,
        rec.ctrl_periodic, rec.ctrl_triggered,
    ]


def _run_summary(rec: MetricsRecord) -> list[str]:
    kinds = " ".join(f"{k}={v}" for k, v in sorted(rec.ctrl_by_kind.items()))
    drops = " ".join(f"{k}={v}" for k, v in sorted(rec.drops_by_cause.items()))
    return [
        f"throughput: {rec.throughput_bps:.9g} bits/s",
        f"mean delay: {rec.mean_delay_s:.9g} s (p50 {rec.delay_p50_s:.9g}, p90 {rec.delay_p90_s:.9g})",
        f"nrl: {rec.nrl:.9g} per-hop ({rec.nrl_origination:.9g} per-origination)",
        f"data: sent={rec.data_sent} delivered={rec.data_delivered} "
        f"dropped={rec.data_dropped} in_flight={rec.data_in_flight} pf={rec.pf_count}",
        f"control: tx={rec.ctrl_transmissions} periodic={rec.ctrl_periodic} "
        f"triggered={rec.ctrl_triggered} lost={rec.ctrl_lost} [{kinds}]",
        f"drops by cause: {drops or '-'}",
    ]


def cmd_sim_run(args) -> int:
    cfg = _scenario_from_args(args)
    trace_fh = None
    trace_cb = None
    if args.trace:
        trace_fh = open(args.trace, "w")
        trace_cb = lambda line: trace_fh.write(line + "\n")
    try:
        rec = run_scenario(cfg, args.seed, trace=trace_cb)
    finally:
        if trace_fh:
            trace_fh.close()
    rows = [_sim_row(cfg, args.seed, rec)]
    _emit(SIM_CSV_HEADER, rows, cfg.metadata_items(), args.out, _run_summary(rec))
    return EXIT_OK


def _sweep_cell(cell) -> tuple:
    cfg, seed = cell
    rec = run_scenario(cfg, seed)
    return _sim_row(cfg, seed, rec)


def cmd_sim_sweep(args) -> int:
    cfg = _scenario_from_args(args, protocol_choice=False)
    protocols = [p.strip() for p in args.protocols.split(",") if p.strip()]
    values = [float(v) for v in args.values.split(",") if v.strip()]
    if not protocols or not values or args.seeds < 1:
        raise ConfigError("sweep needs at least one protocol, one value and one seed")
    cells = []
    for proto in protocols:
        for value in values:
            overrides = {"protocol.name": proto}
            if args.axis == "pause_s":
                overrides["mobility.pause_s"] = value
            else:
                overrides["network.nodes"] = int(round(value))
            cell_cfg = apply_overrides(cfg, overrides)
            for s in range(args.seeds):
                cells.append((cell_cfg, args.seed + s))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(c) for c in cells]

    report = _sweep_report(rows, args.axis, protocols, values)
    _emit(SIM_CSV_HEADER, rows, cfg.metadata_items(), args.out, report)
    return EXIT_OK


def _median_of(rows: list[list], col: int) -> float:
    vals = [r[col] for r in rows if not (isinstance(r[col], float) and math.isnan(r[col]))]
    return statistics.median(vals) if vals else math.nan


def _sweep_report(rows, axis: str, protocols: list[str], values: list[float]) -> list[str]:
    # columns: 0 protocol, 3 pause_s, 2 nodes, 5 thr, 6 delay, 7 nrl
    axis_col = 3 if axis == "pause_s" else 2
    lines = [f"sweep report: medians per (protocol, {axis})"]
    cells = {}
    for proto in protocols:
        for value in values:
            key_val = value if axis == "pause_s" else int(round(value))
            sel = [r for r in rows if r[0] == proto and r[axis_col] == key_val]
            cells[(proto, value)] = (
                _median_of(sel, 5), _median_of(sel, 6), _median_of(sel, 7)
            )
    header = f"{'protocol':>8} {axis:>10} {'thr_bps':>14} {'delay_s':>12} {'nrl':>10}"
    lines.append(header)
    for proto in protocols:
        for value in values:
            thr, dly, nrl = cells[(proto, value)]
            lines.append(
                f"{proto:>8} {value:>10g} {thr:>14.6g} {dly:>12.6g} {nrl:>10.6g}"
            )
    for metric, col_idx, best in (
        ("throughput", 0, max), ("delay", 1, min), ("nrl", 2, min)
    ):
        lines.append(f"ordering by {metric} (best first) per {axis} value:")
        for value in values:
            ranked = sorted(
                protocols,
                key=lambda p: cells[(p, value)][col_idx],
                reverse=(best is max),
            )
            lines.append(f"  {axis}={value:g}: " + " > ".join(ranked))
    return lines


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def cmd_compare(args) -> int:
    cfg = _scenario_from_args(args, protocol_choice=False)
    protocols = [p.strip() for p in args.protocols.split(",") if p.strip()]
    duration = cfg.sim.duration_s
    rows = []
    static = not cfg.mobility_enabled()
    for proto in protocols:
        run_cfg = apply_overrides(cfg, {"protocol.name": proto})
        if run_cfg.resolved_periodic() >= duration:
            raise ConfigError(
                f"protocol.periodic_s ({run_cfg.resolved_periodic():g}) must be "
                f"below sim.duration_s ({duration:g}) for {proto}"
            )
        rec = run_scenario(run_cfg, args.seed)
        params = m.ModelParams(
            n=cfg.network.nodes,
            bandwidth_B=cfg.network.bandwidth_bps,
            k=args.k,
            t_pr=run_cfg.resolved_periodic(),
            mu_k=args.mu_k,
            lambda_rate=cfg.traffic.rate_pps,
            t_trig=args.t_trig,
            l_avg=args.l_avg,
            pn_avg=cfg.traffic.flows,
            hello_H=cfg.protocol.hello_s,
        )
        bd = m.olsr_overhead(params) if proto == "olsr" else m.aggregate_overhead(params)
        pairs = [
            ("periodic", rec.ctrl_periodic, bd.ro_pr * duration,
             "count vs bandwidth-normalized bits x s; k uncalibrated"),
            ("triggered", rec.ctrl_triggered, bd.ro_tr,
             "static regime" if static else "count vs per-epoch ratio sum"),
            ("pf", rec.pf_count, bd.ro_pf,
             "drops vs expected failures per interval"),
        ]
        for quantity, measured, modeled, note in pairs:
            ratio = measured / modeled if modeled > 0 else math.nan
            rows.append([proto, quantity, float(measured), modeled, ratio, note])
    report = ["model vs measurement (raw pairs; ratios are not calibrated)"]
    _emit(COMPARE_HEADER, rows, cfg.metadata_items(), args.out, report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="routeload",
        description="Analytical routing-overhead model and deterministic "
        "simulator of proactive MANET routing (DSDV, OLSR, FSR).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_model = sub.add_parser("model", help="closed-form overhead model")
    model_sub = p_model.add_subparsers(dest="model_command", required=True)

    p_eval = model_sub.add_parser("eval", help="evaluate the model at one point")
    _add_model_flags(p_eval)
    p_eval.add_argument("--olsr", action="store_true", help="HELLO/TC decomposition form")
    p_eval.add_argument("--verify", action="store_true", help="run finite-difference self-checks")
    p_eval.add_argument("--out", help="CSV output path (default: stdout)")
    p_eval.set_defaults(func=cmd_model_eval)

    p_sweep = model_sub.add_parser("sweep", help="sweep one model axis")
    _add_model_flags(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=sorted(_SWEEP_AXES))
    p_sweep.add_argument("--min", type=float, required=True)
    p_sweep.add_argument("--max", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--out", help="CSV output path (default: stdout)")
    p_sweep.set_defaults(func=cmd_model_sweep)

    p_sim = sub.add_parser("sim", help="discrete-event simulation")
    sim_sub = p_sim.add_subparsers(dest="sim_command", required=True)

    p_run = sim_sub.add_parser("run", help="run one scenario")
    _add_sim_flags(p_run)
    p_run.add_argument("--trace", help="write per-event trace log to this path")
    p_run.add_argument("--out", help="CSV output path (default: stdout)")
    p_run.set_defaults(func=cmd_sim_run)

    p_ssweep = sim_sub.add_parser("sweep", help="protocol x axis x seed sweep")
    _add_sim_flags(p_ssweep, protocol_choice=False)
    p_ssweep.add_argument("--axis", required=True, choices=["pause_s", "nodes"])
    p_ssweep.add_argument("--values", required=True, help="comma-separated axis values")
    p_ssweep.add_argument("--seeds", type=int, default=1, help="seeds per cell (base --seed + i)")
    p_ssweep.add_argument("--protocols", default="dsdv,olsr,fsr")
    p_ssweep.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p_ssweep.add_argument("--out", help="CSV output path (default: stdout)")
    p_ssweep.set_defaults(func=cmd_sim_sweep)

    p_cmp = sub.add_parser("compare", help="model predictions vs simulation")
    _add_sim_flags(p_cmp, protocol_choice=False)
    p_cmp.add_argument("--protocols", default="dsdv,olsr,fsr")
    p_cmp.add_argument("--k", type=float, default=1.0)
    p_cmp.add_argument("--mu-k", type=float, default=100.0)
    p_cmp.add_argument("--t-trig", type=float, default=10.0)
    p_cmp.add_argument("--l-avg", type=int, default=3)
    p_cmp.add_argument("--out", help="CSV output path (default: stdout)")
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RouteloadError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
