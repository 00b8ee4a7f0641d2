"""Scenario configuration: defaults, file parsing, flag overrides.

Config files are line-oriented `key = value` entries under bracketed
sections (network, traffic, mobility, protocol, sim), parsed with
configparser.  Flags override file values override defaults.  The
defaults reproduce the reference setup: 50 nodes, 2 Mbps links, 512-byte
CBR packets, a 1000 m square area.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError

PROTOCOLS = ("dsdv", "olsr", "fsr")
MOBILITY_MODELS = ("waypoint", "static")

# conventional periodic intervals per protocol (seconds)
DEFAULT_PERIODIC = {"dsdv": 15.0, "fsr": 5.0, "olsr": 2.0}


@dataclass(frozen=True)
class NetworkCfg:
    nodes: int = 50
    area_m: float = 1000.0
    range_m: float = 250.0
    bandwidth_bps: float = 2e6
    prop_delay_s: float = 0.0


@dataclass(frozen=True)
class TrafficCfg:
    flows: int = 10
    rate_pps: float = 4.0
    payload_bytes: int = 512
    start_s: float = 10.0


@dataclass(frozen=True)
class MobilityCfg:
    model: str = "waypoint"
    speed_min: float = 1.0
    speed_max: float = 20.0
    pause_s: float = 30.0
    step_s: float = 0.5


@dataclass(frozen=True)
class ProtocolCfg:
    name: str = "dsdv"
    periodic_s: float = 0.0  # 0 = per-protocol default
    hello_s: float = 1.0
    settling_s: float = 0.0  # 0 = 1.5 * periodic
    fsr_scope_hops: int = 2
    fsr_slow_factor: int = 3


@dataclass(frozen=True)
class SimCfg:
    duration_s: float = 100.0
    seed: int = 0


@dataclass(frozen=True)
class ScenarioConfig:
    network: NetworkCfg = field(default_factory=NetworkCfg)
    traffic: TrafficCfg = field(default_factory=TrafficCfg)
    mobility: MobilityCfg = field(default_factory=MobilityCfg)
    protocol: ProtocolCfg = field(default_factory=ProtocolCfg)
    sim: SimCfg = field(default_factory=SimCfg)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        net, tr, mob, pro, sim = (
            self.network, self.traffic, self.mobility, self.protocol, self.sim
        )
        checks = [
            ("network.nodes", net.nodes >= 1),
            ("network.area_m", net.area_m > 0),
            ("network.range_m", net.range_m > 0),
            ("network.bandwidth_bps", net.bandwidth_bps > 0),
            ("network.prop_delay_s", net.prop_delay_s >= 0),
            ("traffic.flows", tr.flows >= 0),
            ("traffic.rate_pps", tr.rate_pps > 0),
            ("traffic.payload_bytes", tr.payload_bytes > 0),
            ("traffic.start_s", tr.start_s >= 0),
            ("mobility.model", mob.model in MOBILITY_MODELS),
            ("mobility.speed_min", mob.speed_min >= 0),
            ("mobility.speed_max", mob.speed_max >= mob.speed_min),
            ("mobility.pause_s", mob.pause_s >= 0),
            ("mobility.step_s", mob.step_s > 0),
            ("protocol.name", pro.name in PROTOCOLS),
            ("protocol.periodic_s", pro.periodic_s >= 0),
            ("protocol.hello_s", pro.hello_s > 0),
            ("protocol.settling_s", pro.settling_s >= 0),
            ("protocol.fsr_scope_hops", pro.fsr_scope_hops >= 1),
            ("protocol.fsr_slow_factor", pro.fsr_slow_factor >= 2),
            ("sim.duration_s", sim.duration_s >= 0),
        ]
        for key, ok in checks:
            if not ok:
                raise ConfigError(f"invalid value for {key}")

    def resolved_periodic(self) -> float:
        if self.protocol.periodic_s > 0:
            return self.protocol.periodic_s
        return DEFAULT_PERIODIC[self.protocol.name]

    def resolved_settling(self) -> float:
        if self.protocol.settling_s > 0:
            return self.protocol.settling_s
        return 1.5 * self.resolved_periodic()

    def mobility_enabled(self) -> bool:
        return self.mobility.model == "waypoint" and self.mobility.speed_max > 0

    def metadata_items(self) -> list[tuple[str, str]]:
        """Flattened section.key=value pairs; makes any CSV self-describing."""
        out = []
        for section_name in ("network", "traffic", "mobility", "protocol", "sim"):
            section = getattr(self, section_name)
            for f in fields(section):
                out.append((f"{section_name}.{f.name}", str(getattr(section, f.name))))
        return out


_SECTION_TYPES = {
    "network": NetworkCfg,
    "traffic": TrafficCfg,
    "mobility": MobilityCfg,
    "protocol": ProtocolCfg,
    "sim": SimCfg,
}


def _coerce(section: str, key: str, raw: str, target_type: type):
    try:
        if target_type is int:
            return int(raw)
        if target_type is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"invalid value for {section}.{key}: {raw!r}") from exc


def load_config(path: str) -> ScenarioConfig:
    """Parse a scenario file; unknown sections/keys are config errors."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    kwargs = {}
    for section in parser.sections():
        if section not in _SECTION_TYPES:
            raise ConfigError(f"unknown config section [{section}]")
        cls = _SECTION_TYPES[section]
        known = {f.name: f.type for f in fields(cls)}
        values = {}
        for key, raw in parser.items(section):
            if key not in known:
                raise ConfigError(f"unknown config key {section}.{key}")
            ftype = {f.name: f for f in fields(cls)}[key].type
            pytype = {"int": int, "float": float, "str": str}.get(ftype, str)
            values[key] = _coerce(section, key, raw, pytype)
        kwargs[section] = cls(**values)
    return ScenarioConfig(**kwargs)


def apply_overrides(cfg: ScenarioConfig, overrides: dict) -> ScenarioConfig:
    """Replace dotted-key values, e.g. {'protocol.name': 'olsr'}."""
    by_section: dict[str, dict] = {}
    for dotted, value in overrides.items():
        section, _, key = dotted.partition(".")
        if section not in _SECTION_TYPES or not key:
            raise ConfigError(f"unknown config key {dotted}")
        if key not in {f.name for f in fields(_SECTION_TYPES[section])}:
            raise ConfigError(f"unknown config key {dotted}")
        by_section.setdefault(section, {})[key] = value
    new_sections = {}
    for section, vals in by_section.items():
        new_sections[section] = replace(getattr(cfg, section), **vals)
    return replace(cfg, **new_sections)
