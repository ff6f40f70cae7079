"""INI-style run configuration with per-key line diagnostics.

Every key is optional.  A minimal file looks like::

    [network]
    lambda_b = 1.0
    lambda_u = 50.0

    [scheme]
    kind = frb
    m = 4

    [sim]
    trials = 20000
    thresholds = 0.1, 1, 10

    [sweep]
    variable = lambda_b
    grid = logspace(-2, 2, 17)
    schemes = baseline, frb, fru
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from ..analytic import NetworkParams, Scheme, SchemeKind
from ..montecarlo import SimConfig
from .sweep import SweepSpec

__all__ = [
    "ConfigError",
    "HarnessConfig",
    "load_config",
    "parse_config",
    "parse_grid",
    "DEFAULT_THRESHOLDS",
    "DEFAULT_TOLERANCE",
]

DEFAULT_THRESHOLDS = (0.1, 1.0, 10.0)
DEFAULT_TOLERANCE = 0.005

_KEYS = {
    "network": {"lambda_b", "lambda_u", "alpha", "bandwidth", "eta"},
    "scheme": {"kind", "m", "m_max"},
    "sim": {"trials", "seed", "window_radius", "thresholds", "tolerance", "target_rel_truncation"},
    "sweep": {"variable", "grid", "schemes", "outputs"},
}

_RANGE = re.compile(r"^\s*(logspace|linspace)\s*\(\s*([^,]+),\s*([^,]+),\s*([^,\)]+)\)\s*$")


class ConfigError(ValueError):
    """Bad configuration value; carries the source location when known."""

    def __init__(self, message: str, source: str = "<config>", line: Optional[int] = None):
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class HarnessConfig:
    network: NetworkParams = field(default_factory=lambda: NetworkParams(1.0, 1.0))
    scheme: Scheme = field(default_factory=Scheme.baseline)
    m_max: Optional[int] = None
    sim: SimConfig = field(default_factory=SimConfig)
    thresholds: tuple = DEFAULT_THRESHOLDS
    tolerance: float = DEFAULT_TOLERANCE
    sweep: SweepSpec = field(default_factory=lambda: SweepSpec.default(NetworkParams(1.0, 1.0)))

    def with_network(self, **changes) -> "HarnessConfig":
        net = self.network.with_(**changes)
        return replace(self, network=net, sweep=replace(self.sweep, fixed=net))


def parse_grid(text: str) -> tuple:
    """``"0.1, 1, 10"``, ``"logspace(-2, 2, 17)"`` (decades) or ``"linspace(a, b, n)"``."""
    m = _RANGE.match(text)
    if m:
        fn, a, b, n = m.groups()
        count = int(n)
        if count < 1:
            raise ValueError("grid needs at least one point")
        vals = getattr(np, fn)(float(a), float(b), count)
        return tuple(float(v) for v in vals)
    return parse_float_list(text)


def parse_float_list(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _key_lines(text: str) -> dict:
    lines = {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s[0] in "#;":
            continue
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip().lower()
            lines.setdefault((section, None), no)
            continue
        key = re.split(r"[=:]", s, maxsplit=1)[0].strip().lower()
        lines.setdefault((section, key), no)
    return lines


def parse_config(text: str, source: str = "<config>") -> HarnessConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("key outside of any [section]", source, e.lineno) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as e:
        raise ConfigError(e.message.split(":")[-1].strip() or str(e), source, e.lineno) from None
    except configparser.ParsingError as e:
        no, line = e.errors[0]
        raise ConfigError(f"cannot parse {line.strip()!r}", source, no) from None

    lines = _key_lines(text)

    def fail(msg, section, key=None):
        raise ConfigError(msg, source, lines.get((section, key)))

    for section in cp.sections():
        if section not in _KEYS:
            fail(f"unknown section [{section}]", section)
        for key in cp[section]:
            if key not in _KEYS[section]:
                fail(f"unknown key {key!r} in [{section}]", section, key)

    def get(section, key, conv, default):
        if not cp.has_option(section, key):
            return default
        raw = cp.get(section, key).strip()
        if raw == "":
            return default
        try:
            return conv(raw)
        except (TypeError, ValueError) as e:
            fail(f"bad value for {key}: {raw!r} ({e})", section, key)

    def positive_int(raw):
        v = int(raw)
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    net_kw = {}
    for key, name in (("lambda_b", "lambda_b"), ("lambda_u", "lambda_u"), ("alpha", "alpha"),
                      ("bandwidth", "bandwidth_w"), ("eta", "eta")):
        v = get("network", key, float, None)
        if v is not None:
            net_kw[name] = v
    try:
        network = NetworkParams(**{"lambda_b": 1.0, "lambda_u": 1.0, **net_kw})
    except ValueError as e:
        name = str(e).split()[0]
        fail(str(e), "network", "bandwidth" if name == "bandwidth_w" else name)

    kind = get("scheme", "kind", SchemeKind.parse, SchemeKind.BASELINE)
    m = get("scheme", "m", positive_int, 1)
    try:
        scheme = Scheme(kind, m)
    except ValueError as e:
        fail(str(e), "scheme", "m")
    m_max = get("scheme", "m_max", positive_int, None)

    sim_kw = {
        "trials": get("sim", "trials", positive_int, SimConfig.trials),
        "seed": get("sim", "seed", int, SimConfig.seed),
        "window_radius": get("sim", "window_radius", float, None),
        "target_rel_truncation": get("sim", "target_rel_truncation", float,
                                     SimConfig.target_rel_truncation),
    }
    try:
        sim = SimConfig(**sim_kw)
    except ValueError as e:
        fail(str(e), "sim", str(e).split()[0])
    thresholds = get("sim", "thresholds", parse_float_list, DEFAULT_THRESHOLDS)
    tolerance = get("sim", "tolerance", float, DEFAULT_TOLERANCE)
    if not (tolerance >= 0 and math.isfinite(tolerance)):
        fail("tolerance must be nonnegative", "sim", "tolerance")

    base = SweepSpec.default(network, m_max=m_max)
    variable = get("sweep", "variable", str.strip, base.variable)
    grid = get("sweep", "grid", parse_grid, base.grid)
    schemes = get("sweep", "schemes",
                  lambda s: tuple(SchemeKind.parse(p) for p in s.split(",") if p.strip()),
                  base.schemes)
    outputs = get("sweep", "outputs",
                  lambda s: tuple(p.strip() for p in s.split(",") if p.strip()),
                  base.outputs)
    try:
        sweep = SweepSpec(variable, grid, network, schemes, outputs, m_max=m_max)
    except ValueError as e:
        key = next((k for k in ("variable", "grid", "schemes", "outputs") if k in str(e)), "grid")
        fail(str(e), "sweep", key)

    return HarnessConfig(network, scheme, m_max, sim, tuple(thresholds), tolerance, sweep)


def load_config(path: "str | Path | None") -> HarnessConfig:
    if path is None:
        return HarnessConfig()
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config ({e.strerror})", str(p)) from None
    return parse_config(text, source=str(p))

