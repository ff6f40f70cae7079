"""Command line entry point: ``freqreuse {sweep,validate,figure,optimize}``.

Exit status is 0 on success, 1 when a validation row fails and 2 for usage
or configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..analytic import Scheme, SchemeKind, ubiquitous_rate
from ..optimizer import asymptotic_m_regime, optimal_m_full_search, optimal_m_surrogate, regime_indicator
from .config import ConfigError, HarnessConfig, load_config, parse_float_list, parse_grid
from .figures import FIGURE_KINDS, figure_table
from .sweep import SweepSpec, first_crossing, run_sweep
from .tables import Table
from .validation import run_validation

__all__ = ["main", "build_parser", "apply_overrides"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-c", "--config", help="INI file with [network] [scheme] [sim] [sweep] sections")
    p.add_argument("--eta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--lambda-b", type=float, dest="lambda_b")
    p.add_argument("--lambda-u", type=float, dest="lambda_u")
    p.add_argument("--bandwidth", type=float, help="total bandwidth W in Hz")
    p.add_argument("--m-max", type=int, dest="m_max")
    p.add_argument("-o", "--out", help="output CSV path (default: stdout)")
    p.add_argument("-v", "--verbose", action="store_true")


def _sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", help="baseline, frb or fru")
    p.add_argument("-m", "--channels", type=int, help="channel count M")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--window-radius", type=float, dest="window_radius")
    p.add_argument("--thresholds", help="comma-separated SIR thresholds")
    p.add_argument("--tolerance", type=float, help="absolute coverage tolerance")


def _sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variable", choices=("lambda_b", "eta", "alpha"))
    p.add_argument("--grid", help='"a, b, c" or "logspace(lo, hi, n)"')
    p.add_argument("--schemes", help="comma-separated scheme list")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="freqreuse", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="optimized rates over a parameter grid")
    _common(p)
    _sweep_flags(p)
    p.add_argument("--outputs", help="comma-separated output columns")
    p.add_argument("--target-rate", type=float, dest="target_rate",
                   help="report the first grid value where each scheme reaches this rate [bit/s]")

    p = sub.add_parser("validate", help="Monte Carlo coverage against the closed forms")
    _common(p)
    _sim_flags(p)

    p = sub.add_parser("figure", help="write plot data as CSV")
    p.add_argument("kind", choices=FIGURE_KINDS)
    _common(p)
    _sweep_flags(p)

    p = sub.add_parser("optimize", help="best channel count at one operating point")
    _common(p)
    p.add_argument("--scheme", help="frb, fru or both (default)")
    return ap


def apply_overrides(cfg: HarnessConfig, ns: argparse.Namespace) -> HarnessConfig:
    net = {}
    for flag, name in (("eta", "eta"), ("alpha", "alpha"), ("lambda_b", "lambda_b"),
                       ("lambda_u", "lambda_u"), ("bandwidth", "bandwidth_w")):
        v = getattr(ns, flag, None)
        if v is not None:
            net[name] = v
    if net:
        cfg = cfg.with_network(**net)
    if getattr(ns, "m_max", None) is not None:
        if ns.m_max < 1:
            raise ValueError("--m-max must be >= 1")
        cfg = replace(cfg, m_max=ns.m_max, sweep=replace(cfg.sweep, m_max=ns.m_max))

    sim = {}
    for name in ("seed", "trials", "window_radius"):
        v = getattr(ns, name, None)
        if v is not None:
            sim[name] = v
    if sim:
        cfg = replace(cfg, sim=replace(cfg.sim, **sim))
    if getattr(ns, "thresholds", None):
        cfg = replace(cfg, thresholds=parse_float_list(ns.thresholds))
    if getattr(ns, "tolerance", None) is not None:
        cfg = replace(cfg, tolerance=ns.tolerance)
    kind = getattr(ns, "scheme", None)
    m = getattr(ns, "channels", None)
    if ns.command == "validate" and (kind is not None or m is not None):
        k = SchemeKind.parse(kind) if kind is not None else cfg.scheme.kind
        cfg = replace(cfg, scheme=Scheme(k, m if m is not None else (1 if k is SchemeKind.BASELINE else cfg.scheme.m)))

    sw = {}
    if getattr(ns, "variable", None):
        sw["variable"] = ns.variable
        if not getattr(ns, "grid", None) and ns.variable != cfg.sweep.variable:
            raise ValueError("--variable needs a matching --grid")
    if getattr(ns, "grid", None):
        sw["grid"] = parse_grid(ns.grid)
    if getattr(ns, "schemes", None):
        sw["schemes"] = tuple(SchemeKind.parse(s) for s in ns.schemes.split(",") if s.strip())
    if getattr(ns, "outputs", None):
        sw["outputs"] = tuple(s.strip() for s in ns.outputs.split(",") if s.strip())
    if sw:
        s = cfg.sweep
        cfg = replace(cfg, sweep=SweepSpec(
            sw.get("variable", s.variable), sw.get("grid", s.grid), s.fixed,
            sw.get("schemes", s.schemes), sw.get("outputs", s.outputs), m_max=s.m_max,
        ))
    return cfg


def _emit(table: Table, out) -> None:
    if out:
        path = Path(out)
        if path.is_dir():
            raise ValueError(f"--out {out} is a directory")
        table.write(path)
    else:
        sys.stdout.write(table.to_csv())


def _cmd_sweep(cfg: HarnessConfig, ns) -> int:
    table = run_sweep(cfg.sweep)
    _emit(table, ns.out)
    if ns.target_rate is not None:
        for kind in cfg.sweep.schemes:
            col = f"{kind.value}_rate"
            if col not in table.columns:
                print(f"{kind.value}: rate column not requested", file=sys.stderr)
                continue
            hit = first_crossing(table, col, ns.target_rate)
            where = "never on this grid" if hit is None else f"{cfg.sweep.variable} = {hit!r}"
            print(f"{kind.value}: reaches {ns.target_rate:.6g} bit/s at {where}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(cfg: HarnessConfig, ns) -> int:
    report = run_validation(cfg.network, cfg.scheme, cfg.sim, cfg.thresholds, cfg.tolerance)
    _emit(report.table, ns.out)
    for r in report.table.records():
        status = "pass" if r["pass"] else "FAIL"
        if r["check"] == "window":
            print(f"window   truncation {r['empirical']:.3e} (limit {r['tolerance']:.1e})  {status}",
                  file=sys.stderr)
        else:
            print(f"t={r['t']:<10.4g} mc {r['empirical']:.5f} +- {r['ci_half_width']:.5f}  "
                  f"exact {r['analytic_exact']:.5f}  {status}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _cmd_figure(cfg: HarnessConfig, ns) -> int:
    _emit(figure_table(ns.kind, cfg.sweep), ns.out)
    return EXIT_OK


def _cmd_optimize(cfg: HarnessConfig, ns) -> int:
    params = cfg.network
    if ns.scheme in (None, "both"):
        kinds = (SchemeKind.FRB, SchemeKind.FRU)
    else:
        kinds = (SchemeKind.parse(ns.scheme),)
        if kinds[0] is SchemeKind.BASELINE:
            raise ValueError("optimize applies to frb and fru")
    base = ubiquitous_rate(params, Scheme.baseline())
    regime = asymptotic_m_regime(params).value
    indicator = regime_indicator(params)
    rows = []
    for kind in kinds:
        for res in (optimal_m_full_search(params, kind, cfg.m_max),
                    optimal_m_surrogate(params, kind, cfg.m_max)):
            rows.append((kind.value, res.method.value, res.m_star, res.rate_at_m_star,
                         res.rate_at_m_star / base, int(res.hit_boundary), regime, indicator))
    notes = {
        "scheme": "frequency reuse scheme",
        "method": "full_search or surrogate",
        "m_star": "selected channel count",
        "rate": "ubiquitous rate at m_star [bit/s]",
        "gain": "rate over the single-channel baseline",
        "hit_boundary": "1 when m_star equals the search cap",
        "regime": "density regime label",
        "regime_indicator": "(1 - eta) (lambda_b/lambda_u)^(alpha/2)",
    }
    cols = ("scheme", "method", "m_star", "rate", "gain", "hit_boundary", "regime", "regime_indicator")
    _emit(Table(cols, tuple(rows), notes), ns.out)
    return EXIT_OK


_COMMANDS = {
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
    "figure": _cmd_figure,
    "optimize": _cmd_optimize,
}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = apply_overrides(load_config(ns.config), ns)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[ns.command](cfg, ns)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
