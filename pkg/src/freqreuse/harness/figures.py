"""CSV data behind the reliability-bound, rate, channel-count and decomposition plots."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np

from ..analytic import SchemeKind
from ..special_fn import CoverageArgs, coverage_exact, gauss_sum_coverage_constant
from .sweep import SweepSpec, run_sweep
from .tables import Table

__all__ = ["FIGURE_KINDS", "bounds_table", "figure_table", "emit_figure_data"]

FIGURE_KINDS = ("fig2_bounds", "fig3_rates", "fig4_mstar", "decomposition")

BOUNDS_GRID = tuple(float(t) for t in np.logspace(-3, 3, 121))

_OUTPUTS = {
    "fig3_rates": ("rate", "rate_surrogate", "gain"),
    "fig4_mstar": ("m_star", "m_star_surrogate"),
    "decomposition": ("interferer_ratio", "max_alloc", "alloc_fraction", "spectral_efficiency"),
}


def bounds_table(alpha: float, ts=BOUNDS_GRID) -> Table:
    """Exact coverage and its algebraic bounds when interferers are as dense as BSs."""
    const = gauss_sum_coverage_constant(alpha)
    rows = []
    for t in ts:
        upper = (1.0 + t) ** (-2.0 / alpha)
        rows.append((
            float(t),
            coverage_exact(CoverageArgs(float(t), alpha)),
            upper / const,
            upper,
            (1.0 + t) ** (-2.0 / (alpha - 2.0)),
        ))
    notes = {
        "t": f"SIR threshold (alpha = {alpha!r})",
        "exact": "coverage 1/2F1(1, -2/alpha; 1 - 2/alpha; -t)",
        "lemma2_lower": "(1 + t)^(-2/alpha) divided by (2 pi/alpha) csc(2 pi/alpha)",
        "lemma2_upper": "(1 + t)^(-2/alpha)",
        "lemma3": "ultra-reliable approximation (1 + t)^(-2/(alpha - 2))",
    }
    return Table(("t", "exact", "lemma2_lower", "lemma2_upper", "lemma3"), tuple(rows), notes)


def figure_table(kind: str, spec: SweepSpec) -> Table:
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; expected one of {FIGURE_KINDS}")
    if kind == "fig2_bounds":
        return bounds_table(spec.fixed.alpha)
    schemes = spec.schemes
    if kind == "fig4_mstar":
        schemes = tuple(s for s in schemes if s is not SchemeKind.BASELINE) or schemes
    return run_sweep(replace(spec, schemes=schemes, outputs=_OUTPUTS[kind]))


def emit_figure_data(kind: str, spec: SweepSpec, out: "str | Path") -> Path:
    """Write the CSV for ``kind``; a directory target receives ``<kind>.csv``."""
    out = Path(out)
    if out.is_dir():
        out = out / f"{kind}.csv"
    return figure_table(kind, spec).write(out)
