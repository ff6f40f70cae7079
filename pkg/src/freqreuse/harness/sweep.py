"""Parameter sweeps of the optimized ubiquitous rate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..analytic import (
    NetworkParams,
    Scheme,
    SchemeKind,
    ThresholdMode,
    scheme_parameters,
    spectral_efficiency,
    threshold_for_reliability,
    ubiquitous_rate,
)
from ..optimizer import optimal_m_full_search, optimal_m_surrogate
from .tables import Table

__all__ = ["SweepSpec", "OUTPUT_FIELDS", "SWEEP_VARIABLES", "run_sweep", "first_crossing"]

SWEEP_VARIABLES = ("lambda_b", "eta", "alpha")

OUTPUT_FIELDS = {
    "m_star": "channel count maximizing the ubiquitous rate (exhaustive search)",
    "m_star_surrogate": "channel count minimizing the first-order residual",
    "rate": "ubiquitous rate at m_star [bit/s]",
    "rate_surrogate": "ubiquitous rate at m_star_surrogate [bit/s]",
    "gain": "rate over the single-channel baseline rate",
    "interferer_ratio": "interferer density over BS density at m_star",
    "max_alloc": "bandwidth per channel W/m_star [Hz]",
    "alloc_fraction": "mean share of the channel, E[1/N], at m_star",
    "spectral_efficiency": "log2(1 + t) at the first-order threshold for m_star [bit/s/Hz]",
}

_VARIABLE_NOTES = {
    "lambda_b": "BS density (UE density held fixed)",
    "eta": "target reliability",
    "alpha": "path-loss exponent",
}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    grid: tuple
    fixed: NetworkParams
    schemes: tuple = (SchemeKind.BASELINE, SchemeKind.FRB, SchemeKind.FRU)
    outputs: tuple = tuple(OUTPUT_FIELDS)
    m_max: Optional[int] = None

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        grid = tuple(float(v) for v in self.grid)
        if not grid:
            raise ValueError("sweep grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        schemes = tuple(SchemeKind.parse(s) for s in self.schemes)
        if not schemes or len(set(schemes)) != len(schemes):
            raise ValueError("schemes must be a nonempty list without repeats")
        object.__setattr__(self, "schemes", schemes)
        outputs = tuple(self.outputs)
        unknown = [o for o in outputs if o not in OUTPUT_FIELDS]
        if unknown or not outputs or len(set(outputs)) != len(outputs):
            raise ValueError(f"outputs must be distinct names from {tuple(OUTPUT_FIELDS)}, got {outputs}")
        object.__setattr__(self, "outputs", outputs)
        if self.m_max is not None and int(self.m_max) < 1:
            raise ValueError("m_max must be >= 1")
        for v in grid:
            self.params_at(v)  # raises on an invalid grid value

    @classmethod
    def default(cls, fixed: NetworkParams, m_max: Optional[int] = None) -> "SweepSpec":
        """BS density from 1e-2 to 1e2 times the UE density, 17 points."""
        grid = tuple(float(v) for v in fixed.lambda_u * np.logspace(-2, 2, 17))
        return cls("lambda_b", grid, fixed, m_max=m_max)

    def params_at(self, value: float) -> NetworkParams:
        return self.fixed.with_(**{self.variable: float(value)})

    @property
    def columns(self) -> tuple:
        return (self.variable,) + tuple(f"{s.value}_{o}" for s in self.schemes for o in self.outputs)


def _scheme_cells(params: NetworkParams, kind: SchemeKind, base_rate: float, m_max) -> dict:
    if kind is SchemeKind.BASELINE:
        m_star = m_sur = 1
        rate = rate_sur = base_rate
    else:
        full = optimal_m_full_search(params, kind, m_max)
        sur = optimal_m_surrogate(params, kind, m_max)
        m_star, rate = full.m_star, full.rate_at_m_star
        m_sur, rate_sur = sur.m_star, sur.rate_at_m_star
    scheme = Scheme(kind, m_star)
    d = scheme_parameters(params, scheme)
    t = threshold_for_reliability(params, scheme, ThresholdMode.TAYLOR)
    return {
        "m_star": int(m_star),
        "m_star_surrogate": int(m_sur),
        "rate": float(rate),
        "rate_surrogate": float(rate_sur),
        "gain": float(rate / base_rate),
        "interferer_ratio": float(d.interferer_ratio(params.lambda_b)),
        "max_alloc": float(d.max_alloc),
        "alloc_fraction": float(d.alloc_fraction),
        "spectral_efficiency": float(spectral_efficiency(t)),
    }


def run_sweep(spec: SweepSpec) -> Table:
    """One row per grid value, columns ``<scheme>_<output>`` in spec order."""
    rows = []
    for v in spec.grid:
        params = spec.params_at(v)
        base_rate = ubiquitous_rate(params, Scheme.baseline())
        row = [float(v)]
        for kind in spec.schemes:
            cells = _scheme_cells(params, kind, base_rate, spec.m_max)
            row.extend(cells[o] for o in spec.outputs)
        rows.append(tuple(row))
    notes = {spec.variable: _VARIABLE_NOTES[spec.variable]}
    for kind in spec.schemes:
        for o in spec.outputs:
            notes[f"{kind.value}_{o}"] = f"{kind.value}: {OUTPUT_FIELDS[o]}"
    return Table(spec.columns, tuple(rows), notes)


def first_crossing(table: Table, column: str, target: float):
    """First sweep value whose ``column`` reaches ``target``, or None."""
    xs = table.column(table.columns[0])
    for x, y in zip(xs, table.column(column)):
        if y is not None and not math.isnan(y) and y >= target:
            return x
    return None
