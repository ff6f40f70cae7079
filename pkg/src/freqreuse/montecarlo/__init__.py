"""Stochastic-geometry simulator for the downlink typical UE."""

from .estimate import (
    GUARD_FRACTION,
    CoverageRun,
    Estimate,
    estimate_alloc_fraction,
    estimate_coverage,
    estimate_occupancy,
    explicit_coverage,
    simulate_coverage,
)
from .sampling import (
    Realization,
    SimConfig,
    sample_bs,
    sample_realization,
    sir_sample,
    trial_rng,
    window_polygon,
)

__all__ = [
    "GUARD_FRACTION",
    "CoverageRun",
    "Estimate",
    "Realization",
    "SimConfig",
    "estimate_alloc_fraction",
    "estimate_coverage",
    "estimate_occupancy",
    "explicit_coverage",
    "sample_bs",
    "sample_realization",
    "simulate_coverage",
    "sir_sample",
    "trial_rng",
    "window_polygon",
]
