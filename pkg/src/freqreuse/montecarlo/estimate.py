"""Monte Carlo estimators of coverage, allocation fraction and channel occupancy.

The fast engine never materializes UEs.  Given the BS tessellation, the UE
counts of distinct cells on one channel are independent Poisson variables
with means ``lambda_ch * |V_j|``, so "cell j holds at least one UE" is a
Bernoulli draw ``u_j >= exp(-lambda_ch |V_j|)``.  That is the same law as
dropping the UE PPP and associating each UE with its nearest BS, which
:func:`explicit_coverage` does literally for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..analytic import NetworkParams, Scheme, SchemeKind
from . import _kernels
from .sampling import SimConfig, sample_bs, sample_realization, sir_sample, trial_rng, window_polygon

__all__ = [
    "Estimate",
    "CoverageRun",
    "simulate_coverage",
    "estimate_coverage",
    "explicit_coverage",
    "estimate_alloc_fraction",
    "estimate_occupancy",
    "GUARD_FRACTION",
]

GUARD_FRACTION = 0.25
_FADING_STREAM = 1


@dataclass(frozen=True)
class Estimate:
    mean: float
    half_width_95: float
    n: int

    @classmethod
    def from_samples(cls, values: np.ndarray) -> "Estimate":
        values = np.asarray(values, dtype=float)
        n = values.size
        sd = float(values.std(ddof=1)) if n > 1 else 0.0
        return cls(float(values.mean()), 1.96 * sd / math.sqrt(n), n)

    @property
    def low(self) -> float:
        return self.mean - self.half_width_95

    @property
    def high(self) -> float:
        return self.mean + self.half_width_95


@dataclass(frozen=True)
class CoverageRun:
    thresholds: tuple
    covered: np.ndarray  # (trials, thresholds) booleans
    infinite_sir: int
    redraws: int
    disc_resolved: int
    polygon_resolved: int

    @property
    def estimates(self) -> list:
        return [(t, Estimate.from_samples(self.covered[:, k])) for k, t in enumerate(self.thresholds)]


def _channel_rule(scheme: Scheme, lambda_u: float):
    """(UE density per channel, whether interferers must share BS 0's channel)."""
    if scheme.kind is SchemeKind.FRU:
        return lambda_u / scheme.m, False
    return lambda_u, scheme.kind is SchemeKind.FRB


def _draw_trial(params: NetworkParams, scheme: Scheme, radius: float, seed: int, trial: int):
    rng = trial_rng(seed, trial)
    x, y, r, redraws = sample_bs(rng, params.lambda_b, radius)
    n = x.size
    h = rng.standard_exponential(n)
    u_act = rng.random(n)
    ch = rng.integers(0, scheme.m, n)
    return rng, x, y, r, h, u_act, ch, redraws


def _check_thresholds(thresholds: Sequence[float]) -> np.ndarray:
    thr = np.asarray(list(thresholds), dtype=float)
    if thr.ndim != 1 or thr.size == 0:
        raise ValueError("at least one threshold is required")
    if np.any(~(thr > 0)) or np.any(~np.isfinite(thr)):
        raise ValueError("thresholds must be positive and finite")
    if np.any(np.diff(thr) <= 0):
        raise ValueError("thresholds must be strictly increasing")
    return thr


def simulate_coverage(
    params: NetworkParams,
    scheme: Scheme,
    cfg: SimConfig,
    thresholds: Sequence[float],
    trial_indices: Iterable[int] | None = None,
) -> CoverageRun:
    """Coverage indicators for every trial and threshold from common random numbers."""
    thr = _check_thresholds(thresholds)
    radius = cfg.radius_for(params)
    wx, wy = window_polygon(radius)
    lam_ch, match = _channel_rule(scheme, params.lambda_u)
    trials = range(cfg.trials) if trial_indices is None else list(trial_indices)
    covered = np.zeros((len(trials), thr.size), dtype=bool)
    stats = np.zeros(2, dtype=np.int64)
    n_inf = 0
    redraws = 0
    row = np.zeros(thr.size, dtype=np.bool_)
    for i, trial in enumerate(trials):
        _, x, y, r, h, u_act, ch, nre = _draw_trial(params, scheme, radius, cfg.seed, trial)
        redraws += nre
        inf = _kernels.coverage_trial(
            x, y, r, h, u_act, ch, match, lam_ch, params.alpha, thr, radius, wx, wy, row, stats
        )
        covered[i] = row
        n_inf += int(inf)
    return CoverageRun(
        thresholds=tuple(float(t) for t in thr),
        covered=covered,
        infinite_sir=n_inf,
        redraws=redraws,
        disc_resolved=int(stats[0]),
        polygon_resolved=int(stats[1]),
    )


def estimate_coverage(params: NetworkParams, scheme: Scheme, cfg: SimConfig, thresholds):
    """Empirical ``P(SIR >= t)`` per threshold as a list of ``(t, Estimate)``."""
    return simulate_coverage(params, scheme, cfg, thresholds).estimates


def explicit_coverage(params: NetworkParams, scheme: Scheme, cfg: SimConfig, thresholds):
    """Reference estimator that drops every UE and computes the SIR exactly.

    Cost grows with ``lambda_u * R**2`` per trial; meant for small windows.
    """
    thr = _check_thresholds(thresholds)
    sirs = np.empty(cfg.trials)
    for trial in range(cfg.trials):
        real = sample_realization(params, cfg, trial, scheme)
        sirs[trial] = sir_sample(real, params, trial_rng(cfg.seed, trial, _FADING_STREAM))
    return [(float(t), Estimate.from_samples(sirs >= t)) for t in thr]


def estimate_alloc_fraction(params: NetworkParams, scheme: Scheme, cfg: SimConfig) -> Estimate:
    """Empirical ``E[1/N]``, N counting the typical UE and the UEs on its BS and channel."""
    radius = cfg.radius_for(params)
    wx, wy = window_polygon(radius)
    lam_ch, _ = _channel_rule(scheme, params.lambda_u)
    inv = np.empty(cfg.trials)
    for trial in range(cfg.trials):
        rng, x, y, *_ = _draw_trial(params, scheme, radius, cfg.seed, trial)
        area = _kernels.serving_cell_area(x, y, radius, wx, wy)
        inv[trial] = 1.0 / (1 + rng.poisson(lam_ch * area))
    return Estimate.from_samples(inv)


def estimate_occupancy(params: NetworkParams, cfg: SimConfig, channel_load: float) -> Estimate:
    """Fraction of BSs holding at least one UE when a channel carries UE density ``channel_load``.

    BSs in the outer ``GUARD_FRACTION`` of the window are skipped; each trial
    contributes its interior fraction, so ``n`` counts trials.
    """
    if channel_load < 0:
        raise ValueError("channel_load must be nonnegative")
    radius = cfg.radius_for(params)
    wx, wy = window_polygon(radius)
    inner = (1.0 - GUARD_FRACTION) * radius
    stats = np.zeros(2, dtype=np.int64)
    frac = np.empty(cfg.trials)
    base = Scheme.baseline()
    for trial in range(cfg.trials):
        _, x, y, r, _, u_act, _, _ = _draw_trial(params, base, radius, cfg.seed, trial)
        if channel_load == 0:
            frac[trial] = 0.0
            continue
        occ, cnt = _kernels.occupancy_trial(x, y, r, u_act, channel_load, inner, radius, wx, wy, stats)
        frac[trial] = occ / cnt if cnt else 0.0
    return Estimate.from_samples(frac)
