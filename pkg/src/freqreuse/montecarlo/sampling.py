"""Per-trial random streams and PPP network realizations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from ..analytic import NetworkParams, Scheme, SchemeKind

__all__ = [
    "SimConfig",
    "Realization",
    "trial_rng",
    "window_polygon",
    "sample_bs",
    "sample_realization",
    "sir_sample",
]

_WINDOW_SIDES = 128
_UINT64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    """Simulation window and trial budget.

    ``window_radius=None`` selects ``max(30/sqrt(lambda_b), 10/sqrt(lambda_u))``.
    """

    trials: int = 10_000
    seed: int = 0
    window_radius: Optional[float] = None
    target_rel_truncation: float = 1e-3

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if self.window_radius is not None and not self.window_radius > 0:
            raise ValueError(f"window_radius must be positive, got {self.window_radius!r}")
        if not self.target_rel_truncation > 0:
            raise ValueError("target_rel_truncation must be positive")

    def radius_for(self, params: NetworkParams) -> float:
        if self.window_radius is not None:
            return float(self.window_radius)
        return max(30.0 / math.sqrt(params.lambda_b), 10.0 / math.sqrt(params.lambda_u))

    def truncation_fraction(self, params: NetworkParams) -> float:
        """Mean far-field interference beyond the window relative to the whole field.

        Both terms are ``2 pi lambda_b r**(2-alpha) / (alpha-2)``, the field
        starting at the mean serving distance ``1/(2 sqrt(lambda_b))``.
        """
        r_ref = 0.5 / math.sqrt(params.lambda_b)
        return (r_ref / self.radius_for(params)) ** (params.alpha - 2.0)

    def window_sufficient(self, params: NetworkParams) -> bool:
        return self.truncation_fraction(params) < self.target_rel_truncation


def trial_rng(seed: int, trial_index: int, stream: int = 0) -> np.random.Generator:
    """Counter-keyed Philox stream for one trial; independent of evaluation order."""
    key = np.array([seed & _UINT64, ((trial_index & 0xFFFFFFFF) << 32) | (stream & 0xFFFFFFFF)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def window_polygon(radius: float, sides: int = _WINDOW_SIDES) -> tuple[np.ndarray, np.ndarray]:
    """Regular polygon circumscribing the disc of the given radius."""
    rc = radius / math.cos(math.pi / sides)
    ang = (np.arange(sides) + 0.5) * (2.0 * math.pi / sides)
    return rc * np.cos(ang), rc * np.sin(ang)


def sample_bs(rng: np.random.Generator, lambda_b: float, radius: float):
    """BS PPP in the disc, sorted by distance from the origin.

    The squared radii scaled by ``pi lambda_b`` form a unit-rate Poisson
    process on ``[0, pi lambda_b R**2]``, so they are generated as cumulative
    exponential gaps.  Empty realizations are redrawn.

    Returns ``(x, y, r, redraws)``.
    """
    mean = math.pi * lambda_b * radius**2
    chunk = int(mean + 6.0 * math.sqrt(mean) + 16.0)
    redraws = 0
    while True:
        arrivals = np.cumsum(rng.standard_exponential(chunk))
        while arrivals[-1] <= mean:
            more = arrivals[-1] + np.cumsum(rng.standard_exponential(chunk))
            arrivals = np.concatenate([arrivals, more])
        n = int(np.searchsorted(arrivals, mean, side="right"))
        if n > 0:
            break
        redraws += 1
    r = np.sqrt(arrivals[:n] / (math.pi * lambda_b))
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    return r * np.cos(theta), r * np.sin(theta), r, redraws


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Realization:
    """One network snapshot with explicit UEs.

    UE 0 is the typical UE at the origin.  ``bs_channel`` is meaningful for
    FR_b only (every other scheme stores zeros).
    """

    scheme: Scheme
    bs_points: np.ndarray
    ue_points: np.ndarray
    association: np.ndarray
    bs_channel: np.ndarray
    ue_channel: np.ndarray
    redraws: int = 0
    typical: int = field(default=0)

    @property
    def typical_ue(self) -> np.ndarray:
        return self.ue_points[self.typical]

    @property
    def serving_bs(self) -> int:
        return int(self.association[self.typical])

    def interferers(self) -> np.ndarray:
        """BSs other than the serving one with an associated UE on the typical channel."""
        c0 = self.ue_channel[self.typical]
        on_channel = self.ue_channel == c0
        on_channel[self.typical] = False
        active = np.zeros(len(self.bs_points), dtype=bool)
        active[self.association[on_channel]] = True
        active[self.serving_bs] = False
        return np.flatnonzero(active)

    def sharing_count(self) -> int:
        """UEs (typical included) on the typical UE's BS and channel."""
        same = (self.association == self.serving_bs) & (
            self.ue_channel == self.ue_channel[self.typical]
        )
        return int(same.sum())


def sample_realization(
    params: NetworkParams,
    cfg: SimConfig,
    trial_index: int,
    scheme: Scheme = Scheme.baseline(),
) -> Realization:
    """Draw BSs and UEs as independent PPPs in the window and apply the scheme's channel rule."""
    rng = trial_rng(cfg.seed, trial_index)
    radius = cfg.radius_for(params)
    x, y, _, redraws = sample_bs(rng, params.lambda_b, radius)
    bs = np.column_stack([x, y])
    n_ue = rng.poisson(math.pi * params.lambda_u * radius**2)
    ru = radius * np.sqrt(rng.random(n_ue))
    tu = rng.uniform(0.0, 2.0 * math.pi, n_ue)
    ue = np.vstack([np.zeros((1, 2)), np.column_stack([ru * np.cos(tu), ru * np.sin(tu)])])
    _, assoc = cKDTree(bs).query(ue)
    m = scheme.m
    if scheme.kind is SchemeKind.FRB:
        bs_channel = rng.integers(0, m, len(bs))
        ue_channel = bs_channel[assoc]
    elif scheme.kind is SchemeKind.FRU:
        bs_channel = np.zeros(len(bs), dtype=np.int64)
        ue_channel = rng.integers(0, m, len(ue))
    else:
        bs_channel = np.zeros(len(bs), dtype=np.int64)
        ue_channel = np.zeros(len(ue), dtype=np.int64)
    return Realization(
        scheme=scheme,
        bs_points=_frozen(bs),
        ue_points=_frozen(ue),
        association=_frozen(assoc.astype(np.int64)),
        bs_channel=_frozen(bs_channel.astype(np.int64)),
        ue_channel=_frozen(ue_channel.astype(np.int64)),
        redraws=redraws,
    )


def sir_sample(real: Realization, params: NetworkParams, rng: np.random.Generator) -> float:
    """SIR of the typical UE under unit-mean Rayleigh fading; ``inf`` without interferers."""
    d = np.hypot(real.bs_points[:, 0], real.bs_points[:, 1])
    h = rng.standard_exponential(len(d))
    gain = h * d ** (-params.alpha)
    interference = gain[real.interferers()].sum()
    signal = gain[real.serving_bs]
    if interference == 0.0:
        return math.inf
    return float(signal / interference)
