"""Choosing the channel count M that maximizes the ubiquitous rate."""

from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .analytic import (
    OCCUPANCY_SHAPE,
    NetworkParams,
    Scheme,
    SchemeKind,
    channel_occupancy,
    ubiquitous_rate,
)

__all__ = [
    "Method",
    "Regime",
    "OptimizationResult",
    "BoundaryHitWarning",
    "DEFAULT_M_MAX",
    "optimal_m_full_search",
    "optimal_m_surrogate",
    "first_order_objective",
    "first_order_curve",
    "ubiquitous_rate_curve",
    "asymptotic_m_regime",
    "regime_indicator",
]

log = logging.getLogger(__name__)

DEFAULT_M_MAX = {SchemeKind.FRB: 1024, SchemeKind.FRU: 4096}
DIVERGING_BELOW = 1e-3
CONVERGING_ABOVE = 1e3


class BoundaryHitWarning(UserWarning):
    """The maximizer sits on the search cap; the true optimum may be larger."""


class Method(str, enum.Enum):
    FULL_SEARCH = "full_search"
    SURROGATE = "surrogate"


class Regime(str, enum.Enum):
    DIVERGING = "diverging"
    CONVERGING_TO_ONE = "converging_to_one"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class OptimizationResult:
    m_star: int
    rate_at_m_star: float
    method: Method
    objective_trace: list = field(default_factory=list, compare=False, repr=False)
    m_max: int = 1

    @property
    def hit_boundary(self) -> bool:
        return self.m_max > 1 and self.m_star == self.m_max


def _check_kind(kind) -> SchemeKind:
    kind = SchemeKind.parse(kind)
    if kind is SchemeKind.BASELINE:
        raise ValueError("channel-count optimization applies to frb and fru only")
    return kind


def _resolve_m_max(kind: SchemeKind, m_max) -> int:
    m_max = DEFAULT_M_MAX[kind] if m_max is None else int(m_max)
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    return m_max


def _first_index(values: np.ndarray) -> int:
    # np.argmax/argmin return the first extremum: ties go to the smaller M
    return int(np.argmax(values))


def _count_local_maxima(values: np.ndarray) -> int:
    if values.size < 3:
        return 0
    inner = (values[1:-1] > values[:-2]) & (values[1:-1] > values[2:])
    return int(inner.sum())


def _report_boundary(result: OptimizationResult, kind: SchemeKind) -> None:
    if result.hit_boundary:
        warnings.warn(
            f"{kind.value}: optimum found at the cap M = {result.m_max}",
            BoundaryHitWarning,
            stacklevel=3,
        )


def _occupancy(load: np.ndarray, lambda_b: float) -> np.ndarray:
    return -np.expm1(-OCCUPANCY_SHAPE * np.log1p(load / (OCCUPANCY_SHAPE * lambda_b)))


def ubiquitous_rate_curve(params: NetworkParams, kind, ms: np.ndarray) -> np.ndarray:
    """Vectorized ubiquitous rate over an array of channel counts."""
    kind = _check_kind(kind)
    ms = np.asarray(ms, dtype=float)
    k = params.alpha / 2.0
    lam, lam_b = params.lambda_u, params.lambda_b
    if kind is SchemeKind.FRB:
        p = _occupancy(np.full_like(ms, lam), lam_b)
        alloc = np.minimum(1.0, p * lam_b / lam)
        ratio = p / ms
    else:
        load = lam / ms
        p = _occupancy(load, lam_b)
        alloc = np.minimum(1.0, p * lam_b / load)
        ratio = p
    t = params.c_eta / ratio**k
    return params.eta * (params.bandwidth_w / ms) * alloc * np.log1p(t) / np.log(2.0)


def optimal_m_full_search(
    params: NetworkParams, kind, m_max: int | None = None
) -> OptimizationResult:
    """Exhaustive argmax of the closed-form ubiquitous rate over M = 1..m_max."""
    kind = _check_kind(kind)
    m_max = _resolve_m_max(kind, m_max)
    ms = np.arange(1, m_max + 1)
    rates = ubiquitous_rate_curve(params, kind, ms)
    idx = _first_index(rates)
    peaks = _count_local_maxima(rates)
    if peaks > 1:
        log.info("%s objective has %d interior local maxima at %s", kind.value, peaks, params)
    result = OptimizationResult(
        m_star=idx + 1,
        rate_at_m_star=ubiquitous_rate(params, Scheme(kind, idx + 1)),
        method=Method.FULL_SEARCH,
        objective_trace=list(zip(ms.tolist(), rates.tolist())),
        m_max=m_max,
    )
    _report_boundary(result, kind)
    return result


def first_order_objective(params: NetworkParams, kind, m: int) -> float:
    """Absolute first-order-condition residual whose argmin approximates M*.

    FR_b: ``|(1 + p**k / (c M**k)) log2(1 + c M**k / p**k) - k|``
    FR_u: ``|(c + q**k) log2(1 + c / q**k) - k c|``
    with ``k = alpha/2``, ``c = c_eta``, ``p = p_c(lambda)`` and ``q = p_c(lambda/M)``.
    """
    kind = _check_kind(kind)
    k = params.alpha / 2.0
    c = params.c_eta
    if kind is SchemeKind.FRB:
        p = channel_occupancy(params.lambda_u, params.lambda_b)
        y = c * m**k / p**k
        return abs((1.0 + 1.0 / y) * math.log2(1.0 + y) - k)
    q = channel_occupancy(params.lambda_u / m, params.lambda_b) ** k
    return abs((c + q) * math.log2(1.0 + c / q) - k * c)


def first_order_curve(params: NetworkParams, kind, ms: np.ndarray) -> np.ndarray:
    """Vectorized :func:`first_order_objective`."""
    kind = _check_kind(kind)
    ms = np.asarray(ms, dtype=float)
    k = params.alpha / 2.0
    c = params.c_eta
    if kind is SchemeKind.FRB:
        p = channel_occupancy(params.lambda_u, params.lambda_b)
        y = c * ms**k / p**k
        return np.abs((1.0 + 1.0 / y) * np.log2(1.0 + y) - k)
    q = _occupancy(params.lambda_u / ms, params.lambda_b) ** k
    return np.abs((c + q) * np.log2(1.0 + c / q) - k * c)


def optimal_m_surrogate(
    params: NetworkParams, kind, m_max: int | None = None
) -> OptimizationResult:
    """Integer M minimizing the first-order residual; the rate is re-evaluated at that M."""
    kind = _check_kind(kind)
    m_max = _resolve_m_max(kind, m_max)
    ms = np.arange(1, m_max + 1)
    resid = first_order_curve(params, kind, ms)
    idx = _first_index(-resid)
    m_star = idx + 1
    result = OptimizationResult(
        m_star=m_star,
        rate_at_m_star=ubiquitous_rate(params, Scheme(kind, m_star)),
        method=Method.SURROGATE,
        objective_trace=list(zip(ms.tolist(), resid.tolist())),
        m_max=m_max,
    )
    _report_boundary(result, kind)
    return result


def regime_indicator(params: NetworkParams) -> float:
    """``(1 - eta) * (lambda_b / lambda_u)**(alpha/2)``."""
    return (1.0 - params.eta) * params.density_ratio ** (params.alpha / 2.0)


def asymptotic_m_regime(
    params: NetworkParams,
    diverging_below: float = DIVERGING_BELOW,
    converging_above: float = CONVERGING_ABOVE,
) -> Regime:
    """Label the density regime: many channels pay off, none do, or in between."""
    v = regime_indicator(params)
    if v < diverging_below:
        return Regime.DIVERGING
    if v > converging_above:
        return Regime.CONVERGING_TO_ONE
    return Regime.INTERMEDIATE
