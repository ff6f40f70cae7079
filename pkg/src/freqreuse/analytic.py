"""Closed-form reliability and ubiquitous rate for baseline, FR_b and FR_u.

Densities are per unit area with the unit left abstract: every quantity
here depends on ``lambda_u / lambda_b`` and on products such as
``p_c * lambda_b / lambda_u``, never on an absolute area.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

from .special_fn import CoverageArgs, coverage_exact, gauss_sum_coverage_constant

__all__ = [
    "SchemeKind",
    "NetworkParams",
    "Scheme",
    "SchemeDerived",
    "ReliabilityResult",
    "OutsideUltraReliableRegime",
    "ThresholdMode",
    "channel_occupancy",
    "scheme_parameters",
    "normalized_threshold",
    "reliability",
    "threshold_for_reliability",
    "rate_at_threshold",
    "spectral_efficiency",
    "ubiquitous_rate",
    "reliability_margin",
    "coverage_independent_thinning",
]

OCCUPANCY_SHAPE = 3.5
ULTRA_RELIABLE_ETA = 0.9


class OutsideUltraReliableRegime(UserWarning):
    """The closed forms are first-order in ``1 - eta`` and lose accuracy below eta = 0.9."""


class SchemeKind(str, enum.Enum):
    BASELINE = "baseline"
    FRB = "frb"
    FRU = "fru"

    @classmethod
    def parse(cls, value: "str | SchemeKind") -> "SchemeKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown scheme {value!r}; expected one of baseline, frb, fru")


@dataclass(frozen=True)
class NetworkParams:
    """Deployment and service parameters.

    Defaults follow the usual evaluation setting: eta = 0.99, alpha = 4 and
    W = 100 MHz.  Path-loss exponents above 8 are accepted but untested.
    """

    lambda_b: float
    lambda_u: float
    alpha: float = 4.0
    bandwidth_w: float = 100e6
    eta: float = 0.99

    def __post_init__(self):
        for name in ("lambda_b", "lambda_u", "bandwidth_w"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if not (self.alpha > 2.0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must exceed 2, got {self.alpha!r}")
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta!r}")

    @property
    def density_ratio(self) -> float:
        """BS-to-UE density ratio ``lambda_b / lambda_u``."""
        return self.lambda_b / self.lambda_u

    @property
    def c_eta(self) -> float:
        return (self.alpha / 2.0 - 1.0) * (1.0 - self.eta)

    def with_(self, **changes) -> "NetworkParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class Scheme:
    kind: SchemeKind
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind.parse(self.kind))
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ValueError(f"channel count must be an integer >= 1, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if self.kind is SchemeKind.BASELINE and self.m != 1:
            raise ValueError("the baseline uses a single channel (m = 1)")

    @classmethod
    def baseline(cls) -> "Scheme":
        return cls(SchemeKind.BASELINE, 1)

    @classmethod
    def frb(cls, m: int) -> "Scheme":
        return cls(SchemeKind.FRB, m)

    @classmethod
    def fru(cls, m: int) -> "Scheme":
        return cls(SchemeKind.FRU, m)

    def __str__(self) -> str:
        if self.kind is SchemeKind.BASELINE:
            return "baseline"
        return f"{self.kind.value}(M={self.m})"


@dataclass(frozen=True)
class SchemeDerived:
    interferer_density: float
    max_alloc: float
    alloc_fraction: float
    occupancy: float

    def interferer_ratio(self, lambda_b: float) -> float:
        return self.interferer_density / lambda_b


@dataclass(frozen=True)
class ReliabilityResult:
    exact: float
    lower_lemma2: float
    upper_lemma2: float
    ultra_lemma3: float


class ThresholdMode(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    TAYLOR = "taylor"
    EXACT_NUMERIC = "exact_numeric"


def channel_occupancy(lambda_serv: float, lambda_b: float) -> float:
    """Probability that a BS has at least one UE on a channel carrying UE density ``lambda_serv``.

    Uses the gamma cell-size approximation ``1 - (1 + lambda/(3.5 lambda_b))**-3.5``.
    """
    if not lambda_b > 0.0:
        raise ValueError(f"lambda_b must be positive, got {lambda_b!r}")
    if lambda_serv < 0.0:
        raise ValueError(f"lambda_serv must be nonnegative, got {lambda_serv!r}")
    y = lambda_serv / (OCCUPANCY_SHAPE * lambda_b)
    # -expm1(-k log1p(y)) keeps precision when y is tiny
    return -math.expm1(-OCCUPANCY_SHAPE * math.log1p(y))


def scheme_parameters(params: NetworkParams, scheme: Scheme) -> SchemeDerived:
    lam, lam_b, m = params.lambda_u, params.lambda_b, scheme.m
    if scheme.kind is SchemeKind.FRU:
        load = lam / m
        p = channel_occupancy(load, lam_b)
        lam_i = p * lam_b
    else:
        load = lam
        p = channel_occupancy(load, lam_b)
        lam_i = p * lam_b / m if scheme.kind is SchemeKind.FRB else p * lam_b
    # p_c(y) <= y analytically, so the clamp only absorbs rounding
    alloc = min(1.0, p * lam_b / load)
    return SchemeDerived(
        interferer_density=lam_i,
        max_alloc=params.bandwidth_w / m,
        alloc_fraction=alloc,
        occupancy=p,
    )


def _interferer_ratio(params: NetworkParams, scheme: Scheme) -> float:
    return scheme_parameters(params, scheme).interferer_density / params.lambda_b


def normalized_threshold(params: NetworkParams, scheme: Scheme, t: float) -> float:
    """``x = (lambda_i / lambda_b)**(alpha/2) * t``."""
    return _interferer_ratio(params, scheme) ** (params.alpha / 2.0) * t


def reliability(params: NetworkParams, scheme: Scheme, t: float) -> ReliabilityResult:
    """SIR reliability at threshold ``t`` with its Pfaff and ultra-reliable bounds."""
    if not t > 0.0:
        raise ValueError(f"SIR threshold must be positive, got {t!r}")
    alpha = params.alpha
    x = normalized_threshold(params, scheme, t)
    upper = (1.0 + x) ** (-2.0 / alpha)
    return ReliabilityResult(
        exact=coverage_exact(CoverageArgs(x, alpha)),
        lower_lemma2=upper / gauss_sum_coverage_constant(alpha),
        upper_lemma2=upper,
        ultra_lemma3=(1.0 + x) ** (-2.0 / (alpha - 2.0)),
    )


def coverage_independent_thinning(params: NetworkParams, scheme: Scheme, t: float) -> float:
    """Coverage when interferers are an independent thinning of the BS PPP beyond the serving BS.

    ``1 / (1 + a * (2F1(1, -d; 1 - d; -t) - 1))`` with ``a = lambda_i / lambda_b``:
    the thinning scales the interference Laplace exponent linearly rather
    than rescaling the threshold.  Coincides with :func:`reliability` at
    ``a = 1`` and is exact for FR_b channel selection at full load.
    """
    if not t > 0.0:
        raise ValueError(f"SIR threshold must be positive, got {t!r}")
    a = _interferer_ratio(params, scheme)
    rho = 1.0 / coverage_exact(CoverageArgs(t, params.alpha)) - 1.0
    return 1.0 / (1.0 + a * rho)


def _warn_regime(eta: float) -> None:
    if eta < ULTRA_RELIABLE_ETA:
        warnings.warn(
            f"eta = {eta} is below {ULTRA_RELIABLE_ETA}; closed-form rates assume eta close to 1",
            OutsideUltraReliableRegime,
            stacklevel=3,
        )


def threshold_for_reliability(
    params: NetworkParams,
    scheme: Scheme,
    mode: "ThresholdMode | str" = ThresholdMode.CLOSED_FORM,
) -> float:
    """SIR threshold that meets the target reliability ``params.eta``.

    ``closed_form`` inverts the ultra-reliable approximation exactly,
    ``taylor`` uses its first-order expansion ``c_eta / a**(alpha/2)``, and
    ``exact_numeric`` bisects the exact hypergeometric coverage in ``log t``.
    """
    mode = ThresholdMode(mode)
    alpha, eta = params.alpha, params.eta
    scale = _interferer_ratio(params, scheme) ** (alpha / 2.0)
    if mode is ThresholdMode.CLOSED_FORM:
        _warn_regime(eta)
        return math.expm1(-(alpha / 2.0 - 1.0) * math.log(eta)) / scale
    if mode is ThresholdMode.TAYLOR:
        _warn_regime(eta)
        return params.c_eta / scale
    return _bisect_threshold(params, scheme)


def _bisect_threshold(
    params: NetworkParams,
    scheme: Scheme,
    lo: float = 1e-30,
    hi: float = 1e60,
    max_iter: int = 200,
    tol: float = 1e-12,
) -> float:
    # coverage depends on t only through x = scale * t, so bisect in log x
    eta, alpha = params.eta, params.alpha
    scale = _interferer_ratio(params, scheme) ** (alpha / 2.0)

    def gap(log_x: float) -> float:
        return coverage_exact(CoverageArgs(math.exp(log_x), alpha)) - eta

    a, b = math.log(lo), math.log(hi)
    if gap(a) < 0.0 or gap(b) > 0.0:
        raise ArithmeticError(
            f"target reliability {eta} is not bracketed on x in [{lo}, {hi}]"
        )
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        gm = gap(mid)
        if abs(gm) < tol or b - a < 1e-15:
            return math.exp(mid) / scale
        if gm > 0.0:
            a = mid
        else:
            b = mid
    raise ArithmeticError(f"threshold bisection did not converge in {max_iter} steps")


def spectral_efficiency(t: float) -> float:
    return math.log2(1.0 + t)


def rate_at_threshold(params: NetworkParams, scheme: Scheme, t: float) -> float:
    """Average rate ``(W/M) * E[1/N] * log2(1 + t)`` in bit/s."""
    d = scheme_parameters(params, scheme)
    return d.max_alloc * d.alloc_fraction * math.log1p(t) / math.log(2.0)


def ubiquitous_rate(params: NetworkParams, scheme: Scheme) -> float:
    """Maximum average rate whose SIR threshold is met with probability eta.

    ``eta * W/M * E[1/N] * log2(1 + c_eta / a**(alpha/2))``, i.e. eta times
    the rate at the first-order threshold.
    """
    t = threshold_for_reliability(params, scheme, ThresholdMode.TAYLOR)
    return params.eta * rate_at_threshold(params, scheme, t)


def reliability_margin(params: NetworkParams, scheme: Scheme) -> float:
    """Exact reliability minus eta at the first-order threshold (diagnostic)."""
    t = threshold_for_reliability(params, scheme, ThresholdMode.TAYLOR)
    return reliability(params, scheme, t).exact - params.eta
