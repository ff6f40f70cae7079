"""Real-argument Gauss hypergeometric evaluation for SIR coverage.

Only the parameter families needed for Rayleigh/PPP downlink coverage are
supported: ``z <= 0`` and ``0 <= z <= 1``.  Arguments outside ``|z| <= 1/2``
are mapped back into that disc by the Pfaff transformation and, if needed,
the ``z -> 1 - z`` connection formula, so every series that is actually
summed has ratio at most one half.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "CoverageArgs",
    "HypergeometricDomainError",
    "HypergeometricConvergenceError",
    "gauss_2f1",
    "coverage_exact",
    "coverage_pfaff",
    "gauss_sum_coverage_constant",
]

SERIES_RTOL = 1e-14
SERIES_MAX_TERMS = 10_000
_DIRECT_RADIUS = 0.5
# the two connection terms cancel like 1/|s - n| near an integer s
_INTEGER_GAP = 1e-5


class HypergeometricDomainError(ValueError):
    """Raised for parameter triples or arguments outside the supported set."""


class HypergeometricConvergenceError(ArithmeticError):
    """Raised when a series fails to reach tolerance within the term cap."""


@dataclass(frozen=True)
class CoverageArgs:
    """Normalized threshold ``x = (lambda_i/lambda_b)**(alpha/2) * t`` and alpha.

    Exponents up to 8 are exercised by the test-suite; larger values work
    numerically but are untested.
    """

    x: float
    alpha: float

    def __post_init__(self):
        if not (self.x >= 0.0) or math.isinf(self.x):
            raise HypergeometricDomainError(f"x must be finite and >= 0, got {self.x!r}")
        if not self.alpha > 2.0:
            raise HypergeometricDomainError(f"alpha must exceed 2, got {self.alpha!r}")

    @property
    def delta(self) -> float:
        return 2.0 / self.alpha


def _is_nonpositive_int(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


def _rgamma(v: float) -> float:
    """1/Gamma(v), zero at the poles."""
    if _is_nonpositive_int(v):
        return 0.0
    if abs(v) < 1e-8:
        # 1/Gamma(v) = v + euler_gamma v^2 + O(v^3); Gamma itself overflows here
        return v * (1.0 + 0.5772156649015329 * v)
    try:
        return 1.0 / math.gamma(v)
    except OverflowError:
        return 0.0


def _series(a: float, b: float, c: float, z: float) -> float:
    # term_{n+1} = term_n (a+n)(b+n) z / ((c+n)(n+1))
    total = 1.0
    term = 1.0
    for n in range(SERIES_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if term == 0.0 or abs(term) < SERIES_RTOL * abs(total):
            return total
    raise HypergeometricConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) did not converge in {SERIES_MAX_TERMS} terms"
    )


def _connect_to_one(a: float, b: float, c: float, w: float) -> float:
    """Evaluate 2F1 at ``z = 1 - w`` (0 < w < 1/2) through series in ``w``."""
    s = c - a - b
    if abs(s - round(s)) < _INTEGER_GAP:
        raise HypergeometricDomainError(
            f"c - a - b = {s} is (nearly) an integer; logarithmic case is not supported"
        )
    gc = math.gamma(c)
    first = gc * math.gamma(s) * _rgamma(c - a) * _rgamma(c - b)
    second = gc * math.gamma(-s) * _rgamma(a) * _rgamma(b)
    out = 0.0
    if first != 0.0:
        out += first * _series(a, b, 1.0 - s, w)
    if second != 0.0:
        out += second * w**s * _series(c - a, c - b, 1.0 + s, w)
    return out


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 1.

    Terms are built by the Pochhammer recurrence and summation stops once a
    term falls below ``1e-14`` of the partial sum.  For ``z < -1/2`` the
    Pfaff transformation ``2F1(a,b;c;z) = (1-z)**(-b) 2F1(c-a,b;c;z/(z-1))``
    is applied first; arguments in ``(1/2, 1)`` use the connection formula
    around ``z = 1``.

    Raises
    ------
    HypergeometricDomainError
        If ``c`` is a nonpositive integer, ``z > 1``, or the sum at ``z = 1``
        diverges.
    HypergeometricConvergenceError
        If a series does not reach tolerance within 10,000 terms.
    """
    if any(math.isnan(v) for v in (a, b, c, z)):
        raise HypergeometricDomainError("NaN argument")
    if _is_nonpositive_int(c):
        raise HypergeometricDomainError(f"c = {c} is a nonpositive integer")
    if z > 1.0 or math.isinf(z):
        raise HypergeometricDomainError(f"z = {z} outside the supported range")
    if z == 0.0:
        return 1.0
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        # terminating polynomial: the raw sum is exact for any z
        degree = int(-max(v for v in (a, b) if _is_nonpositive_int(v)))
        total, term = 1.0, 1.0
        for n in range(degree):
            term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
            total += term
        return total
    if abs(z) <= _DIRECT_RADIUS:
        return _series(a, b, c, z)
    if z < 0.0:
        # Pfaff; the new argument z/(z-1) has complement 1/(1-z)
        scale = (1.0 - z) ** (-b)
        if z >= -1.0:
            return scale * _series(c - a, b, c, z / (z - 1.0))
        return scale * _connect_to_one(c - a, b, c, 1.0 / (1.0 - z))
    if z == 1.0:
        s = c - a - b
        if s <= 0:
            raise HypergeometricDomainError("2F1 diverges at z = 1 when c - a - b <= 0")
        return math.gamma(c) * math.gamma(s) * _rgamma(c - a) * _rgamma(c - b)
    return _connect_to_one(a, b, c, 1.0 - z)


def coverage_exact(args: CoverageArgs) -> float:
    """Rayleigh/PPP coverage ``1 / 2F1(1, -2/alpha; 1 - 2/alpha; -x)``."""
    d = args.delta
    if args.x == 0.0:
        return 1.0
    return 1.0 / gauss_2f1(1.0, -d, 1.0 - d, -args.x)


def gauss_sum_coverage_constant(alpha: float) -> float:
    """``(2 pi / alpha) csc(2 pi / alpha)``, the value of the Pfaff-form 2F1 at argument 1."""
    d = 2.0 / alpha
    return math.pi * d / math.sin(math.pi * d)


def coverage_pfaff(args: CoverageArgs) -> float:
    """Coverage written as ``c0(x) * (1 + x)**(-2/alpha)``.

    ``c0(x) = 1 / 2F1(-d, -d; 1 - d; x/(1+x))`` with ``d = 2/alpha``; it
    decreases from 1 at ``x = 0`` to ``alpha / (2 pi csc(2 pi / alpha))`` as
    ``x -> inf``.  For ``x <= 1`` the series is summed at ``x/(1+x) <= 1/2``;
    beyond that it is expanded in ``1/(1+x) < 1/2``.
    """
    x = args.x
    if x == 0.0:
        return 1.0
    d = args.delta
    a = b = -d
    c = 1.0 - d
    if x <= 1.0:
        f = _series(a, b, c, x / (1.0 + x))
    else:
        f = _connect_to_one(a, b, c, 1.0 / (1.0 + x))
    return (1.0 + x) ** (-d) / f
