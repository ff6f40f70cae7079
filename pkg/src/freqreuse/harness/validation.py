"""Monte Carlo coverage checked against the analytic reliability."""

from __future__ import annotations

from dataclasses import dataclass

from ..analytic import NetworkParams, Scheme, coverage_independent_thinning, reliability
from ..montecarlo import SimConfig, simulate_coverage
from .tables import Table

__all__ = ["ValidationReport", "run_validation", "VALIDATION_COLUMNS"]

VALIDATION_COLUMNS = (
    "check", "t", "empirical", "ci_half_width", "n", "analytic_exact", "lemma2_lower",
    "lemma2_upper", "lemma3", "thinned_exact", "deviation", "tolerance", "pass",
)

_NOTES = {
    "check": "coverage rows per threshold, then one window-sufficiency row",
    "t": "SIR threshold",
    "empirical": "Monte Carlo coverage (window row: far-field truncation fraction)",
    "ci_half_width": "95% normal-approximation half-width",
    "n": "trials",
    "analytic_exact": "closed-form reliability at the normalized threshold",
    "lemma2_lower": "algebraic lower bound",
    "lemma2_upper": "algebraic upper bound",
    "lemma3": "ultra-reliable approximation",
    "thinned_exact": "coverage with interferers as an independent thinning (diagnostic)",
    "deviation": "|empirical - analytic_exact|",
    "tolerance": "max(absolute tolerance, ci_half_width) (window row: allowed fraction)",
    "pass": "1 when the row is within tolerance",
}


@dataclass(frozen=True)
class ValidationReport:
    table: Table
    infinite_sir: int
    redraws: int

    @property
    def passed(self) -> bool:
        return all(self.table.column("pass"))

    @property
    def window_ok(self) -> bool:
        return bool(self.table.rows[-1][-1])


def run_validation(
    params: NetworkParams,
    scheme: Scheme,
    cfg: SimConfig,
    thresholds,
    tolerance: float = 0.005,
) -> ValidationReport:
    """Per-threshold empirical vs analytic coverage plus a truncation check."""
    run = simulate_coverage(params, scheme, cfg, thresholds)
    rows = []
    for t, est in run.estimates:
        rel = reliability(params, scheme, t)
        dev = abs(est.mean - rel.exact)
        tol = max(tolerance, est.half_width_95)
        rows.append((
            "coverage", t, est.mean, est.half_width_95, est.n, rel.exact, rel.lower_lemma2,
            rel.upper_lemma2, rel.ultra_lemma3, coverage_independent_thinning(params, scheme, t),
            dev, tol, int(dev <= tol),
        ))
    frac = cfg.truncation_fraction(params)
    rows.append((
        "window", None, frac, None, cfg.trials, None, None, None, None, None, None,
        cfg.target_rel_truncation, int(cfg.window_sufficient(params)),
    ))
    return ValidationReport(Table(VALIDATION_COLUMNS, tuple(rows), _NOTES),
                            run.infinite_sir, run.redraws)
