import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from freqreuse.analytic import NetworkParams, Scheme, SchemeKind, ubiquitous_rate
from freqreuse.optimizer import (
    BoundaryHitWarning,
    Method,
    Regime,
    asymptotic_m_regime,
    first_order_curve,
    first_order_objective,
    optimal_m_full_search,
    optimal_m_surrogate,
    regime_indicator,
    ubiquitous_rate_curve,
)

KINDS = [SchemeKind.FRB, SchemeKind.FRU]
ratios = st.floats(1e-2, 1e2)


def params(ratio, **kw):
    return NetworkParams(lambda_b=ratio, lambda_u=1.0, **kw)


@pytest.mark.parametrize("kind", KINDS)
def test_vector_curves_match_scalar(kind):
    p = params(0.3)
    ms = np.arange(1, 200)
    rates = ubiquitous_rate_curve(p, kind, ms)
    resid = first_order_curve(p, kind, ms)
    for m in (1, 2, 7, 64, 199):
        assert rates[m - 1] == pytest.approx(ubiquitous_rate(p, Scheme(kind, m)), rel=1e-13)
        assert resid[m - 1] == pytest.approx(first_order_objective(p, kind, m), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("kind", KINDS)
def test_full_search_is_exhaustive_argmax(kind):
    p = params(0.5)
    res = optimal_m_full_search(p, kind, m_max=300)
    best = max(range(1, 301), key=lambda m: (ubiquitous_rate(p, Scheme(kind, m)), -m))
    assert res.m_star == best
    assert res.method is Method.FULL_SEARCH
    assert res.rate_at_m_star == pytest.approx(ubiquitous_rate(p, Scheme(kind, best)), rel=1e-14)
    assert len(res.objective_trace) == 300


@pytest.mark.parametrize("kind", KINDS)
def test_m_max_one_is_baseline(kind):
    p = params(1.0)
    res = optimal_m_full_search(p, kind, m_max=1)
    assert res.m_star == 1
    assert not res.hit_boundary
    assert res.rate_at_m_star == pytest.approx(ubiquitous_rate(p, Scheme.baseline()), rel=1e-14)


def test_boundary_warning():
    with pytest.warns(BoundaryHitWarning):
        res = optimal_m_full_search(params(0.01), SchemeKind.FRB, m_max=4)
    assert res.hit_boundary and res.m_star == 4


def test_baseline_rejected():
    with pytest.raises(ValueError):
        optimal_m_full_search(params(1.0), SchemeKind.BASELINE)
    with pytest.raises(ValueError):
        optimal_m_surrogate(params(1.0), "frb", m_max=0)


def test_dense_network_prefers_single_channel():
    for kind in KINDS:
        assert optimal_m_full_search(params(100.0), kind).m_star == 1
        assert optimal_m_surrogate(params(100.0), kind).m_star == 1


@given(ratio=ratios, kind=st.sampled_from(KINDS))
def test_full_search_dominates(ratio, kind):
    p = params(ratio)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryHitWarning)
        full = optimal_m_full_search(p, kind)
        sur = optimal_m_surrogate(p, kind)
    assert full.rate_at_m_star >= ubiquitous_rate(p, Scheme.baseline())
    assert full.rate_at_m_star >= sur.rate_at_m_star
    assert sur.method is Method.SURROGATE


@given(ratio=st.floats(1e-2, 30), factor=st.floats(1.5, 10))
def test_m_star_non_increasing_with_density(ratio, factor):
    lo = optimal_m_full_search(params(ratio), SchemeKind.FRB).m_star
    hi = optimal_m_full_search(params(ratio * factor), SchemeKind.FRB).m_star
    assert hi <= lo


def test_regime_labels():
    assert regime_indicator(params(1.0)) == pytest.approx(0.01)
    assert asymptotic_m_regime(params(1e-2)) is Regime.DIVERGING
    assert asymptotic_m_regime(params(1e3)) is Regime.CONVERGING_TO_ONE
    assert asymptotic_m_regime(params(1.0)) is Regime.INTERMEDIATE


def test_regime_consistent_with_search():
    # sparse: user-specific reuse keeps gaining from more channels; very dense: one channel is best
    assert optimal_m_full_search(params(1e-2), SchemeKind.FRU).m_star > 1000
    # BS-specific reuse saturates once every BS is occupied
    assert optimal_m_full_search(params(1e-2), SchemeKind.FRB).m_star == \
        optimal_m_full_search(params(1e-3), SchemeKind.FRB).m_star
    assert optimal_m_full_search(params(1e3), SchemeKind.FRB).m_star == 1
