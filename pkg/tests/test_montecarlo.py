import math

import numpy as np
import pytest
import shapely
from hypothesis import given, settings
from hypothesis import strategies as st

from freqreuse.analytic import (
    NetworkParams,
    Scheme,
    channel_occupancy,
    coverage_independent_thinning,
    reliability,
)
from freqreuse.montecarlo import (
    Estimate,
    SimConfig,
    estimate_alloc_fraction,
    estimate_coverage,
    estimate_occupancy,
    explicit_coverage,
    sample_bs,
    sample_realization,
    simulate_coverage,
    sir_sample,
    trial_rng,
    window_polygon,
)
from freqreuse.montecarlo import _kernels

THRESHOLDS = (0.1, 1.0, 10.0)


def agree(a: Estimate, b: Estimate, k: float = 1.5) -> bool:
    # 1.5 x the combined 95% half-widths is roughly a 3-sigma band
    return abs(a.mean - b.mean) <= k * math.hypot(a.half_width_95, b.half_width_95) + 1e-12


def test_trial_streams_are_keyed():
    a = trial_rng(7, 3).random(4)
    assert np.array_equal(a, trial_rng(7, 3).random(4))
    assert not np.array_equal(a, trial_rng(7, 4).random(4))
    assert not np.array_equal(a, trial_rng(8, 3).random(4))
    assert not np.array_equal(a, trial_rng(7, 3, stream=1).random(4))


def test_bs_sampling_sorted_and_poisson():
    lam, radius = 2.0, 5.0
    counts = []
    for i in range(400):
        x, y, r, _ = sample_bs(trial_rng(0, i), lam, radius)
        assert np.all(np.diff(r) >= 0)
        assert np.allclose(np.hypot(x, y), r)
        assert r[-1] <= radius
        counts.append(r.size)
    mean = math.pi * lam * radius**2
    assert np.mean(counts) == pytest.approx(mean, abs=4 * math.sqrt(mean / 400))
    assert np.var(counts) == pytest.approx(mean, rel=0.25)


def test_empty_windows_are_redrawn():
    redraws = 0
    for i in range(50):
        x, _, _, n = sample_bs(trial_rng(1, i), 0.05, 1.0)
        assert x.size >= 1
        redraws += n
    assert redraws > 0


def test_realization_structure():
    p = NetworkParams(1.0, 2.0)
    cfg = SimConfig(trials=1, seed=3, window_radius=6.0)
    real = sample_realization(p, cfg, 0, Scheme.frb(3))
    assert np.array_equal(real.typical_ue, [0.0, 0.0])
    d = np.hypot(*(real.ue_points[:, None, :] - real.bs_points[None, :, :]).transpose(2, 0, 1))
    assert np.array_equal(real.association, d.argmin(axis=1))
    assert np.array_equal(real.ue_channel, real.bs_channel[real.association])
    assert real.serving_bs == 0  # BSs are sorted by distance from the origin
    with pytest.raises(ValueError):
        real.ue_points[0, 0] = 1.0
    inter = real.interferers()
    assert 0 not in inter
    assert np.all(real.bs_channel[inter] == real.bs_channel[0])


def test_fru_channels_are_per_user():
    p = NetworkParams(1.0, 5.0)
    real = sample_realization(p, SimConfig(trials=1, window_radius=6.0), 0, Scheme.fru(4))
    per_bs = [np.unique(real.ue_channel[real.association == j]).size for j in range(len(real.bs_points))]
    assert max(per_bs) > 1
    assert real.sharing_count() >= 1


def test_cell_areas_match_shapely():
    x, y, _, _ = sample_bs(trial_rng(0, 0), 1.0, 10.0)
    wx, wy = window_polygon(10.0)
    areas = _kernels.all_cell_areas(x, y, 10.0, wx, wy)
    window = shapely.Polygon(np.column_stack([wx, wy]))
    cells = shapely.voronoi_polygons(shapely.MultiPoint(np.column_stack([x, y])), ordered=True)
    ref = np.array([g.intersection(window).area for g in cells.geoms])
    assert np.allclose(areas, ref, rtol=1e-9, atol=1e-12)
    assert areas.sum() == pytest.approx(window.area, rel=1e-12)


def test_trial_order_independence():
    p = NetworkParams(1.0, 1.0)
    cfg = SimConfig(trials=12, seed=5, window_radius=10.0)
    full = simulate_coverage(p, Scheme.frb(2), cfg, THRESHOLDS)
    picked = simulate_coverage(p, Scheme.frb(2), cfg, THRESHOLDS, trial_indices=[9, 2, 5])
    assert np.array_equal(picked.covered, full.covered[[9, 2, 5]])


def test_coverage_monotone_in_threshold():
    run = simulate_coverage(NetworkParams(1.0, 1.0), Scheme.baseline(),
                            SimConfig(trials=200, window_radius=10.0), (0.01, 0.1, 1.0, 10.0, 100.0))
    assert np.all(run.covered[:, :-1] >= run.covered[:, 1:])


def test_scale_covariance_with_shared_seed():
    # scaling both densities by k shrinks every realization by sqrt(k)
    cfg = SimConfig(trials=300, seed=11)
    a = simulate_coverage(NetworkParams(1.0, 2.0), Scheme.frb(2), cfg, THRESHOLDS)
    b = simulate_coverage(NetworkParams(10.0, 20.0), Scheme.frb(2), cfg, THRESHOLDS)
    assert np.mean(a.covered != b.covered) < 0.01


@pytest.mark.parametrize("scheme", [Scheme.baseline(), Scheme.frb(2), Scheme.fru(2)])
def test_fast_engine_matches_explicit_ues(scheme):
    p = NetworkParams(1.0, 1.0)
    cfg = SimConfig(trials=1500, seed=2, window_radius=8.0)
    fast = estimate_coverage(p, scheme, cfg, THRESHOLDS)
    slow = explicit_coverage(p, scheme, cfg, THRESHOLDS)
    for (t, a), (_, b) in zip(fast, slow):
        assert agree(a, b), (scheme, t, a, b)


def test_full_load_frb_matches_thinned_ppp():
    p = NetworkParams(1.0, 50.0)
    s = Scheme.frb(4)
    for t, est in estimate_coverage(p, s, SimConfig(trials=4000, seed=4), THRESHOLDS):
        ref = coverage_independent_thinning(p, s, t)
        assert abs(est.mean - ref) <= 1.5 * est.half_width_95 + 1e-3, (t, est, ref)


def test_sparse_users_give_infinite_sir():
    # about 0.13 other UEs expected in the window
    p = NetworkParams(1.0, 1e-4)
    run = simulate_coverage(p, Scheme.baseline(), SimConfig(trials=50, window_radius=20.0), THRESHOLDS)
    assert run.infinite_sir > 35
    assert run.covered[:, -1].sum() >= run.infinite_sir
    cfg = SimConfig(trials=1, window_radius=20.0)
    real = sample_realization(p, cfg, 0)
    if real.interferers().size == 0:
        assert sir_sample(real, p, trial_rng(0, 0, 1)) == math.inf


def test_near_zero_threshold_always_covered():
    run = simulate_coverage(NetworkParams(1.0, 50.0), Scheme.baseline(), SimConfig(trials=100), (1e-9,))
    assert run.covered.all()


def test_window_sufficiency_rule():
    p = NetworkParams(1.0, 1.0)
    assert SimConfig().window_sufficient(p)
    assert not SimConfig(window_radius=1.0).window_sufficient(p)
    assert SimConfig().radius_for(NetworkParams(1.0, 0.01)) == pytest.approx(100.0)


@pytest.mark.parametrize("load", [0.25, 1.0, 4.0])
def test_occupancy_near_formula(load):
    est = estimate_occupancy(NetworkParams(1.0, 1.0), SimConfig(trials=20, seed=1), load)
    assert est.mean == pytest.approx(channel_occupancy(load, 1.0), abs=0.03)


def test_zero_load_has_no_occupancy():
    est = estimate_occupancy(NetworkParams(1.0, 1.0), SimConfig(trials=3), 0.0)
    assert est.mean == 0.0


def test_alloc_fraction_baseline():
    est = estimate_alloc_fraction(NetworkParams(1.0, 1.0), Scheme.baseline(), SimConfig(trials=3000, seed=9))
    assert est.mean == pytest.approx(channel_occupancy(1.0, 1.0), abs=0.05)


def test_estimate_interval():
    e = Estimate.from_samples(np.array([0, 1, 1, 1.0]))
    assert e.mean == 0.75 and e.n == 4
    assert e.low < e.mean < e.high
    assert e.half_width_95 == pytest.approx(1.96 * 0.5 / 2)


@pytest.mark.parametrize("bad", [(), (1.0, 0.5), (-1.0,), (math.inf,), (1.0, 1.0)])
def test_threshold_validation(bad):
    with pytest.raises(ValueError):
        simulate_coverage(NetworkParams(1.0, 1.0), Scheme.baseline(), SimConfig(trials=1), bad)


@settings(max_examples=15)
@given(seed=st.integers(0, 2**32 - 1), trial=st.integers(0, 2**20))
def test_kernel_decisions_are_exact(seed, trial):
    # lazy resolution must match evaluating every interferer and every cell area
    p = NetworkParams(1.0, 1.0)
    radius = 12.0
    rng = trial_rng(seed, trial)
    x, y, r, _ = sample_bs(rng, p.lambda_b, radius)
    h = rng.standard_exponential(x.size)
    u = rng.random(x.size)
    ch = rng.integers(0, 2, x.size)
    wx, wy = window_polygon(radius)
    thr = np.array(THRESHOLDS)
    covered = np.zeros(thr.size, dtype=np.bool_)
    _kernels.coverage_trial(x, y, r, h, u, ch, True, p.lambda_u, p.alpha, thr, radius, wx, wy,
                            covered, np.zeros(2, dtype=np.int64))
    areas = _kernels.all_cell_areas(x, y, radius, wx, wy)
    active = (u >= np.exp(-p.lambda_u * areas)) & (ch == ch[0])
    active[0] = False
    g = h * r ** (-p.alpha)
    interference = g[active].sum()
    assert np.array_equal(covered, g[0] >= thr * interference)


def test_reliability_reference_for_baseline_full_load():
    # sanity link between the analytic and simulated stacks at one point
    p = NetworkParams(1.0, 50.0)
    (_, est), = estimate_coverage(p, Scheme.baseline(), SimConfig(trials=3000, seed=8), (1.0,))
    assert abs(est.mean - reliability(p, Scheme.baseline(), 1.0).exact) <= 1.5 * est.half_width_95
