import math

import numpy as np
import pytest

from qndsim import (
    KB,
    DegenerateSeriesError,
    GaussianQuadState,
    InsufficientDataError,
    MeterSpec,
    OscillatorParams,
    ParameterError,
    SampleSeries,
    backaction_sigma,
    energy_histogram,
    estimate_t1,
    gof_boltzmann,
    heating_slope,
    run_schedule,
)

M = 1e-3
W1 = 1e4
THERMAL_SD = math.sqrt(6.903245e-30)  # sqrt(kB*0.05/(M*W1^2))


def thermal_series(n, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    return SampleSeries(rng.normal(0.0, scale * THERMAL_SD, size=n), "x1")


# --- effective temperature -----------------------------------------------------


def test_estimate_t1_recovers_bath_temperature(params):
    fit = estimate_t1(thermal_series(100000, seed=42), params)
    assert abs(fit.t1_hat - 0.05) <= 3 * fit.stderr
    assert math.isclose(fit.stderr, fit.t1_hat * math.sqrt(2.0 / (fit.n - 1)), rel_tol=1e-12)


def test_estimate_t1_consistency_over_n(params):
    # stderr shrinks and the estimate stays inside its 3-sigma band
    previous = None
    for n in (1000, 10000, 100000):
        fit = estimate_t1(thermal_series(n, seed=n), params)
        assert abs(fit.t1_hat - 0.05) <= 3 * fit.stderr
        if previous is not None:
            assert fit.stderr < previous
        previous = fit.stderr


def test_estimate_t1_quadratic_scaling(params):
    series = thermal_series(500, seed=7)
    doubled = SampleSeries(2.0 * series.values, "x1")
    assert estimate_t1(doubled, params).t1_hat == 4.0 * estimate_t1(series, params).t1_hat


def test_estimate_t1_sample_size_contract(params):
    rng = np.random.default_rng(0)
    estimate_t1(SampleSeries(rng.normal(size=30), "x1"), params)
    with pytest.raises(InsufficientDataError):
        estimate_t1(SampleSeries(rng.normal(size=29), "x1"), params)


def test_estimate_t1_degenerate(params):
    with pytest.raises(DegenerateSeriesError):
        estimate_t1(SampleSeries(np.full(50, 1e-15), "x1"), params)


# --- goodness of fit -------------------------------------------------------------


def test_gof_accepts_thermal_data(params):
    report = gof_boltzmann(thermal_series(2000, seed=11), params)
    assert report.p_value > 0.01
    assert report.method == "ks-lilliefors-mc"
    assert report.n_mc == 2000


def test_gof_deterministic(params):
    series = thermal_series(500, seed=3)
    a = gof_boltzmann(series, params)
    b = gof_boltzmann(series, params)
    assert a == b


def test_gof_calibration_smoke(params):
    # under H0 the rejection rate at 5% stays near 5% (tight check in acceptance)
    rng = np.random.default_rng(99)
    n, replicas = 150, 400
    rejections = 0
    for _ in range(replicas):
        series = SampleSeries(rng.normal(0.0, THERMAL_SD, size=n), "x1")
        if gof_boltzmann(series, params).p_value < 0.05:
            rejections += 1
    rate = rejections / replicas
    assert 0.01 <= rate <= 0.10


def test_gof_rejects_exponential_injection(params):
    rng = np.random.default_rng(5)
    series = SampleSeries(rng.exponential(THERMAL_SD, size=10000), "x1")
    report = gof_boltzmann(series, params)
    assert report.p_value < 0.001


def test_gof_rejects_uniform_injection(params):
    rng = np.random.default_rng(6)
    series = SampleSeries(rng.uniform(-THERMAL_SD, THERMAL_SD, size=5000), "x1")
    assert gof_boltzmann(series, params).p_value < 0.001


def test_gof_contracts(params):
    rng = np.random.default_rng(8)
    with pytest.raises(InsufficientDataError):
        gof_boltzmann(SampleSeries(rng.normal(size=99), "x1"), params)
    with pytest.raises(DegenerateSeriesError):
        gof_boltzmann(SampleSeries(np.zeros(200), "x1"), params)
    with pytest.raises(ParameterError):
        gof_boltzmann(SampleSeries(rng.normal(size=200), "x1"), params, n_mc=500)


# --- back-action heating ----------------------------------------------------------


def test_heating_slope_exact_line():
    sba = 5.272859085e-18
    trace = 6.9e-30 + sba**2 * np.arange(1, 26)
    slope, rel_err = heating_slope(trace, sba)
    assert math.isclose(slope, sba**2, rel_tol=1e-9)
    assert rel_err <= 1e-9


def test_heating_slope_constant_sequence():
    slope, _ = heating_slope(np.full(10, 4.2e-30), 1e-18)
    assert abs(slope) <= 1e-12 * 4.2e-30


def test_heating_slope_needs_five_points():
    with pytest.raises(InsufficientDataError):
        heating_slope(np.ones(4), 1e-18)


def test_heating_slope_simulated_schedule(rng):
    params = OscillatorParams(M, W1, 1e12, 1e-12)
    meter = MeterSpec("qnd_x1", 1e-18)
    sba = backaction_sigma(meter, params)
    n_traj, n_meas = 100, 30
    trace = np.zeros(n_meas)
    for _ in range(n_traj):
        state = GaussianQuadState(0.0, 0.0, 6.903245e-30, 6.903245e-30, 0.0)
        records, _ = run_schedule(state, meter, "orthodox", params, 1e-2, n_meas, rng)
        trace += [r.post_v22 for r in records]
    _, rel_err = heating_slope(trace / n_traj, sba)
    assert rel_err <= 0.1


# --- energy histogram ---------------------------------------------------------------


def test_histogram_counts_and_shape(params):
    series = thermal_series(5000, seed=21)
    hist = energy_histogram(series, params, 12)
    assert hist.counts.sum() == 5000
    assert len(hist.bin_edges) == 13
    assert np.all(hist.counts >= 0)
    assert np.all(np.diff(hist.model_density) < 0)  # Gamma(1/2) tail is monotone
    assert np.all(np.isfinite(hist.model_density))


def test_histogram_model_matches_gamma_half(params):
    series = thermal_series(20000, seed=22)
    hist = energy_histogram(series, params, 10)
    theta = KB * hist.t1_hat
    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    expected = np.exp(-centers / theta) / np.sqrt(math.pi * theta * centers)
    assert np.allclose(hist.model_density, expected, rtol=1e-12)
    # observed counts track the integrated Gamma(1/2, theta) mass per bin
    cdf = [math.erf(math.sqrt(max(e, 0.0) / theta)) for e in hist.bin_edges]
    predicted = len(series) * np.diff(cdf)
    observed = hist.counts.astype(float)
    for k in range(len(observed)):
        assert abs(observed[k] - predicted[k]) <= 6 * math.sqrt(max(predicted[k], 1.0)) + 3.0


def test_histogram_empty_bins_allowed(params):
    values = np.concatenate([np.full(50, 1e-16), np.full(50, 1e-15), [3e-15]])
    series = SampleSeries(values, "x1")
    hist = energy_histogram(series, params, 40)
    assert hist.counts.sum() == len(values)
    assert (hist.counts == 0).any()


def test_histogram_bin_contract(params):
    with pytest.raises(ParameterError):
        energy_histogram(thermal_series(200, seed=1), params, 4)


# --- series validation ----------------------------------------------------------------


def test_series_validation():
    with pytest.raises(ParameterError):
        SampleSeries(np.array([1.0, math.nan]), "x1")
    with pytest.raises(ParameterError):
        SampleSeries(np.ones((2, 2)), "x1")
    with pytest.raises(ParameterError):
        SampleSeries(np.ones(3), "x3")
