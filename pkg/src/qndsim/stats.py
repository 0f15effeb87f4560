"""Detector statistics for the monitored quadrature.

``estimate_t1`` maps the sample variance of an X1 ensemble to an effective
temperature through equipartition, m w1^2 Var[X1] = kB T1, with the standard
error from the chi-squared sampling law of the variance.

``gof_boltzmann`` tests the thermal law.  The tested density is proportional
to exp(-m w1^2 X1^2 / 2 kB T1) PER UNIT X1, i.e. a zero-mean Gaussian in X1;
over the energy E1 = m w1^2 X1^2 / 2 the same law is Gamma(1/2, kB T1), so
fitting a plain exponential to E1 values would wrongly reject the true model.
The test statistic is the Kolmogorov-Smirnov distance between the empirical
CDF and N(0, sigma_hat^2) with sigma_hat estimated from the same sample, and
the p-value comes from Monte Carlo recalibration in the style of Lilliefors:
replicas are drawn from the fitted null, the scale re-estimated per replica,
and the observed distance ranked in the replica table.  The statistic is
scale-pivotal (D(c x) = D(x)), so one table per (n, n_mc) serves every
series; tables are seeded deterministically and cached.

``heating_slope`` quantifies back-action on the demolished quadrature as the
least-squares growth rate of v22 versus measurement count, compared with the
per-measurement injection sigma_ba^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .constants import KB
from .errors import DegenerateSeriesError, InsufficientDataError, ParameterError
from .observables import OscillatorParams

SERIES_LABELS = ("x1", "x2")

#: Stream key for the deterministic calibration tables ("ks_lilli" in hex).
_TABLE_STREAM_KEY = 0x6B735F6C696C6C69

_null_tables: dict[tuple[int, int], np.ndarray] = {}


@dataclass(frozen=True)
class SampleSeries:
    """Ensemble of quadrature samples (meters) at a fixed protocol point."""

    values: np.ndarray
    label: str

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ParameterError("sample series must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ParameterError("sample series must be finite")
        if self.label not in SERIES_LABELS:
            raise ParameterError(f"unknown series label {self.label!r}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class BoltzmannFit:
    """Effective temperature of one quadrature, with its standard error."""

    t1_hat: float  # K
    stderr: float  # K
    n: int


@dataclass(frozen=True)
class GofReport:
    """Goodness-of-fit result: KS distance, calibrated p-value, method tag."""

    statistic: float
    p_value: float
    method: str
    n_mc: int


@dataclass(frozen=True)
class EnergyHistogram:
    """Histogram of single-quadrature energies with the fitted model density."""

    bin_edges: np.ndarray  # J, length n_bins + 1
    counts: np.ndarray
    model_density: np.ndarray  # 1/J, at bin centers
    t1_hat: float  # K


def _usable_variance(values: np.ndarray) -> float:
    """Sample variance, rejecting series that are constant to rounding."""
    variance = float(np.var(values, ddof=1))
    scale = float(np.max(np.abs(values)))
    if variance <= (1e-15 * scale) ** 2:
        raise DegenerateSeriesError("series carries no resolvable variation")
    return variance


def estimate_t1(series: SampleSeries, params: OscillatorParams) -> BoltzmannFit:
    """Effective temperature from equipartition of a zero-mean ensemble."""
    n = len(series)
    if n < 30:
        raise InsufficientDataError(f"need >= 30 samples to estimate T1, got {n}")
    variance = _usable_variance(series.values)
    t1 = params.mass * params.omega1**2 * variance / KB
    return BoltzmannFit(t1_hat=t1, stderr=t1 * math.sqrt(2.0 / (n - 1)), n=n)


def _ks_rows(sorted_rows: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    """KS distance of each row (pre-sorted) against N(0, sigma^2)."""
    n = sorted_rows.shape[1]
    lo = np.arange(n) / n
    hi = np.arange(1, n + 1) / n
    cdf = ndtr(sorted_rows / sigmas[:, None])
    return np.maximum(cdf - lo, hi - cdf).max(axis=1)


def _calibration_table(n: int, n_mc: int) -> np.ndarray:
    """Null distances for sample size n, scale refit per replica; cached."""
    key = (n, n_mc)
    table = _null_tables.get(key)
    if table is None:
        rng = np.random.Generator(
            np.random.Philox(key=np.array([_TABLE_STREAM_KEY, (n << 21) ^ n_mc], dtype=np.uint64))
        )
        table = np.empty(n_mc)
        block = max(1, 2_000_000 // n)
        done = 0
        while done < n_mc:
            m = min(block, n_mc - done)
            z = rng.standard_normal((m, n))
            sig = np.sqrt(z.var(axis=1, ddof=1))
            z.sort(axis=1)
            table[done : done + m] = _ks_rows(z, sig)
            done += m
        _null_tables[key] = table
    return table


def gof_boltzmann(series: SampleSeries, params: OscillatorParams, n_mc: int = 2000) -> GofReport:
    """Monte-Carlo-calibrated KS test of the thermal law on an X ensemble."""
    if n_mc < 1000:
        raise ParameterError(f"calibration needs n_mc >= 1000, got {n_mc}")
    n = len(series)
    if n < 100:
        raise InsufficientDataError(f"need >= 100 samples for the fit test, got {n}")
    variance = _usable_variance(series.values)
    observed = np.sort(series.values)
    d_obs = float(_ks_rows(observed[None, :], np.array([math.sqrt(variance)]))[0])
    table = _calibration_table(n, n_mc)
    p = (1 + int(np.count_nonzero(table >= d_obs))) / (n_mc + 1)
    return GofReport(statistic=d_obs, p_value=p, method="ks-lilliefors-mc", n_mc=n_mc)


def heating_slope(var_x2_by_step, sigma_ba: float) -> tuple[float, float]:
    """Least-squares growth of v22 per measurement and its relative error
    against the ideal injection sigma_ba^2."""
    trace = np.asarray(var_x2_by_step, dtype=np.float64)
    if trace.ndim != 1 or len(trace) < 5:
        raise InsufficientDataError(f"need >= 5 variance points, got shape {trace.shape}")
    if not (sigma_ba > 0.0 and math.isfinite(sigma_ba)):
        raise ParameterError(f"sigma_ba must be finite and > 0, got {sigma_ba!r}")
    slope = float(np.polyfit(np.arange(len(trace)), trace, 1)[0])
    target = sigma_ba * sigma_ba
    return slope, abs(slope - target) / target


def energy_histogram(series: SampleSeries, params: OscillatorParams, n_bins: int) -> EnergyHistogram:
    """Histogram of E = (1/2) m w1^2 X^2 with the Gamma(1/2, kB T1) overlay."""
    if n_bins < 5:
        raise ParameterError(f"need >= 5 bins, got {n_bins}")
    fit = estimate_t1(series, params)
    energies = 0.5 * params.mass * params.omega1**2 * series.values**2
    counts, edges = np.histogram(energies, bins=n_bins)
    centers = 0.5 * (edges[:-1] + edges[1:])
    theta = KB * fit.t1_hat
    # Gamma(1/2, theta): E^{-1/2} exp(-E/theta) / (sqrt(pi theta))
    density = np.exp(-centers / theta) / np.sqrt(math.pi * theta * centers)
    return EnergyHistogram(bin_edges=edges, counts=counts, model_density=density, t1_hat=fit.t1_hat)
