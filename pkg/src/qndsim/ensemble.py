"""Deterministic ensemble execution and aggregation.

Stream derivation is counter-based: trajectory i of a run with master seed s
draws from Philox keyed by the pair (s, i).  The key alone identifies the
stream; nothing is spawned or shared, so any worker may own any trajectory
and the statistics cannot depend on scheduling.  Reduction is likewise
canonical: trajectories are grouped into fixed-size chunks, chunk partials
are folded in chunk order whatever the worker count, and the record CSV is
concatenated in trajectory-index order.  Identical config implies
byte-identical outputs.

Trajectories start at thermal stationarity in realization form: the thermal
spread of the ensemble is carried by the sampled means, N(0, V_inf - V_floor)
per quadrature, while the conditional covariance starts at the bath floor
(zero for a classical bath, the zero-point variance for a quantum one).  The
ensemble marginal is then exactly the stationary law, and conditioning can
only move uncertainty between the covariance and the mean spread without
inflating the marginal.
"""

from __future__ import annotations

import json
import time as _time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat

import numpy as np

from .budget import BudgetInputs, eta1 as _eta1, eta2 as _eta2
from .config import CONFIG_KEYS, RunConfig
from .dynamics import GaussianQuadState, stationary_variance, thermal_step, zero_point_variance
from .errors import DegenerateSeriesError, InsufficientDataError
from .measurement import backaction_sigma, measure
from .stats import SampleSeries, estimate_t1, gof_boltzmann, heating_slope

#: Exact header of the per-measurement record CSV.
RECORD_CSV_HEADER = "traj_id,step,time_s,outcome_m,mean_x1_m,mean_x2_m,var_x1_m2,var_x2_m2"

#: Fixed chunk size; the reduction order is defined by these boundaries,
#: never by the worker count.
CHUNK_SIZE = 128

# Electrical readout mode used for the summary's eta2 figure; the run config
# deliberately has no electrical fields.
ELECTRICAL_OMEGA2 = 1e8  # rad/s
ELECTRICAL_TAU2 = 1.0  # s


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based per-trajectory stream keyed by (master seed, index)."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


@dataclass
class _ChunkResult:
    x1: list[float]
    x2: list[float]
    v22_sum: np.ndarray
    rows: list[str] | None


def _run_chunk(config: RunConfig, start: int, stop: int, collect_rows: bool) -> _ChunkResult:
    """Simulate trajectories [start, stop); called in-process or in a worker."""
    params = config.oscillator()
    meter = config.meter()
    policy = config.policy()
    vinf = stationary_variance(params)
    floor = 0.0 if config.bath_model == "classical" else zero_point_variance(params)
    mean_sd = float(np.sqrt(max(vinf - floor, 0.0)))

    x1s: list[float] = []
    x2s: list[float] = []
    v22_sum = np.zeros(config.n_meas)
    rows: list[str] | None = [] if collect_rows else None

    for index in range(start, stop):
        rng = trajectory_rng(config.seed, index)
        state = GaussianQuadState(
            mean1=rng.normal(0.0, mean_sd),
            mean2=rng.normal(0.0, mean_sd),
            v11=floor,
            v22=floor,
            v12=0.0,
            time=0.0,
        )
        if config.burn_in_s > 0.0:
            state = thermal_step(state, config.burn_in_s, params, rng)
        # same operation order as measurement.run_schedule, with post-measure
        # means captured for the record rows
        for step in range(config.n_meas):
            state = thermal_step(state, config.dt_s, params, rng)
            outcome, state, record = measure(state, meter, policy, params, rng)
            v22_sum[step] += record.post_v22
            if rows is not None:
                rows.append(
                    f"{index},{step + 1},{state.time:.17g},{outcome:.17g},"
                    f"{state.mean1:.17g},{state.mean2:.17g},{state.v11:.17g},{state.v22:.17g}"
                )
        x1s.append(state.mean1)
        x2s.append(state.mean2)
    return _ChunkResult(x1=x1s, x2=x2s, v22_sum=v22_sum, rows=rows)


@dataclass(eq=False)
class RunSummary:
    """Aggregated result of one ensemble run.

    The serialized form holds the config echo and the derived statistics;
    wall_time_s and the raw series are in-memory extras (timing would break
    byte-identical outputs).
    """

    config: RunConfig
    t1_hat_K: float | None
    t1_stderr_K: float | None
    gof_p_value: float | None
    v22_slope_m2: float | None
    eta1: float
    eta2: float
    wall_time_s: float
    records_csv: str
    series_x1: np.ndarray = field(repr=False, default=None)
    series_x2: np.ndarray = field(repr=False, default=None)
    v22_trace: np.ndarray = field(repr=False, default=None)

    def to_dict(self, include_wall_time: bool = False) -> dict:
        out = {key: getattr(self.config, key) for key in CONFIG_KEYS}
        out["t1_hat_K"] = self.t1_hat_K
        out["t1_stderr_K"] = self.t1_stderr_K
        out["gof_p_value"] = self.gof_p_value
        out["v22_slope_m2"] = self.v22_slope_m2
        out["eta1"] = self.eta1
        out["eta2"] = self.eta2
        if include_wall_time:
            out["wall_time_s"] = self.wall_time_s
        out["records_csv"] = self.records_csv
        return out

    def to_json(self, include_wall_time: bool = False) -> str:
        return json.dumps(self.to_dict(include_wall_time=include_wall_time))


def ensemble_stats(x1_values, v22_trace, config: RunConfig):
    """(t1_hat, t1_stderr, gof_p, v22_slope) for an ensemble; None where the
    run is too small for the corresponding inference."""
    t1_hat = t1_stderr = gof_p = slope = None
    series = SampleSeries(np.asarray(x1_values, dtype=np.float64), "x1")
    params = config.oscillator()
    try:
        fit = estimate_t1(series, params)
        t1_hat, t1_stderr = fit.t1_hat, fit.stderr
    except (InsufficientDataError, DegenerateSeriesError):
        pass
    try:
        gof_p = gof_boltzmann(series, params).p_value
    except (InsufficientDataError, DegenerateSeriesError):
        pass
    try:
        sba = backaction_sigma(config.meter(), params)
        slope = heating_slope(np.asarray(v22_trace), sba)[0]
    except InsufficientDataError:
        pass
    return t1_hat, t1_stderr, gof_p, slope


def run_ensemble(
    config: RunConfig,
    workers: int = 1,
    record_path: str | None = None,
    traj_start: int = 0,
) -> RunSummary:
    """Run the configured ensemble and aggregate in trajectory-index order.

    ``traj_start`` offsets the global trajectory indices (hence the RNG
    streams), so a run over [0, a+b) equals the merge of runs over [0, a)
    and [a, a+b) with the same master seed.
    """
    started = _time.perf_counter()
    collect_rows = record_path is not None
    bounds = [
        (lo, min(lo + CHUNK_SIZE, traj_start + config.n_traj))
        for lo in range(traj_start, traj_start + config.n_traj, CHUNK_SIZE)
    ]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(
                pool.map(
                    _run_chunk,
                    repeat(config),
                    (lo for lo, _ in bounds),
                    (hi for _, hi in bounds),
                    repeat(collect_rows),
                )
            )
    else:
        partials = [_run_chunk(config, lo, hi, collect_rows) for lo, hi in bounds]

    x1s: list[float] = []
    x2s: list[float] = []
    v22_total = np.zeros(config.n_meas)
    for part in partials:  # canonical fold: fixed chunk order
        x1s.extend(part.x1)
        x2s.extend(part.x2)
        v22_total += part.v22_sum
    v22_trace = v22_total / config.n_traj

    if record_path is not None:
        with open(record_path, "w", encoding="utf-8") as handle:
            handle.write(RECORD_CSV_HEADER + "\n")
            for part in partials:
                for row in part.rows:
                    handle.write(row + "\n")

    t1_hat, t1_stderr, gof_p, slope = ensemble_stats(x1s, v22_trace, config)
    budget_point = BudgetInputs(
        temperature=config.temperature_K,
        omega1=config.omega1_rad_s,
        tau1=config.tau1_s,
        omega2=ELECTRICAL_OMEGA2,
        tau2=ELECTRICAL_TAU2,
        dt=config.dt_s,
        amplifier_quanta=1.0,
        mass=config.mass_kg,
    )
    return RunSummary(
        config=config,
        t1_hat_K=t1_hat,
        t1_stderr_K=t1_stderr,
        gof_p_value=gof_p,
        v22_slope_m2=slope,
        eta1=_eta1(budget_point),
        eta2=_eta2(budget_point),
        wall_time_s=_time.perf_counter() - started,
        records_csv=record_path or "",
        series_x1=np.asarray(x1s),
        series_x2=np.asarray(x2s),
        v22_trace=v22_trace,
    )
