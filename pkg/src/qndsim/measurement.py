"""Gaussian meter models for stroboscopic quadrature measurement.

A meter reads the projection u . (X1, X2) of the state with additive Gaussian
noise of standard deviation sigma_m.  The read direction u is fixed for the
back-action-evading kinds (qnd_x1, qnd_x2) and rotates as (cos w1 t, sin w1 t)
for a naive position meter, since x = X1 cos w1 t + X2 sin w1 t.

The outcome is drawn from the predictive law N(u . mean, u^T V u + sigma_m^2).
Under the orthodox policy the state then collapses by the Gaussian conditional
(Kalman) update, and the meter injects its Heisenberg-minimum disturbance

    sigma_ba = hbar / (2 m w1 sigma_m)

entirely along the conjugate direction u_perp: ideal evasion, the monitored
variance is never increased.  The quantum-limited choice saturates
[X1, X2] = i hbar / (m w1), so the uncertainty product V >= (hbar / 2 m w1)^2
survives every orthodox update.

The no_conditioning policy is the naive no-collapse foil used to validate the
statistical detector: outcomes are drawn from the same predictive law, but the
state never conditions on them, and the meter disturbance lands unsteered, as
an isotropic Gaussian kick of scale sigma_ba on both sampled means (on top of
the u_perp covariance term).  This is an anomaly injector, not a model of any
particular alternative theory.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR
from .dynamics import GaussianQuadState, thermal_step
from .errors import NumericalFailureError, ParameterError, StateDomainError
from .observables import OscillatorParams

METER_KINDS = ("qnd_x1", "qnd_x2", "position")

# Relative slack for the PSD test on input covariances.
_PSD_SLACK = 1e-12


class CollapsePolicy(str, enum.Enum):
    """How the state responds to a measurement outcome."""

    ORTHODOX = "orthodox"
    NO_CONDITIONING = "no_conditioning"


@dataclass(frozen=True)
class MeterSpec:
    """What is measured and how well: meter kind and readout noise sigma_m [m]."""

    kind: str
    sigma_m: float

    def __post_init__(self) -> None:
        if self.kind not in METER_KINDS:
            raise ParameterError(f"unknown meter kind {self.kind!r}; expected one of {METER_KINDS}")
        if not (isinstance(self.sigma_m, (int, float)) and math.isfinite(self.sigma_m) and self.sigma_m > 0.0):
            raise ParameterError(f"sigma_m must be finite and > 0, got {self.sigma_m!r}")


@dataclass(slots=True)
class MeasurementRecord:
    """Audit entry for one measurement: outcome plus variance bookkeeping."""

    time: float
    kind: str
    outcome: float
    pre_v11: float
    post_v11: float
    pre_v22: float
    post_v22: float


def measurement_direction(kind: str, t: float, params: OscillatorParams) -> tuple[float, float]:
    """Unit read direction in the (X1, X2) plane for a meter of this kind at time t."""
    if kind == "qnd_x1":
        return 1.0, 0.0
    if kind == "qnd_x2":
        return 0.0, 1.0
    if kind == "position":
        w1t = params.omega1 * t
        return math.cos(w1t), math.sin(w1t)
    raise ParameterError(f"unknown meter kind {kind!r}")


def backaction_sigma(meter: MeterSpec, params: OscillatorParams) -> float:
    """Heisenberg-minimum conjugate disturbance hbar / (2 m w1 sigma_m), in m."""
    return HBAR / (2.0 * params.mass * params.omega1 * meter.sigma_m)


def _require_psd(state: GaussianQuadState) -> None:
    det = state.v11 * state.v22 - state.v12 * state.v12
    scale = max(state.v11, state.v22, 0.0)
    if state.v11 < 0.0 or state.v22 < 0.0 or det < -_PSD_SLACK * scale * scale:
        raise StateDomainError(
            f"covariance not PSD: v11={state.v11!r} v22={state.v22!r} v12={state.v12!r}"
        )


def measure(
    state: GaussianQuadState,
    meter: MeterSpec,
    policy: CollapsePolicy | str,
    params: OscillatorParams,
    rng: np.random.Generator,
) -> tuple[float, GaussianQuadState, MeasurementRecord]:
    """Draw one outcome and return (outcome, updated state, record).

    The clock does not advance: measurements are instantaneous events between
    thermal steps.
    """
    policy = CollapsePolicy(policy)
    _require_psd(state)

    u1, u2 = measurement_direction(meter.kind, state.time, params)
    mu = u1 * state.mean1 + u2 * state.mean2
    vu1 = state.v11 * u1 + state.v12 * u2
    vu2 = state.v12 * u1 + state.v22 * u2
    var_pred = u1 * vu1 + u2 * vu2
    sigma_y2 = var_pred + meter.sigma_m * meter.sigma_m
    outcome = rng.normal(mu, math.sqrt(sigma_y2))

    sba = backaction_sigma(meter, params)
    sba2 = sba * sba
    if not math.isfinite(sba2):
        raise NumericalFailureError(f"meter disturbance overflow at sigma_m={meter.sigma_m!r}")

    # conjugate direction receives the covariance back-action term
    p1, p2 = -u2, u1
    if policy is CollapsePolicy.ORTHODOX:
        k1 = vu1 / sigma_y2
        k2 = vu2 / sigma_y2
        innov = outcome - mu
        mean1 = state.mean1 + k1 * innov
        mean2 = state.mean2 + k2 * innov
        # cancellation-free form of V - (Vu)(Vu)^T / sigma_y2: the posterior is
        # (sigma_m^2 V + det(V) u_perp u_perp^T) / sigma_y2, manifestly PSD
        det = state.v11 * state.v22 - state.v12 * state.v12
        s2 = meter.sigma_m * meter.sigma_m
        v11 = (s2 * state.v11 + det * u2 * u2) / sigma_y2 + sba2 * p1 * p1
        v22 = (s2 * state.v22 + det * u1 * u1) / sigma_y2 + sba2 * p2 * p2
        v12 = (s2 * state.v12 - det * u1 * u2) / sigma_y2 + sba2 * p1 * p2
    else:
        # no collapse: unsteered meter disturbance kicks the sampled means
        mean1 = state.mean1 + rng.normal(0.0, sba)
        mean2 = state.mean2 + rng.normal(0.0, sba)
        v11 = state.v11 + sba2 * p1 * p1
        v22 = state.v22 + sba2 * p2 * p2
        v12 = state.v12 + sba2 * p1 * p2

    if not (math.isfinite(mean1) and math.isfinite(mean2) and math.isfinite(v11) and math.isfinite(v22)):
        raise NumericalFailureError("measurement update produced non-finite state")

    new_state = GaussianQuadState(mean1=mean1, mean2=mean2, v11=v11, v22=v22, v12=v12, time=state.time)
    record = MeasurementRecord(
        time=state.time,
        kind=meter.kind,
        outcome=outcome,
        pre_v11=state.v11,
        post_v11=v11,
        pre_v22=state.v22,
        post_v22=v22,
    )
    return outcome, new_state, record


def run_schedule(
    initial: GaussianQuadState,
    meter: MeterSpec,
    policy: CollapsePolicy | str,
    params: OscillatorParams,
    dt: float,
    n_meas: int,
    rng: np.random.Generator,
) -> tuple[list[MeasurementRecord], GaussianQuadState]:
    """Alternate thermal_step(dt) and measure, n_meas times."""
    if n_meas < 1:
        raise ParameterError(f"schedule requires n_meas >= 1, got {n_meas!r}")
    if not (dt > 0.0):
        raise ParameterError(f"schedule requires dt > 0, got {dt!r}")
    records: list[MeasurementRecord] = []
    state = initial
    for _ in range(n_meas):
        state = thermal_step(state, dt, params, rng)
        _, state, record = measure(state, meter, policy, params, rng)
        records.append(record)
    return records, state
