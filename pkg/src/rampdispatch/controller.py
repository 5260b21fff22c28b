"""Discrete-time realisation of the optimal trajectory.

The dispatch target is updated every ``t_s`` seconds and power moves
linearly between consecutive targets (zero-order-hold ramp).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels as K
from .errors import BadStep, WrongRegime
from .trajectory import Regime, TrajectoryParams

SECONDS_PER_HOUR = 3600.0


class Mode(enum.Enum):
    SAMPLED = "sampled"
    ENERGY_CORRECTED = "energy_corrected"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"corrected": "energy_corrected", "energycorrected": "energy_corrected"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class ControllerCoefficients:
    """Partial-fraction gains: ``Q*(k) = K1 tau^-k + K2 + K3 tau^k``."""

    k1: float
    k2: float
    k3: float
    tau: float
    t_s: float


@dataclass(frozen=True)
class DiscreteTrajectory:
    samples: np.ndarray
    t_s: float
    mode: Mode
    horizon: float

    @property
    def steps(self) -> int:
        return len(self.samples) - 1

    @property
    def step_hours(self) -> float:
        return self.t_s / SECONDS_PER_HOUR

    @property
    def times(self) -> np.ndarray:
        t = np.arange(len(self.samples)) * self.step_hours
        t[-1] = self.horizon
        return t

    def energy(self) -> float:
        """Energy of the linear-between-samples dispatch, MWh."""
        return float(K.trapezoid_energy(self.samples, self.step_hours))


def step_count(horizon: float, t_s: float) -> int:
    """Number of update intervals; ``t_s`` (seconds) must divide the horizon."""
    if not (t_s > 0.0 and math.isfinite(t_s)):
        raise BadStep(f"update interval must be positive, got {t_s!r}")
    n = horizon * SECONDS_PER_HOUR / t_s
    steps = round(n)
    if steps < 1 or abs(n - steps) > 1e-9 * max(1.0, n):
        raise BadStep(f"update interval {t_s} s does not divide the {horizon} h horizon")
    return int(steps)


def make_coefficients(params: TrajectoryParams, t_s: float) -> ControllerCoefficients:
    if params.regime is not Regime.GENERAL:
        raise WrongRegime(f"controller gains need the general regime, got {params.regime.name}")
    step_count(params.horizon, t_s)
    s = params.state
    w = params.omega
    if s[K.S_FORM] == K.FORM_EXP:
        k1 = float(s[K.S_K1])
        k2 = float(s[K.S_K2])
        k3 = float(s[K.S_K3E]) * math.exp(-w * params.horizon)
    else:
        q0 = params.schedule.q0
        k2 = -params.mu / (2.0 * params.prices.a)
        k1 = 0.5 * q0 - params.qdot0 / (2.0 * w) - 0.5 * k2
        k3 = 0.5 * q0 + params.qdot0 / (2.0 * w) - 0.5 * k2
    return ControllerCoefficients(k1, k2, k3, math.exp(w * t_s / SECONDS_PER_HOUR), float(t_s))


def sample_dispatch(params: TrajectoryParams, t_s: float = 300.0,
                    mode=Mode.SAMPLED) -> DiscreteTrajectory:
    """Targets ``Q*(k)`` for ``k = 0..N``.

    In energy-corrected mode the interior targets are shifted so that the
    linear-hold dispatch tracks the continuous energy increments: each
    interior target absorbs the mean energy shortfall of its two adjacent
    intervals, then a common shift closes the total exactly.  The first and
    last targets are never moved.
    """
    mode = Mode.parse(mode)
    n = step_count(params.horizon, t_s)
    ts_h = t_s / SECONDS_PER_HOUR
    q = K.sample_state(params.state, n, ts_h)
    if mode is Mode.ENERGY_CORRECTED:
        if n < 2:
            raise BadStep("energy correction needs at least one interior target")
        q = K.correct_energy(q, params.state, ts_h)
    return DiscreteTrajectory(np.asarray(q, dtype=float), float(t_s), mode, params.horizon)
