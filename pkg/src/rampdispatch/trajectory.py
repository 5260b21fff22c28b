"""Optimal continuous dispatch over one scheduling interval.

Units throughout: MW, MWh, hours, dollars.  Prices are the marginal
prices of energy ``a`` ($/MW^2 h), power ``b`` ($/MW^2) and ramping
``c`` ($ h/MW^2).  The optimal trajectory solves

    c Q'' - a Q = mu / 2,   Q(0) = Q0,  Q(T) = QT,  int_0^T Q dt = E_T,

and ``b`` only enters the cost.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels as K
from .errors import DegeneratePrices, InvalidInput, OutOfDomain, SingularSystem

PRICE_EPS = K.PRICE_EPS
OMEGA_T_MAX = K.OMEGA_T_MAX


class Regime(enum.Enum):
    GENERAL = K.GENERAL
    RAMP_ONLY = K.RAMP_ONLY
    ENERGY_ONLY = K.ENERGY_ONLY


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInput(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PriceSet:
    """Marginal prices for one hour plus the must-take generation level."""

    a: float
    b: float
    c: float
    qz: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "qz"):
            value = _finite(name, getattr(self, name))
            if value < 0.0:
                raise InvalidInput(f"{name} must be non-negative, got {value}")
            object.__setattr__(self, name, value)
        if self.a <= PRICE_EPS and self.c <= PRICE_EPS:
            raise DegeneratePrices("energy and ramping prices are both zero")

    def scaled(self, a=1.0, b=1.0, c=1.0):
        return PriceSet(self.a * a, self.b * b, self.c * c, self.qz)


@dataclass(frozen=True)
class HourSchedule:
    """Boundary powers (MW), scheduled energy (MWh) and horizon (h)."""

    q0: float
    qt: float
    energy: float
    horizon: float = 1.0

    def __post_init__(self):
        for name in ("q0", "qt", "energy", "horizon"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.horizon <= 0.0:
            raise InvalidInput(f"horizon must be positive, got {self.horizon}")
        if self.q0 < 0.0 or self.qt < 0.0:
            raise InvalidInput("boundary powers must be non-negative")
        if self.energy < 0.0:
            raise InvalidInput(f"energy must be non-negative, got {self.energy}")


@dataclass(frozen=True)
class ParameterSystem:
    """``[[A, B], [C, D]] @ [mu, qdot0] = [e_delta, q_delta]``."""

    A: float
    B: float
    C: float
    D: float
    e_delta: float
    q_delta: float

    @property
    def det(self):
        return self.A * self.D - self.B * self.C

    def solve(self):
        det = self.det
        if abs(det) <= K.DET_RTOL * (abs(self.A * self.D) + abs(self.B * self.C)):
            raise SingularSystem(f"parameter system determinant {det:g} is singular")
        mu = (self.e_delta * self.D - self.B * self.q_delta) / det
        qdot0 = (self.A * self.q_delta - self.C * self.e_delta) / det
        return mu, qdot0


@dataclass(frozen=True)
class TrajectoryParams:
    regime: Regime
    mu: float
    lam: float
    qdot0: float
    omega: float
    schedule: HourSchedule
    prices: PriceSet
    state: np.ndarray = field(repr=False, compare=False)

    @property
    def horizon(self):
        return self.schedule.horizon

    @property
    def turning_time(self):
        """Interior time where the ramp changes sign, or None."""
        tc = K.turning_time(self.state)
        return None if math.isnan(tc) else float(tc)


def classify_regime(prices: PriceSet, horizon: float = 1.0) -> Regime:
    code = K.classify(prices.a, prices.c, float(horizon))
    if code == K.DEGENERATE:
        raise DegeneratePrices("energy and ramping prices are both zero")
    return Regime(code)


def omega_of(prices: PriceSet) -> float:
    """sqrt(a/c) in 1/h; 0 without an energy price, inf without a ramping price."""
    if prices.c <= PRICE_EPS:
        return math.inf
    if prices.a <= PRICE_EPS:
        return 0.0
    return math.sqrt(prices.a / prices.c)


def build_parameter_system(prices: PriceSet, sched: HourSchedule,
                           regime: Regime) -> ParameterSystem:
    if regime is Regime.GENERAL:
        omega = omega_of(prices)
    elif regime is Regime.RAMP_ONLY:
        omega = 0.0
    else:
        raise InvalidInput("the energy-only regime has no parameter system")
    entries = K.parameter_entries(omega, prices.c, sched.horizon, sched.q0, sched.qt, sched.energy)
    return ParameterSystem(*(float(v) for v in entries))


def solve_hour(prices: PriceSet, sched: HourSchedule) -> TrajectoryParams:
    """Solve for the optimal trajectory of one hour.

    For ``omega T`` above ``EXP_SWITCH`` the multipliers are recovered from
    the end-anchored exponential coefficients instead of the 2x2 system,
    whose rows become equal to working precision once ``cosh(omega T)``
    dominates.
    """
    state = K.solve_state(prices.a, prices.c, sched.horizon, sched.q0, sched.qt, sched.energy)
    code = int(state[K.S_REGIME])
    if code == K.DEGENERATE:
        raise DegeneratePrices("energy and ramping prices are both zero")
    if code == K.SINGULAR:
        raise SingularSystem("parameter system is singular")
    mu = float(state[K.S_MU])
    return TrajectoryParams(
        regime=Regime(code),
        mu=mu,
        lam=mu + prices.a * prices.qz,
        qdot0=float(state[K.S_QDOT0]),
        omega=omega_of(prices),
        schedule=sched,
        prices=prices,
        state=state,
    )


def _times(params, t):
    T = params.horizon
    arr = np.asarray(t, dtype=float)
    slack = 1e-12 * T
    if np.any(arr < -slack) or np.any(arr > T + slack) or np.any(np.isnan(arr)):
        raise OutOfDomain(f"time outside [0, {T}]")
    return np.clip(arr, 0.0, T)


def _apply(params, t, scalar_kernel, array_kernel):
    arr = _times(params, t)
    if arr.ndim == 0:
        return float(scalar_kernel(params.state, float(arr)))
    flat = np.ascontiguousarray(arr.ravel())
    return array_kernel(params.state, flat).reshape(arr.shape)


def eval_power(params: TrajectoryParams, t):
    """Dispatch Q(t) in MW; accepts a scalar or an array of times."""
    return _apply(params, t, K.power_at, K.power_many)


def eval_ramp(params: TrajectoryParams, t):
    """Ramp dQ/dt in MW/h.  Zero inside the hour for the energy-only step."""
    return _apply(params, t, K.ramp_at, K.ramp_many)


def eval_energy(params: TrajectoryParams, t):
    """Energy delivered on [0, t] in MWh."""
    return _apply(params, t, K.energy_at, K.energy_many)
