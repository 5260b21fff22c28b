"""Cost of a dispatch trajectory.

The running cost integrated over the hour is

    a (Q - Qz) Q  +  b (Q - Qz) |Q'|  +  c Q'^2      [$ / h]

split into energy (a), power (b) and ramping (c) components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import kernels as K
from .controller import DiscreteTrajectory
from .errors import EmptyTrajectory
from .trajectory import PriceSet, HourSchedule, TrajectoryParams


@dataclass(frozen=True)
class CostBreakdown:
    energy_cost: float
    power_cost: float
    ramping_cost: float
    total: float
    sign_split_at: Optional[float] = None

    @classmethod
    def from_parts(cls, energy, power, ramping, split=None):
        energy, power, ramping = float(energy), float(power), float(ramping)
        if split is not None and math.isnan(split):
            split = None
        return cls(energy, power, ramping, energy + power + ramping, split)


def optimal_cost(params: TrajectoryParams) -> CostBreakdown:
    """Closed-form cost of the solved trajectory.

    When the ramp changes sign inside the hour the power term is split at
    that instant so that ``|Q'|`` is honoured on both sides.  The energy-only
    step is priced at ``a E_T (E_T/T - Qz)``.
    """
    p = params.prices
    energy, power, ramping, tc = K.cost_parts(params.state, p.a, p.b, p.c, p.qz)
    return CostBreakdown.from_parts(energy, power, ramping, tc)


def base_case_cost(prices: PriceSet, sched: HourSchedule) -> CostBreakdown:
    parts = K.base_cost_parts(prices.a, prices.b, prices.c, prices.qz,
                              sched.q0, sched.qt, sched.energy, sched.horizon)
    return CostBreakdown.from_parts(*parts)


def discrete_cost_breakdown(traj: DiscreteTrajectory, prices: PriceSet) -> CostBreakdown:
    if len(traj.samples) < 2:
        raise EmptyTrajectory("a discrete trajectory needs at least two samples")
    parts = K.discrete_cost_parts(traj.samples, traj.step_hours,
                                  prices.a, prices.b, prices.c, prices.qz)
    return CostBreakdown.from_parts(*parts)


def discrete_cost(traj: DiscreteTrajectory, prices: PriceSet) -> float:
    """Zero-order-hold-ramp cost summed over the ``N`` update intervals."""
    return discrete_cost_breakdown(traj, prices).total


def second_variation(prices: PriceSet):
    """(alpha, beta, gamma) = (2a, b, 2c), the second derivatives of the
    Lagrangian in (Q, Q'), (Q, Q') mixed and (Q', Q')."""
    return 2.0 * prices.a, prices.b, 2.0 * prices.c


def is_minimizer(prices: PriceSet) -> bool:
    alpha, _, gamma = second_variation(prices)
    return alpha > 0.0 and gamma > 0.0


def hyperbolic_cost_formula(a, b, qz, mu, qdot0, omega, q0, T):
    """Total cost of the hyperbolic trajectory written in the coefficients
    ``A = Q0 + mu/2a``, ``B = qdot0/omega``, ``C = -mu/2a``.

    The power term is taken with the signed ramp, so this equals
    :func:`optimal_cost` only when the ramp keeps one sign and is
    non-negative.  Loses precision for ``omega T`` well below 1.
    """
    A = q0 + mu / (2.0 * a)
    B = qdot0 / omega
    C = -mu / (2.0 * a)
    x = omega * T
    return (math.sinh(2.0 * x) / (2.0 * omega) * (a * (A * A + B * B) + b * A * B * omega)
            + math.sinh(x) ** 2 / (2.0 * omega) * (b * (A * A + B * B) * omega + 4.0 * a * A * B)
            + (math.cosh(x) - 1.0) / omega * ((b * A * omega + 2.0 * a * B) * C - (a * B + b * A * omega) * qz)
            + math.sinh(x) / omega * ((b * B * omega + 2.0 * a * A) * C - (a * A + b * B * omega) * qz)
            + (a * C * C - a * C * qz) * T)


def ramp_only_cost_formula(b, c, qz, mu, qdot0, q0, T):
    """Polynomial cost of the ramp-only parabola (signed ramp in the b term)."""
    A = mu / (4.0 * c)
    B = qdot0
    C = q0
    return (0.5 * b * A * A * T**4
            + (b * B + 4.0 / 3.0 * c * A) * A * T**3
            + (0.5 * b * (B * B + 2.0 * A * C) + 2.0 * c * A * B - b * A * qz) * T**2
            + ((b * C + c * B) * B - b * B * qz) * T)
