"""Conventional hourly dispatch: ramp over the first and last ten minutes
(scaled with the horizon), hold the scheduled level in between."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels as K
from .errors import OutOfDomain
from .trajectory import HourSchedule


@dataclass(frozen=True)
class BaseProfile:
    qe: float
    qdot0: float
    qdot_t: float
    breakpoints: tuple
    schedule: HourSchedule


def build_base_profile(sched: HourSchedule) -> BaseProfile:
    T = sched.horizon
    qe = float(K.base_level(sched.q0, sched.qt, sched.energy, T))
    return BaseProfile(
        qe=qe,
        qdot0=6.0 * (qe - sched.q0) / T,
        qdot_t=6.0 * (sched.qt - qe) / T,
        breakpoints=((0.0, sched.q0), (T / 6.0, qe), (5.0 * T / 6.0, qe), (T, sched.qt)),
        schedule=sched,
    )


def eval_base_power(profile: BaseProfile, t):
    T = profile.schedule.horizon
    arr = np.asarray(t, dtype=float)
    if np.any(arr < -1e-12 * T) or np.any(arr > T * (1.0 + 1e-12)):
        raise OutOfDomain(f"time outside [0, {T}]")
    xs, ys = zip(*profile.breakpoints)
    out = np.interp(np.clip(arr, 0.0, T), xs, ys)
    return float(out) if out.ndim == 0 else out


def base_energy(profile: BaseProfile) -> float:
    """Trapezoid over the breakpoints (exact for the piecewise-linear profile)."""
    xs, ys = zip(*profile.breakpoints)
    return float(sum(0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]) for i in range(3)))
