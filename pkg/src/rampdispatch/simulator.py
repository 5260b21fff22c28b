"""Multi-hour dispatch scenarios with schedule error carried between hours.

Each hour draws a Gaussian schedule error (MW, held over the hour).  The
energy the hour was supposed to deliver but did not is added to the next
hour's energy target.  Boundary powers come from the input series unless
chaining is switched on, in which case every hour starts where the previous
one ended.

Draws come from numpy's PCG64 bit generator.  Hour ``k`` uses its own
substream ``SeedSequence(seed, spawn_key=(k,))``, so a draw never depends on
how many hours precede it or the order in which they are visited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import kernels as K
from .controller import Mode, SECONDS_PER_HOUR, step_count
from .errors import EmptyInput, HourFailure, InvalidInput
from .trajectory import Regime

DEFAULT_STEP = 300.0


@dataclass(frozen=True)
class ErrorModel:
    """Gaussian schedule error in MW."""

    mean: float = 0.0
    std: float = 100.0

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.std)):
            raise InvalidInput("error model parameters must be finite")
        if self.std < 0.0:
            raise InvalidInput(f"error std must be non-negative, got {self.std}")


@dataclass(frozen=True)
class HourInput:
    """Prices and schedule for one hour.  ``q0`` may be NaN when chained."""

    a: float
    b: float
    c: float
    qz: float
    q0: float
    qt: float
    energy: float


_FIELDS = ("a", "b", "c", "qz", "q0", "qt", "energy")


@dataclass(frozen=True)
class ScenarioConfig:
    hours: tuple
    error_model: ErrorModel = field(default_factory=ErrorModel)
    seed: int = 0
    t_s: float = DEFAULT_STEP
    mode: Mode = Mode.SAMPLED
    chaining: bool = False
    horizon: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "hours", tuple(self.hours))
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        if not self.hours:
            raise EmptyInput("a scenario needs at least one hour")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise InvalidInput(f"seed must be a non-negative integer, got {self.seed!r}")
        if not (self.horizon > 0.0 and math.isfinite(self.horizon)):
            raise InvalidInput(f"horizon must be positive, got {self.horizon}")
        n = step_count(self.horizon, self.t_s)
        if self.mode is Mode.ENERGY_CORRECTED and n < 2:
            raise InvalidInput("energy correction needs at least two update intervals")
        cols = self.columns()
        for name in ("a", "b", "c", "qt", "energy"):
            if not np.all(np.isfinite(cols[name])):
                bad = int(np.flatnonzero(~np.isfinite(cols[name]))[0])
                raise InvalidInput(f"hour {bad}: {name} is not finite")
        for name in ("a", "b", "c", "qz", "qt"):
            if np.any(cols[name] < 0.0):
                bad = int(np.flatnonzero(cols[name] < 0.0)[0])
                raise InvalidInput(f"hour {bad}: {name} is negative")
        q0 = cols["q0"] if not self.chaining else cols["q0"][:1]
        if not np.all(np.isfinite(q0)) or np.any(q0 < 0.0):
            bad = int(np.flatnonzero(~(np.isfinite(q0) & (q0 >= 0.0)))[0])
            raise InvalidInput(f"hour {bad}: q0 is missing or negative")

    @property
    def steps(self) -> int:
        return step_count(self.horizon, self.t_s)

    def columns(self) -> dict:
        """Hour fields as contiguous float arrays keyed by field name."""
        data = np.array([[getattr(h, f) for f in _FIELDS] for h in self.hours], dtype=float)
        data = data.reshape(len(self.hours), len(_FIELDS))
        return {f: np.ascontiguousarray(data[:, i]) for i, f in enumerate(_FIELDS)}

    def scale_ramping(self, factor: float) -> "ScenarioConfig":
        hours = tuple(replace(h, c=h.c * factor) for h in self.hours)
        return replace(self, hours=hours)


@dataclass(frozen=True)
class HourResult:
    hour: int
    c_opt: float
    c_base: float
    c_star: float
    savings: float
    delivered: float
    carried: float
    q0: float
    target: float
    regime: Regime


@dataclass(frozen=True)
class DurationCurve:
    values: np.ndarray
    hours: np.ndarray

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SweepRow:
    factor: float
    total_savings: float
    total_base: float

    @property
    def savings_fraction(self) -> float:
        return self.total_savings / self.total_base if self.total_base else math.nan


def draw_errors(seed: int, n_hours: int, mean: float = 0.0, std: float = 100.0) -> np.ndarray:
    """One Gaussian draw per hour from per-hour PCG64 substreams."""
    out = np.empty(n_hours)
    for h in range(n_hours):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(h,))))
        out[h] = rng.normal(mean, std) if std > 0.0 else mean
    return out


def simulate_table(cfg: ScenarioConfig) -> np.ndarray:
    """Raw per-hour output table; columns are the ``kernels.OUT_*`` indices."""
    cols = cfg.columns()
    n = len(cfg.hours)
    errors = draw_errors(cfg.seed, n, cfg.error_model.mean, cfg.error_model.std)
    out = np.full((n, K.OUT_COLS), np.nan)
    failed = K.simulate_hours(cols["a"], cols["b"], cols["c"], cols["qz"], cols["q0"],
                              cols["qt"], cols["energy"], float(cfg.horizon), errors,
                              cfg.t_s / SECONDS_PER_HOUR, cfg.steps,
                              cfg.mode is Mode.ENERGY_CORRECTED, bool(cfg.chaining), out)
    if failed >= 0:
        h = cfg.hours[failed]
        if h.a <= K.PRICE_EPS and h.c <= K.PRICE_EPS:
            raise HourFailure(int(failed), "energy and ramping prices are both zero")
        raise HourFailure(int(failed), "parameter system is singular")
    return out


def run_scenario(cfg: ScenarioConfig) -> list:
    out = simulate_table(cfg)
    return [
        HourResult(
            hour=i,
            c_opt=float(row[K.OUT_C_OPT]),
            c_base=float(row[K.OUT_C_BASE]),
            c_star=float(row[K.OUT_C_STAR]),
            savings=float(row[K.OUT_C_BASE] - row[K.OUT_C_STAR]),
            delivered=float(row[K.OUT_DELIVERED]),
            carried=float(row[K.OUT_CARRIED]),
            q0=float(row[K.OUT_Q0]),
            target=float(row[K.OUT_TARGET]),
            regime=Regime(int(row[K.OUT_REGIME])),
        )
        for i, row in enumerate(out)
    ]


def total_savings(results: Sequence[HourResult]) -> float:
    return math.fsum(r.c_base for r in results) - math.fsum(r.c_star for r in results)


def duration_curve(values) -> DurationCurve:
    """Sort descending; equal values keep their input order."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise EmptyInput("duration curve of an empty series")
    order = np.argsort(-v, kind="stable")
    return DurationCurve(values=v[order], hours=np.arange(1, v.size + 1))


def sensitivity_sweep(cfg: ScenarioConfig, c_factors) -> list:
    factors = [float(f) for f in c_factors]
    if not factors:
        raise InvalidInput("no ramping-price factors given")
    for f in factors:
        if not (f > 0.0 and math.isfinite(f)):
            raise InvalidInput(f"ramping-price factor must be positive, got {f}")
    rows = []
    for f in factors:
        out = simulate_table(cfg if f == 1.0 else cfg.scale_ramping(f))
        base = math.fsum(out[:, K.OUT_C_BASE])
        rows.append(SweepRow(f, base - math.fsum(out[:, K.OUT_C_STAR]), base))
    return rows


# prices at 100 GW, $/MW^2 h
HIGH_RENEWABLES_A = 6.34e-4
LOW_RENEWABLES_A = 1.27e-3
# ramping price = power price x this window, in hours
HIGH_RENEWABLES_WINDOW = 49.0
LOW_RENEWABLES_WINDOW = 12.0 / SECONDS_PER_HOUR


def synthetic_year(kind: str = "high", n_hours: int = 8760, seed: int = 2024,
                   mean_load: float = 1.0e5, daily_swing: float = 0.15,
                   noise: float = 0.02, curtailed_fraction: float = 0.05,
                   t_s: float = DEFAULT_STEP, mode=Mode.SAMPLED,
                   error_model: Optional[ErrorModel] = None) -> ScenarioConfig:
    """A seeded stand-in for a year of hourly schedules and prices.

    Load follows a daily sinusoid around ``mean_load`` (MW) with a seasonal
    wobble and multiplicative noise.  The energy price scales with load,
    ``b = a``, and ``c = b * window`` with the window set by ``kind``.  In
    ``high`` years a fraction of midday hours is curtailed (``a = b = 0``)
    and priced by ramping alone.
    """
    if kind not in ("high", "low"):
        raise InvalidInput(f"kind must be 'high' or 'low', got {kind!r}")
    if n_hours < 1:
        raise EmptyInput("a synthetic year needs at least one hour")
    rng = np.random.default_rng(seed)
    t = np.arange(n_hours + 1, dtype=float)
    shape = (1.0 + daily_swing * np.sin(2.0 * np.pi * (t - 9.0) / 24.0)
             + 0.05 * np.sin(2.0 * np.pi * t / 8760.0))
    boundary = mean_load * shape * (1.0 + noise * rng.standard_normal(n_hours + 1))
    # hourly energy sits between the boundary powers, nudged by a schedule term
    energy = 0.5 * (boundary[:-1] + boundary[1:]) * (1.0 + 0.01 * rng.standard_normal(n_hours))
    base_a = HIGH_RENEWABLES_A if kind == "high" else LOW_RENEWABLES_A
    window = HIGH_RENEWABLES_WINDOW if kind == "high" else LOW_RENEWABLES_WINDOW
    a = base_a * energy / mean_load
    b = a.copy()
    c = b * window
    if kind == "high" and curtailed_fraction > 0.0:
        hour_of_day = np.arange(n_hours) % 24
        midday = (hour_of_day >= 10) & (hour_of_day <= 15)
        curtailed = midday & (rng.random(n_hours) < curtailed_fraction * 4.0)
        # curtailed hours keep a ramping price so the hour stays well posed
        c = np.where(curtailed, base_a * window, c)
        a = np.where(curtailed, 0.0, a)
        b = np.where(curtailed, 0.0, b)
    hours = tuple(HourInput(float(a[i]), float(b[i]), float(c[i]), 0.0,
                            float(boundary[i]), float(boundary[i + 1]), float(energy[i]))
                  for i in range(n_hours))
    return ScenarioConfig(hours=hours, error_model=error_model or ErrorModel(),
                          seed=seed, t_s=t_s, mode=mode)
