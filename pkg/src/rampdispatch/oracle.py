"""Brute-force reference: minimise the discretised cost directly.

Nothing here uses the closed-form trajectory.  The hour is cut into ``N``
equal steps; the interior grid values are the unknowns, the endpoints are
fixed, and the trapezoidal energy must equal ``E_T``.  With the sign of
each step's ramp frozen the objective is quadratic, so the first-order
conditions form a tridiagonal system bordered by the energy constraint.
Ramp signs are re-read from the solution until they stop changing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, solveh_banded

from .cost import CostBreakdown
from .errors import InvalidInput, NoConvergence, SingularKKT
from .trajectory import HourSchedule, PriceSet

MAX_SIGN_ITERATIONS = 10
# steps smaller than this fraction of the power scale count as flat
FLAT_STEP_RTOL = 1e-10


@dataclass(frozen=True)
class OracleSolution:
    grid: np.ndarray
    cost: float
    energy_gap: float
    endpoint_gaps: tuple
    iterations: int

    @property
    def residuals(self):
        return (self.energy_gap,) + self.endpoint_gaps


def discretised_cost(grid, h, prices: PriceSet, signs=None):
    """Trapezoidal cost of a grid trajectory with forward-difference ramps.

    ``signs`` optionally fixes the ramp sign of each step (as used by the
    solver); otherwise the sign of each difference is taken as is.
    """
    q = np.asarray(grid, dtype=float)
    a, b, c, qz = prices.a, prices.b, prices.c, prices.qz
    run = a * q * (q - qz)
    energy = h * (np.sum(run) - 0.5 * (run[0] + run[-1]))
    dq = np.diff(q)
    s = np.sign(dq) if signs is None else np.asarray(signs, dtype=float)
    power = 0.5 * b * np.sum(s * dq * (q[1:] + q[:-1] - 2.0 * qz))
    ramping = c / h * np.sum(dq * dq)
    return float(energy + power + ramping)


def _solve_fixed_signs(signs, prices, sched, n, h):
    a, b, c, qz = prices.a, prices.b, prices.c, prices.qz
    q0, qt = sched.q0, sched.qt
    m = n - 1
    kink = b * (signs[:-1] - signs[1:])
    stiff = 2.0 * c / h
    diag = 2.0 * a * h + 2.0 * stiff + kink
    bands = np.zeros((2, m))
    bands[0, 1:] = -stiff
    bands[1, :] = diag
    rhs = a * h * qz + kink * qz
    rhs = np.full(m, rhs) if np.ndim(rhs) == 0 else rhs.copy()
    rhs[0] += stiff * q0
    rhs[-1] += stiff * qt
    ones = np.full(m, h)
    try:
        sol = solveh_banded(bands, np.column_stack([rhs, ones]))
    except LinAlgError as exc:
        # a valley in the frozen sign pattern made the subproblem indefinite
        raise NoConvergence("fixed-sign subproblem is not convex") from exc
    except ValueError as exc:
        raise SingularKKT(str(exc)) from exc
    y, z = sol[:, 0], sol[:, 1]
    target = sched.energy - 0.5 * h * (q0 + qt)
    denom = h * np.sum(z)
    if denom == 0.0 or not np.isfinite(denom):
        raise SingularKKT("energy constraint is degenerate")
    nu = (h * np.sum(y) - target) / denom
    interior = y - nu * z
    if not np.all(np.isfinite(interior)):
        raise SingularKKT("non-finite KKT solution")
    return np.concatenate(([q0], interior, [qt]))


def _fill_flat(signs):
    """Give flat steps the sign of the nearest preceding ramp (or following,
    at the start) so that roundoff plateaus do not create spurious kinks."""
    nz = np.flatnonzero(signs)
    if nz.size == 0:
        return signs
    idx = np.maximum.accumulate(np.where(signs != 0.0, np.arange(signs.size), -1))
    idx[idx < 0] = nz[0]
    return signs[idx]


def solve_numeric(prices: PriceSet, sched: HourSchedule, n: int = 3600) -> OracleSolution:
    n = int(n)
    if n < 8:
        raise InvalidInput(f"oracle needs at least 8 steps, got {n}")
    h = sched.horizon / n
    signs = np.zeros(n)
    flat = FLAT_STEP_RTOL * max(abs(sched.q0), abs(sched.qt), abs(sched.energy) / sched.horizon, 1.0)
    seen = []
    iterations = 0
    while True:
        grid = _solve_fixed_signs(signs, prices, sched, n, h)
        iterations += 1
        dq = np.diff(grid)
        new_signs = _fill_flat(np.where(np.abs(dq) > flat, np.sign(dq), 0.0))
        if prices.b == 0.0 or np.array_equal(new_signs, signs):
            break
        key = new_signs.tobytes()
        if key in seen or iterations >= MAX_SIGN_ITERATIONS:
            raise NoConvergence(f"ramp sign pattern did not settle after {iterations} solves")
        seen.append(signs.tobytes())
        signs = new_signs
    energy = h * (np.sum(grid) - 0.5 * (grid[0] + grid[-1]))
    return OracleSolution(
        grid=grid,
        cost=discretised_cost(grid, h, prices, signs if prices.b != 0.0 else None),
        energy_gap=float(energy - sched.energy),
        endpoint_gaps=(float(grid[0] - sched.q0), float(grid[-1] - sched.qt)),
        iterations=iterations,
    )


def compare(analytic: CostBreakdown, numeric: OracleSolution) -> float:
    """Relative gap between the closed-form and the brute-force cost."""
    return abs(analytic.total - numeric.cost) / max(1.0, abs(numeric.cost))
