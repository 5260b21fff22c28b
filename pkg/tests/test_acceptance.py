"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

The lines are echoed again in the pytest terminal summary.  Run standalone
with ``python3 tests/test_acceptance.py`` to print only the summary.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from rampdispatch import (HourSchedule, Mode, PriceSet, Regime, base_case_cost, compare,
                          discrete_cost, draw_errors, eval_energy, eval_power, optimal_cost,
                          sample_dispatch, sensitivity_sweep, solve_hour, solve_numeric,
                          synthetic_year)
from rampdispatch.trajectory import omega_of

from oracles import (perturbation_basis, perturbed_cost, quadrature_base, quadrature_optimal,
                     random_general_instance)

RESULTS: dict = {}

BASE = PriceSet(1.27e-3, 1.27e-3, 4.23e-6)
STUDY = PriceSet(6.34e-4, 6.34e-4, 3.09e-2)
RAMP = HourSchedule(1.0e5, 1.1e5, 1.05e5)


def report(number, title, ok, detail):
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def instance(d, b=None):
    prices = PriceSet(d["a"], d["b"] if b is None else b, d["c"], d["qz"])
    return prices, HourSchedule(d["q0"], d["qt"], d["et"])


def test_c01_omega():
    wb, ws = omega_of(BASE), omega_of(STUDY)
    eb, es = abs(wb / 17.3 - 1), abs(ws / 0.1433 - 1)
    report(1, "omega reproduction", eb <= 5e-3 and es <= 5e-3,
           f"base {wb:.4f}/h (err {eb:.2%}), study {ws:.5f}/h (err {es:.2%}), tol 0.5%")


def test_c02_oracle_equivalence():
    rng = np.random.default_rng(20240101)
    start = time.perf_counter()
    gaps = []
    for _ in range(100):
        prices, sched = instance(random_general_instance(rng), b=0.0)
        params = solve_hour(prices, sched)
        assert params.regime is Regime.GENERAL
        gaps.append(compare(optimal_cost(params), solve_numeric(prices, sched, 3600)))
    elapsed = time.perf_counter() - start
    worst = max(gaps)
    report(2, "oracle equivalence", worst <= 1e-3 and elapsed < 60.0,
           f"max gap {worst:.2e} over 100 instances (tol 1e-3, b=0), {elapsed:.1f} s (< 60 s)")


def test_c03_minimizer():
    rng = np.random.default_rng(3)
    grid = np.linspace(0.0, 1.0, 2001)
    worst = math.inf
    violations = 0
    for _ in range(20):
        prices, sched = instance(random_general_instance(rng), b=0.0)
        params = solve_hour(prices, sched)
        opt = optimal_cost(params).total
        scale = np.max(np.abs(eval_power(params, grid)))
        for _ in range(1000):
            v, vdot = perturbation_basis(rng, 1.0)
            # amplitudes from 1e-5 to 1e-1 of the peak power
            eps = 10.0 ** rng.uniform(-5, -1) * scale / np.max(np.abs(v(grid)))
            rel = (perturbed_cost(params, v, vdot, eps) - opt) / abs(opt)
            worst = min(worst, rel)
            violations += rel < -1e-9
    report(3, "minimizer property", violations == 0,
           f"{violations} of 20000 perturbations below optimum; smallest relative increase "
           f"{worst:.2e} (tol -1e-9, b=0)")


def test_c04_constraints():
    rng = np.random.default_rng(4)
    worst = {}
    for regime, (a_lo, a_hi, c_lo, c_hi) in {
        Regime.GENERAL: (-4, -2, -6, -1),
        Regime.RAMP_ONLY: (None, None, -6, -1),
        Regime.ENERGY_ONLY: (-4, -2, None, None),
    }.items():
        w = 0.0
        for _ in range(100):
            d = random_general_instance(rng)
            d["a"] = 0.0 if a_lo is None else 10.0 ** rng.uniform(a_lo, a_hi)
            d["c"] = 0.0 if c_lo is None else 10.0 ** rng.uniform(c_lo, c_hi)
            d["b"] = d["a"]
            prices, sched = instance(d)
            params = solve_hour(prices, sched)
            assert params.regime is regime
            scale = max(sched.q0, sched.qt)
            w = max(w, abs(eval_power(params, 0.0) - sched.q0) / scale,
                    abs(eval_power(params, 1.0) - sched.qt) / scale,
                    abs(eval_energy(params, 1.0) - sched.energy) / sched.energy)
        worst[regime.name] = w
    ok = all(w <= 1e-9 for w in worst.values())
    report(4, "constraint satisfaction", ok,
           ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + " (tol 1e-9)")


def test_c05_regime_continuity():
    c = STUDY.c
    sched = HourSchedule(1.0e5, 1.1e5, 1.06e5)
    t = np.linspace(0.0, 1.0, 2001)
    parabola = eval_power(solve_hour(PriceSet(0.0, 0.0, c), sched), t)
    gaps = []
    for exp in range(3, 9):
        params = solve_hour(PriceSet(10.0 ** -exp, 0.0, c), sched)
        gaps.append(float(np.max(np.abs(eval_power(params, t) - parabola))))
    monotone = all(g1 < g0 for g0, g1 in zip(gaps[:-1], gaps[1:]))
    report(5, "regime continuity", monotone and gaps[-1] <= 1e-6 * 1.1e5,
           "sup-gap (MW) at a=1e-3..1e-8: " + ", ".join(f"{g:.2e}" for g in gaps))


def test_c06_dominance():
    out = {}
    for name, prices in (("base", BASE), ("study", STUDY)):
        traj = sample_dispatch(solve_hour(prices, RAMP), 300.0)
        c_star = discrete_cost(traj, prices)
        c_base = base_case_cost(prices, RAMP).total
        out[name] = (c_base - c_star, c_base)
    frac_base = out["base"][0] / out["base"][1]
    frac_study = out["study"][0] / out["study"][1]
    report(6, "dominance and regime behaviour", abs(frac_base) < 5e-3 and out["study"][0] > 0.0,
           f"low-renewables savings {frac_base:.3%} of cost (|.| < 0.5%), "
           f"high-renewables savings ${out['study'][0]:,.0f} ({frac_study:.1%})")


def test_c07_sensitivity():
    start = time.perf_counter()
    rows = sensitivity_sweep(synthetic_year("high", n_hours=8760, seed=2024), [0.5, 1.0, 1.5])
    elapsed = time.perf_counter() - start
    s = [r.total_savings for r in rows]
    f = [r.savings_fraction for r in rows]
    direction = s[0] < s[1] < s[2]
    drop, gain = s[1] - s[0], s[2] - s[1]
    asymmetric = abs(drop) > abs(gain)
    report(7, "sensitivity direction", direction and asymmetric and elapsed < 300.0,
           f"savings $ {s[0]:.4e} < {s[1]:.4e} < {s[2]:.4e}: {direction}; "
           f"|drop at 0.5| {drop:.6e} > |gain at 1.5| {gain:.6e}: {asymmetric}; "
           f"savings fraction {f[0]:.4f}/{f[1]:.4f}/{f[2]:.4f}; {elapsed:.1f} s")


def test_c08_controller():
    rng = np.random.default_rng(8)
    worst_sample, worst_energy = 0.0, 0.0
    cases = [instance(random_general_instance(rng)) for _ in range(25)] + [(STUDY, RAMP), (BASE, RAMP)]
    for prices, sched in cases:
        params = solve_hour(prices, sched)
        for t_s in (4.0, 60.0, 300.0, 600.0):
            traj = sample_dispatch(params, t_s)
            ref = eval_power(params, traj.times)
            worst_sample = max(worst_sample, float(np.max(np.abs(traj.samples - ref) / np.abs(ref))))
            corrected = sample_dispatch(params, t_s, Mode.ENERGY_CORRECTED)
            worst_energy = max(worst_energy, abs(corrected.energy() / sched.energy - 1.0))
    report(8, "controller exactness", worst_sample <= 1e-10 and worst_energy <= 1e-9,
           f"sampled max rel error {worst_sample:.1e} (tol 1e-10), "
           f"corrected energy error {worst_energy:.1e} (tol 1e-9)")


def test_c09_error_statistics():
    e = draw_errors(2024, 8760, 0.0, 100.0)
    mean, std = float(e.mean()), float(e.std(ddof=1))
    report(9, "error-model statistics", abs(mean) <= 5.0 and abs(std - 100.0) <= 3.0,
           f"mean {mean:+.2f} MW (+-5), std {std:.2f} MW (100 +-3)")


def test_c10_closed_form_audit():
    rng = np.random.default_rng(10)
    worst_opt, worst_base, with_tc = 0.0, 0.0, 0
    for _ in range(100):
        d = random_general_instance(rng)
        # widen the energy range so that interior ramp-sign changes are common
        d["et"] = 0.5 * (d["q0"] + d["qt"]) * rng.uniform(0.8, 1.2)
        prices, sched = instance(d)
        params = solve_hour(prices, sched)
        with_tc += params.turning_time is not None
        q_opt = sum(quadrature_optimal(params))
        q_base = sum(quadrature_base(prices, sched))
        worst_opt = max(worst_opt, abs(optimal_cost(params).total / q_opt - 1.0))
        worst_base = max(worst_base, abs(base_case_cost(prices, sched).total / q_base - 1.0))
    report(10, "closed-form audit", worst_opt <= 1e-7 and worst_base <= 1e-7 and with_tc > 0,
           f"optimal {worst_opt:.1e}, base {worst_base:.1e} (tol 1e-7); "
           f"{with_tc} of 100 instances with interior t_c")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
