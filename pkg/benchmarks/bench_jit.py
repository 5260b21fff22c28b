#!/usr/bin/env python3
"""Compiled kernels vs. the pure numpy fallback.

Each backend runs in its own interpreter because the choice is made at
import time from ``RAMPDISPATCH_NO_JIT``.  Compilation is excluded: every
workload runs once before it is timed.

    python3 benchmarks/bench_jit.py [--repeat 5] [--hours 8760]
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, timeit
import numpy as np
from rampdispatch import _jit, kernels as K, synthetic_year
from rampdispatch.simulator import simulate_table

hours, repeat = int(sys.argv[1]), int(sys.argv[2])
cfg = synthetic_year(n_hours=hours, seed=1)
state = K.solve_state(6.34e-4, 3.09e-2, 1.0, 1e5, 1.1e5, 1.05e5)
t = np.linspace(0.0, 1.0, 100_000)
q = K.sample_state(state, 900, 1.0 / 900)

work = {
    "simulate_year": lambda: simulate_table(cfg),
    "power_100k": lambda: K.power_many(state, t),
    "discrete_cost_900": lambda: K.discrete_cost_parts(q, 1.0 / 900, 1e-3, 1e-3, 1e-2, 0.0),
    "correct_energy_900": lambda: K.correct_energy(q, state, 1.0 / 900),
}
out = {"jit": _jit.JIT_ENABLED, "times": {}}
for name, fn in work.items():
    fn()
    out["times"][name] = min(timeit.repeat(fn, number=1, repeat=repeat))
json.dump(out, sys.stdout)
"""


def run(no_jit, hours, repeat):
    env = dict(os.environ)
    if no_jit:
        env["RAMPDISPATCH_NO_JIT"] = "1"
    else:
        env.pop("RAMPDISPATCH_NO_JIT", None)
    proc = subprocess.run([sys.executable, "-c", CHILD, str(hours), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--hours", type=int, default=8760)
    args = parser.parse_args()

    fast = run(False, args.hours, args.repeat)
    slow = run(True, args.hours, args.repeat)
    if not fast["jit"]:
        print("numba is not available; both runs used the fallback")
    print(f"{'workload':<22}{'numba (ms)':>12}{'numpy (ms)':>12}{'speedup':>10}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:<22}{1e3 * t_fast:>12.3f}{1e3 * t_slow:>12.3f}{t_slow / t_fast:>10.1f}")


if __name__ == "__main__":
    main()
