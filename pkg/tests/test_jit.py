"""The compiled loop kernels and the numpy fallbacks must agree."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from rampdispatch import _jit
from rampdispatch import kernels as K

pytestmark = pytest.mark.skipif(not _jit.JIT_ENABLED, reason="numba acceleration is off")

STATES = [
    K.solve_state(6.34e-4, 3.09e-2, 1.0, 1e5, 1.1e5, 1.05e5),
    K.solve_state(1.27e-3, 4.23e-6, 1.0, 1e5, 1.1e5, 1.05e5),
    K.solve_state(0.0, 3.09e-2, 1.0, 1e5, 1.1e5, 1.06e5),
    K.solve_state(1.27e-3, 0.0, 1.0, 1e5, 1.1e5, 1.05e5),
]


@pytest.mark.parametrize("s", STATES)
def test_array_kernels(s):
    t = np.linspace(0.0, 1.0, 101)
    np.testing.assert_allclose(K.power_many(s, t), K._power_many_np(s, t), rtol=1e-13)
    np.testing.assert_allclose(K.ramp_many(s, t), K._ramp_many_np(s, t), rtol=1e-11, atol=1e-9)
    np.testing.assert_allclose(K.energy_many(s, t), K._energy_many_np(s, t), rtol=1e-13)
    q = K.sample_state(s, 12, 1.0 / 12.0)
    np.testing.assert_allclose(q, K._sample_np(s, 12, 1.0 / 12.0), rtol=1e-13)
    np.testing.assert_allclose(K.correct_energy(q, s, 1.0 / 12.0),
                               K._correct_np(q, s, 1.0 / 12.0), rtol=1e-12)
    np.testing.assert_allclose(K.discrete_cost_parts(q, 1.0 / 12.0, 1e-3, 1e-3, 1e-2, 0.0),
                               K._discrete_cost_np(q, 1.0 / 12.0, 1e-3, 1e-3, 1e-2, 0.0),
                               rtol=1e-12)
    assert K.trapezoid_energy(q, 1.0 / 12.0) == pytest.approx(K._trapezoid_np(q, 1.0 / 12.0),
                                                              rel=1e-14)


@pytest.mark.parametrize("s", STATES)
def test_scalar_kernels_match_python(s):
    for t in (0.0, 0.3, 1.0):
        assert K.power_at(s, t) == pytest.approx(K.power_at.py_func(s, t), rel=1e-14)
    a, b, c = 1e-3, 1e-3, 1e-2
    np.testing.assert_allclose(K.cost_parts(s, a, b, c, 0.0)[:3],
                               K.cost_parts.py_func(s, a, b, c, 0.0)[:3], rtol=1e-12)


def test_fallback_process_agrees(tmp_path):
    """Run a short scenario with acceleration switched off in a child process."""
    script = (
        "import json, sys\n"
        "from rampdispatch import synthetic_year\n"
        "from rampdispatch.simulator import simulate_table\n"
        "from rampdispatch import _jit\n"
        "out = simulate_table(synthetic_year(n_hours=96, seed=3))\n"
        "json.dump({'jit': _jit.JIT_ENABLED, 'table': out.tolist()}, sys.stdout)\n"
    )
    env = dict(os.environ, RAMPDISPATCH_NO_JIT="1")
    proc = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True,
                          env=env, cwd=tmp_path, check=True)
    data = json.loads(proc.stdout)
    assert data["jit"] is False
    from rampdispatch import synthetic_year
    from rampdispatch.simulator import simulate_table
    np.testing.assert_allclose(np.array(data["table"]), simulate_table(synthetic_year(n_hours=96, seed=3)),
                               rtol=1e-10, atol=1e-6)
