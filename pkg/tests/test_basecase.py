import numpy as np
import pytest
from hypothesis import given, strategies as st

from rampdispatch import HourSchedule, OutOfDomain, base_energy, build_base_profile, eval_base_power


def test_ramp_example(ramp_schedule):
    prof = build_base_profile(ramp_schedule)
    assert prof.qe == pytest.approx(1.05e5, rel=1e-14)
    assert prof.qdot0 == pytest.approx(3e4, rel=1e-12)
    assert prof.qdot_t == pytest.approx(3e4, rel=1e-12)


def test_flat_fixed_point():
    prof = build_base_profile(HourSchedule(4e4, 4e4, 4e4))
    assert prof.qe == pytest.approx(4e4, rel=1e-15)
    assert prof.qdot0 == pytest.approx(0.0, abs=1e-9)
    assert prof.qdot_t == pytest.approx(0.0, abs=1e-9)


def test_valley_profile():
    # energy well below the boundary powers: under-production in mid-hour
    prof = build_base_profile(HourSchedule(1e5, 1.1e5, 0.95e5))
    assert prof.qe < 1e5 and prof.qe < 1.1e5
    assert prof.qdot0 < 0.0 < prof.qdot_t


def test_interpolation_points(ramp_schedule):
    prof = build_base_profile(ramp_schedule)
    q0, qe = ramp_schedule.q0, prof.qe
    assert eval_base_power(prof, 0.0) == q0
    assert eval_base_power(prof, 0.5) == pytest.approx(qe)
    assert eval_base_power(prof, 1.0 / 12.0) == pytest.approx(0.5 * (q0 + qe), rel=1e-15)
    with pytest.raises(OutOfDomain):
        eval_base_power(prof, 1.5)


@given(q0=st.floats(0, 2e5), qt=st.floats(0, 2e5), e=st.floats(1e3, 2e5),
       horizon=st.sampled_from([0.5, 1.0, 3.0]))
def test_energy_identity(q0, qt, e, horizon):
    sched = HourSchedule(q0, qt, e * horizon, horizon)
    prof = build_base_profile(sched)
    assert base_energy(prof) == pytest.approx(sched.energy, rel=1e-12, abs=1e-9)
    t = np.linspace(0, horizon, 601)
    q = eval_base_power(prof, t)
    assert np.trapezoid(q, t) == pytest.approx(sched.energy, rel=1e-9, abs=1e-6)
