import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rampdispatch import HourSchedule, PriceSet  # noqa: E402

# single-hour setup used throughout: 100 -> 110 GW with 105 GWh scheduled
RAMP_SCHEDULE = HourSchedule(1.0e5, 1.1e5, 1.05e5)


@pytest.fixture
def base_prices():
    """Low-renewables prices at 100 GW."""
    return PriceSet(1.27e-3, 1.27e-3, 4.23e-6)


@pytest.fixture
def study_prices():
    """High-renewables prices at 100 GW."""
    return PriceSet(6.34e-4, 6.34e-4, 3.09e-2)


@pytest.fixture
def ramp_schedule():
    return RAMP_SCHEDULE


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
