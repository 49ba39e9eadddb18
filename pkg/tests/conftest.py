import numpy as np
import pytest

from opfminer import TimeSeries

WORKED = (15, 32, 29, 27, 34, 33, 25, 20, 28, 23)

# filled by test_acceptance; printed once at the end of the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def worked():
    return TimeSeries(WORKED, id="worked")


def random_series(rng, low=20, high=200, dup_rate=0.05):
    """Random walk rounded to 3 decimals with ~dup_rate values copied from earlier."""
    n = int(rng.integers(low, high + 1))
    x = np.round(np.cumsum(rng.normal(size=n)), 3)
    for i in np.nonzero(rng.random(n) < dup_rate)[0]:
        if i:
            x[i] = x[rng.integers(0, i)]
    return tuple(x.tolist())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
