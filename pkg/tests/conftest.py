import datetime as dt

import numpy as np
import pytest

from causalwavelet.series import TimeSeries

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call ``check(passed, detail)`` then assert."""

    def check(passed, detail=""):
        _CRITERIA.append((request.node.name, bool(passed), detail))
        return bool(passed)

    return check


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERIA:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


def make_series(values, start=dt.date(2010, 1, 1)):
    return TimeSeries.from_values(np.asarray(values, dtype=float), start)
