import math

import numpy as np
import pytest

RHO = 0.9
#: -1/2 ln(1 - 0.81), the mutual information of a unit bivariate normal pair with rho = 0.9
MI_RHO09 = 0.8303656034108255


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def bivariate_windows(n, m, rho, seed):
    """``n`` windows of i.i.d. correlated scalar pairs, drawn directly."""
    r = np.random.default_rng(seed)
    x = r.standard_normal((n, m))
    y = rho * x + math.sqrt(1 - rho ** 2) * r.standard_normal((n, m))
    return x, y


#: one ``(criterion, passed, detail)`` tuple per acceptance check, filled by test_acceptance
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_LINES, key=lambda t: int(t[0].split()[1])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
