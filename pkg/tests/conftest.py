import numpy as np
import pytest

from wegnerlab.model import AndersonConfig, DensityBV, SingleSiteProfile
from wegnerlab.symbols import CoefficientField


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def one_site():
    """H = omega_0 on a single site: the Wegner expectation is exact."""
    return AndersonConfig(d=1, l=0, alpha=CoefficientField({0: 1.0}),
                          v=SingleSiteProfile.indicator(), f=DensityBV.uniform(0.0, 1.0))


@pytest.fixture
def sign_changing():
    return AndersonConfig(d=1, l=10, alpha=CoefficientField({0: 1.0, 1: -0.5}),
                          v=SingleSiteProfile.indicator(), f=DensityBV.uniform(0.0, 1.0))


def laurent_section_inverse(alpha, n):
    """Brute force: invert the n x n section of (alpha_{j-k}) and return its middle column.

    Far from the section boundary the inverse reproduces beta_{j-k} up to an
    exponentially small error.
    """
    T = np.zeros((n, n))
    for k, a in alpha.items():
        T += a * np.eye(n, k=-k[0])
    col = np.linalg.inv(T)[:, n // 2]
    return {j - n // 2: col[j] for j in range(n)}


_verdicts = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict; the lines are repeated in the terminal summary."""
    lines = request.config.stash.setdefault(_verdicts, [])

    def record(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        print(line)
        lines.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_verdicts, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
