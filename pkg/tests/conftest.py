import numpy as np
import pytest
from hypothesis import settings

import sta_transport as st

settings.register_profile("suite", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("suite")

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def record_criterion():
    def _record(line):
        _ACCEPTANCE_LINES.append(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def trap():
    return st.TrapParams.reference()


@pytest.fixture(scope="session")
def gauss(trap):
    return st.gaussian(trap)


@pytest.fixture(scope="session")
def harmonic(trap):
    return st.truncated_harmonic(trap)


@pytest.fixture(scope="session")
def omega0(trap):
    return trap.curvature_frequency


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
