import numpy as np
import pytest

from oamris.selftest import random_channels


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def make_channels():
    return random_channels


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
