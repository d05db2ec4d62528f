import math

import numpy as np
import pytest

from analog_search import CouplingParams, InitialState

PI = math.pi
BETA_30 = PI / 6  # sin(beta) = 1/2, the N = 4, M = 1 instance


def assert_matrix_close(actual, expected, atol=1e-12):
    np.testing.assert_allclose(np.asarray(actual, dtype=complex), np.asarray(expected, dtype=complex), rtol=0, atol=atol)


def random_coupling(rng, e_max=3.0, beta=(0.05, 1.5)):
    cp = CouplingParams(rng.uniform(0, e_max), rng.uniform(0, e_max), rng.uniform(-PI, PI))
    init = InitialState(rng.uniform(*beta), rng.uniform(-PI, PI))
    return cp, init


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def init30():
    return InitialState(BETA_30, 0.0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
