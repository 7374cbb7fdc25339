import math

import numpy as np
import pytest

from dualcavity.classical import ClassicalModeState
from dualcavity.config import CavityConfig, build_mode_set


@pytest.fixture
def natural():
    return CavityConfig(L=math.pi, V=1.0, unit_system="NATURAL")


@pytest.fixture
def si():
    return CavityConfig(L=0.05, V=0.05 * 0.02 * 0.01, unit_system="SI", m_default=1e-3)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def random_real_states(rng, n):
    return [ClassicalModeState.real(complex(*rng.normal(size=2))) for _ in range(n)]


def random_complex_states(rng, n):
    return [ClassicalModeState(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
            for _ in range(n)]


@pytest.fixture
def three_modes(natural):
    return build_mode_set(natural, 3)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
