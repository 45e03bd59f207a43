import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from arceloc.geometry import BeamCone, place_target  # noqa: E402
from helpers import fig3_network as _fig3_network  # noqa: E402

REFERENCE_TARGETS_DEG = [(0.0, 0.0), (4.0, 0.0), (6.9, 4.9)]


@pytest.fixture
def fig3_network():
    return _fig3_network()


@pytest.fixture
def fig3_beam():
    return BeamCone.from_degrees(7.0, 5.0)


@pytest.fixture
def reference_targets():
    return [place_target(20e3, np.deg2rad(a), np.deg2rad(e)) for a, e in REFERENCE_TARGETS_DEG]


# PASS/FAIL lines recorded by the acceptance suite
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
