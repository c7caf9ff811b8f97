import numpy as np
import pytest

from dividerset.curves import parse_preset

PRESET_NAMES = ["circle:1", "ellipse:2,1", "segment", "parabola:0.25", "hypotrochoid:5,2,0.6"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=PRESET_NAMES)
def preset(request):
    return parse_preset(request.param)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
