from pathlib import Path

import pytest

from backstroke import SyntheticScene, render_synthetic

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_acceptance_lines = []


def record_acceptance(line):
    """Collect an acceptance gate line for the terminal summary."""
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def smooth_scene():
    """The gentle back-like surface used across the suite, zero noise."""
    return SyntheticScene(a=1.2, b=-0.4, c=0.15, d=0.45)


@pytest.fixture(scope="session")
def smooth_depth(smooth_scene):
    """One shared 640x480 render of the smooth scene."""
    return render_synthetic(smooth_scene)
