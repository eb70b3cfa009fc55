import numpy as np
import pytest

from cnls_lab import make_grid

_criterion_lines = []


def record_criterion(line: str):
    """Collect acceptance-criterion results for the end-of-run summary."""
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid_small():
    """Coarse grid for fast unit tests; still spectrally resolved at omega=1."""
    return make_grid(256, 20.0)


@pytest.fixture(scope="session")
def grid_fine():
    """Production grid used by the acceptance criteria."""
    return make_grid(1024, 40.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
