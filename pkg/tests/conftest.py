import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(scope="session")
def repo_root():
    return ROOT


@pytest.fixture(scope="session")
def data_dir():
    return os.path.join(ROOT, "data")


@pytest.fixture(scope="session")
def schema_dir():
    return os.path.join(ROOT, "schemas")


@pytest.fixture(scope="session")
def config_dir():
    return os.path.join(ROOT, "configs")


def _random_spd(rng, d, jitter=0.5):
    """Well-conditioned random SPD matrix for density tests."""
    A = rng.normal(size=(d, d))
    return A @ A.T + (jitter + d) * np.eye(d)


@pytest.fixture(scope="session")
def random_spd():
    return _random_spd


# One verdict line per acceptance criterion, echoed in the terminal
# summary so a plain `pytest -v` run shows them even with capture on.
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
