import os
import random

import pytest
from hypothesis import HealthCheck, settings

SEED = int(os.environ.get("TUSI_SEED", "1729"))

settings.register_profile(
    "tusi",
    max_examples=80,
    deadline=None,
    derandomize="TUSI_SEED" in os.environ,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("tusi")


@pytest.fixture
def rng():
    return random.Random(SEED)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if not LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(LINES):
        terminalreporter.write_line(LINES[n])
