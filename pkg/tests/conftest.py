import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def brute_killing(c):
    """Killing matrix by explicit traces of ad products, one entry at a time."""
    d = c.shape[0]
    ad = [c[i].T for i in range(d)]  # column j of ad_i is [e_i, e_j]
    return np.array([[np.trace(ad[i] @ ad[j]) for j in range(d)] for i in range(d)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
