import pytest
from hypothesis import HealthCheck, settings

from bsfamily.division import set_invariant_checks

settings.register_profile(
    "repo", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("repo")

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


@pytest.fixture
def checked_divisions():
    """Re-verify identity and support conditions on every tracked division."""
    old = set_invariant_checks(True)
    yield
    set_invariant_checks(old)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
