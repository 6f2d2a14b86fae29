import pytest

from zonelab import ConvexBody, Hyperplane

AXES = [Hyperplane((1, 0), 0), Hyperplane((0, 1), 0)]


@pytest.fixture
def axes():
    return list(AXES)


@pytest.fixture
def strip_body():
    """[1,2] x [-3,3]"""
    return ConvexBody.box((1, -3), (2, 3))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long seeded sweeps")


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.lines():
            terminalreporter.write_line(line)
