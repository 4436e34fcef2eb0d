import pytest
from hypothesis import settings

from zarkit import CurveConfiguration

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def he():
    """H^2 = 1, E^2 = -2, H.E = 1, with E contractible."""
    return CurveConfiguration.build(["H", "E"], [[1, 1], [1, -2]], exceptional=["E"])


@pytest.fixture
def chain_cfg():
    """H meeting a two-curve chain; the integral decomposition of
    H + 3E1 + 2E2 needs a non-trivial connecting chain."""
    return CurveConfiguration.build(
        ["H", "E1", "E2"], [[1, 1, 0], [1, -2, 2], [0, 2, -3]], exceptional=["E1", "E2"]
    )


@pytest.fixture
def i2():
    """Two (-2)-curves meeting with multiplicity 2 (a fibre of type I_2)."""
    return CurveConfiguration.build(["C1", "C2"], [[-2, 2], [2, -2]])


# acceptance reporting: one PASS/FAIL line per criterion

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = getattr(report, "criterion", None)
    if marker is not None:
        number, title = marker
        _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"{status} criterion {number}: {title}")
