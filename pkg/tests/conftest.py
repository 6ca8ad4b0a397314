from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def rationals(height: int = 20, nonzero: bool = False):
    """Small rationals p/q with |p|, q <= height."""
    s = st.builds(Fraction, st.integers(-height, height), st.integers(1, height))
    return s.filter(lambda x: x != 0) if nonzero else s


@pytest.fixture
def F():
    return Fraction


_ACCEPTANCE: dict[str, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): end-to-end acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        label = dict(report.user_properties).get("acceptance")
        if label:
            _ACCEPTANCE[report.nodeid] = (label, report.outcome, report.duration)


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("acceptance")
    if mark:
        item.user_properties.append(("acceptance", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k, (label, outcome, duration) in enumerate(_ACCEPTANCE.values(), 1):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{k:2d}] {verdict}  {label}  ({duration:.2f} s)")
