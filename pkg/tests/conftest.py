"""Collect the outcome of every acceptance criterion and print one
PASS/FAIL line per criterion after the run."""

import pytest

_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    key = mark.args
    if rep.failed:
        _OUTCOMES[key] = "FAIL"
    elif rep.when == "call" and rep.passed:
        _OUTCOMES.setdefault(key, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_OUTCOMES.items()):
        terminalreporter.write_line(f"{status} criterion {number}: {title}")
