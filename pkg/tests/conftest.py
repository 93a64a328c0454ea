import time

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    t0 = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - t0))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    elapsed = dict(report.user_properties).get("elapsed", 0.0)
    _RESULTS[marker] = ("PASS" if report.passed else "FAIL", elapsed)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), (status, elapsed) in sorted(_RESULTS.items()):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({elapsed:.2f} s)")
