from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# (criterion id, title, passed) in run order, filled for tests marked `criterion`
_CRITERIA: list[tuple[str, str, bool]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _CRITERIA.append((marker.args[0], title, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, passed in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {cid}  {title}")
    n = sum(p for _, _, p in _CRITERIA)
    terminalreporter.write_line(f"{n}/{len(_CRITERIA)} criteria met")
