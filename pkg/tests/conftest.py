"""Shared pytest configuration.

Tests marked ``@pytest.mark.criterion(k, "label")`` contribute to a
per-criterion summary printed at the end of the session: one PASS/FAIL line
per acceptance criterion.
"""

from __future__ import annotations

from collections import defaultdict

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_RESULTS: dict = defaultdict(list)
_LABELS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, label = marker.args
    _LABELS[number] = label
    _RESULTS[number].append((item.name, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        runs = _RESULTS[number]
        ok = all(passed for _, passed in runs)
        failed = [name for name, passed in runs if not passed]
        extra = f"  (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {_LABELS[number]}{extra}")
