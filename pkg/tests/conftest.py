import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion():
    """Record a one-line verdict for an acceptance criterion."""

    def record(number, name, passed, detail):
        ACCEPTANCE_LINES.append((number, f"CRITERION {number} [{'PASS' if passed else 'FAIL'}] {name}: {detail}"))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
