import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def record_criterion():
    def record(number, title, failures, elapsed):
        ACCEPTANCE_RESULTS[number] = (title, failures, elapsed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, failures, elapsed = ACCEPTANCE_RESULTS[number]
        verdict = "PASS" if not failures else "FAIL"
        terminalreporter.write_line(f"criterion {number} [{verdict}] {title} ({elapsed:.2f} s)")
        for msg in failures:
            terminalreporter.write_line(f"    - {msg}")
