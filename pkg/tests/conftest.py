import warnings

import pytest

from modular_double.errors import ResonanceWarning

# (criterion number, title, passed, detail) recorded by test_acceptance.py
ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


@pytest.fixture(autouse=True)
def _quiet_resonance():
    # b = 0.6 and 0.8 are required test points; their resonance warning is expected
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResonanceWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
