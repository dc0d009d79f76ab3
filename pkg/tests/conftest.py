from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

# criterion number -> (description, passed, seconds)
ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    @contextmanager
    def record(number: int, description: str):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            prev = ACCEPTANCE.get(number)
            passed = ok and (prev is None or prev[1])
            ACCEPTANCE[number] = (description, passed, elapsed + (prev[2] if prev else 0.0))
            status = "PASS" if ok else "FAIL"
            print(f"criterion {number}: {status} ({elapsed:.2f}s) {description}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        description, passed, seconds = ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {seconds:7.2f}s  {description}")
