from contextlib import contextmanager
import os
import sys
import time

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = []


@pytest.fixture
def criterion():
    """``with criterion(n, title) as info:`` records a PASS/FAIL line for the run summary."""
    @contextmanager
    def run(n, title):
        info = {}
        start = time.perf_counter()
        ok = False
        try:
            yield info
            ok = True
        finally:
            secs = time.perf_counter() - start
            detail = ", ".join(f"{k}={v}" for k, v in info.items())
            line = f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} [{detail}] ({secs:.1f}s)"
            ACCEPTANCE.append(line)
            print(line)
    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
