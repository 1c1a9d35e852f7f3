import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE = []


@pytest.fixture
def accept():
    """Record one acceptance line: accept(number, label, ok, detail)."""
    def record(number, label, ok, detail):
        ACCEPTANCE.append((number, label, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {number:2d} {label}: {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number:2d}  {label}: {detail}")
