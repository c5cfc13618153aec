import random

import pytest

_ACCEPTANCE = {}


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def criterion(request):
    """``criterion(n, ok, detail)`` records one acceptance line and returns ``ok``."""

    def record(n, ok, detail):
        _ACCEPTANCE[n] = (bool(ok), detail)
        print(f"acceptance {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"acceptance {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
