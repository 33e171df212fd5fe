import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def planar():
    from structura.classes import builtin_class

    return builtin_class("planar")


@pytest.fixture(scope="session")
def forests():
    from structura.classes import builtin_class

    return builtin_class("forests")


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion and assert it."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
