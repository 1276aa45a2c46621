import pytest

CRITERION_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion result and fail the test if it did not pass."""

    def record(number, description, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {description}"
        if detail and not ok:
            line += f" ({detail})"
        CRITERION_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
