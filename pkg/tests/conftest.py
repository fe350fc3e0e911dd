"""Shared fixtures and the acceptance summary printed at the end of a run."""

_CRITERION_LINES = {}


def record_criterion(number: int, description: str, passed: bool):
    status = "PASS" if passed else "FAIL"
    _CRITERION_LINES[number] = f"[criterion {number}] {status}: {description}"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERION_LINES):
        terminalreporter.write_line(_CRITERION_LINES[number])
