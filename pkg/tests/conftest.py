"""Shared test plumbing: the acceptance verdict block.

Acceptance tests record one verdict line per criterion; the terminal
summary hook prints them after the run, outside pytest's output capture,
so the lines show up for plain `pytest -v` runs, pass or fail.
"""

_acceptance_lines: list[str] = []


def record_criterion(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.line(line)
