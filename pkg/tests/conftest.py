import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


class Criterion:
    def __init__(self, number: int, title: str, limit: float | None):
        self.number = number
        self.title = title
        self.limit = limit
        self.details: list[str] = []

    def note(self, text: str) -> None:
        self.details.append(text)


@pytest.fixture
def criterion():
    """Time a block and record one PASS/FAIL line for the terminal summary."""

    @contextmanager
    def run(number: int, title: str, limit: float | None = None):
        c = Criterion(number, title, limit)
        start = time.perf_counter()
        ok = False
        try:
            yield c
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            slow = c.limit is not None and elapsed >= c.limit
            verdict = "PASS" if ok and not slow else "FAIL"
            budget = f" (limit {c.limit:g} s)" if c.limit is not None else ""
            detail = "; ".join(c.details)
            _LINES.append(f"criterion {number} {verdict}: {title}, {elapsed:.2f} s{budget}" + (f"; {detail}" if detail else ""))
        assert not slow, f"criterion {number} took {elapsed:.2f} s, limit {c.limit:g} s"

    return run


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
