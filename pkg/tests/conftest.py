"""Shared fixtures: uncaptured one-line reporting for acceptance checks."""
import pytest

_lines = []


@pytest.fixture
def emit():
    """Queue a line for the end-of-run summary, immune to output capture."""
    return _lines.append


@pytest.fixture
def check(emit):
    """Record one PASS/FAIL line for a named bound and assert it."""
    def _check(name: str, worst: float, tol: float):
        status = "PASS" if worst <= tol else "FAIL"
        emit(f"[{status}] {name}: worst error {worst:.3e} "
             f"(tolerance {tol:.0e})")
        assert worst <= tol, f"{name}: {worst:.3e} > {tol:.0e}"
    return _check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for line in _lines:
            terminalreporter.write_line(line)
