import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion.

    The recorded line is printed in the terminal summary even when the
    assertion that follows it fails, so the per-criterion verdicts stay
    visible in plain ``pytest -v`` output.
    """

    def _record(criterion: int, passed: bool, detail: str = ""):
        verdict = "PASS" if passed else "FAIL"
        line = f"ACCEPTANCE C{criterion} {verdict}" + (f": {detail}" if detail else "")
        _ACCEPTANCE_LINES.append((criterion, line))
        return passed

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES, key=lambda t: t[0]):
        terminalreporter.write_line(line)
