import pytest

ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(number, label, ok, detail).

    ``ok=None`` marks a report-only line without a verdict.
    """

    def record(number, label, ok, detail=""):
        status = "REPORT" if ok is None else ("PASS" if ok else "FAIL")
        line = f"[criterion {number:>2}] {status}  {label}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
