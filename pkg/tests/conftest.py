import pytest

_CRITERIA: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'}  criterion {number}: {detail}"
    _CRITERIA[number] = line
    print(line)


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])
