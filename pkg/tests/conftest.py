import pytest

CRITERIA = {}


def record(number, title, ok):
    CRITERIA[number] = (title, ok)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}")


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, ok = CRITERIA[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}")
