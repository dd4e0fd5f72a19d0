import pytest

_CRITERIA: dict = {}


@pytest.fixture(scope="session")
def criterion_log():
    """Record one verdict per acceptance criterion for the terminal summary."""

    def record(label: str, passed: bool, detail: str = "") -> None:
        _CRITERIA[label] = (passed, detail)
        print(f"{label}: {'PASS' if passed else 'FAIL'} {detail}".rstrip())

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=_label_key):
        passed, detail = _CRITERIA[label]
        terminalreporter.write_line(f"{label}: {'PASS' if passed else 'FAIL'} {detail}".rstrip())


def _label_key(label: str):
    head = label.split()[1]
    digits = "".join(ch for ch in head if ch.isdigit())
    return (int(digits or 0), head)
