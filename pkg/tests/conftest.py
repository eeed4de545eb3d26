import pytest
from hypothesis import settings

settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")

_ACCEPTANCE_RESULTS = []


def record_acceptance(number: int, name: str, ok: bool, detail: str = "") -> None:
    _ACCEPTANCE_RESULTS.append((number, name, ok, detail))


@pytest.fixture
def acceptance():
    """Recorder for acceptance-criterion outcomes, echoed in the run summary."""
    return record_acceptance


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(_ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number} [{status}] {name}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
