import pytest

_RESULTS: dict[int, tuple[bool, str]] = {}


class Recorder:
    def __call__(self, number: int, ok: bool, detail: str = ""):
        _RESULTS[number] = (bool(ok), detail)
        return ok


@pytest.fixture(scope="session")
def record():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, detail = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
