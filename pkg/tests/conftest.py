import pytest

from formlab.ff_core import FieldSpec

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, title)`` then assert as usual."""
    entry = {}

    def register(number, title):
        entry.update(number=number, title=title)

    yield register
    if entry:
        rep = getattr(request.node, "rep_call", None)
        entry["passed"] = bool(rep and rep.passed)
        entry["detail"] = getattr(request.node, "acceptance_detail", "")
        _ACCEPTANCE.append(entry)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for e in sorted(_ACCEPTANCE, key=lambda e: e["number"]):
        status = "PASS" if e["passed"] else "FAIL"
        line = f"[{status}] {e['number']:>2}. {e['title']}"
        if e["detail"]:
            line += f" -- {e['detail']}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def f7():
    return FieldSpec(7)


@pytest.fixture(scope="session")
def f9():
    return FieldSpec(3, 2)
