import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""
    entry = {"name": request.node.name, "detail": ""}

    def note(detail):
        entry["detail"] = detail

    yield note
    outcome = getattr(request.node, "rep_call", None)
    status = "PASS" if outcome is not None and outcome.passed else "FAIL"
    ACCEPTANCE_LINES.append(f"{status}  {entry['name']}  {entry['detail']}".rstrip())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
