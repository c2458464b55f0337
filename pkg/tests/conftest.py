import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


@pytest.fixture
def criterion(request):
    """Record a criterion's outcome; the summary line is printed at session end."""
    name = request.node.name
    desc = (request.node.function.__doc__ or "").strip().splitlines()[0]
    _ACCEPTANCE[name] = ("FAIL", desc)
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed:
        _ACCEPTANCE[name] = ("PASS", desc)


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
    for name, (status, desc) in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"{status}  {name}: {desc}")
