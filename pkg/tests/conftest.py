"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

import pytest

_verdicts = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): numbered acceptance criterion")


@pytest.fixture
def evidence(request):
    """Dict for measured values; shown next to the criterion's verdict."""
    found = {}
    request.node.evidence = found
    return found


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "call" or rep.failed:
        n, title = mark.args
        _verdicts[n] = (title, rep.passed, getattr(item, "evidence", {}))


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_verdicts):
        title, ok, found = _verdicts[n]
        detail = ", ".join(f"{k}={v}" for k, v in found.items())
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}" + (f"  ({detail})" if detail else ""))
