import pytest

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "ran": False})
    if rep.when == "call":
        entry["ran"] = True
    if rep.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {entry['title']}")
