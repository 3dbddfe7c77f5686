import pytest

# criterion number -> [title, ok, notes]
_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    n, title = m.args
    entry = _CRITERIA.setdefault(n, [title, True, []])
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            entry[1] = False
            entry[2].append(f"{item.name}: expected failure ({rep.wasxfail})")
        elif not rep.passed:
            entry[1] = False
            entry[2].append(f"{item.name}: {rep.outcome}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, notes = _CRITERIA[n]
        tr.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title}")
        for note in notes:
            tr.write_line(f"    {note}")
