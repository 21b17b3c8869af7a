"""Collect outcomes of tests marked ``criterion`` and print one line each."""

_OUTCOMES = {}


def pytest_runtest_logreport(report):
    label = _LABELS.get(report.nodeid)
    if label is None:
        return
    # a criterion fails if any phase fails
    if report.failed:
        _OUTCOMES[label] = "FAIL"
    elif report.when == "call" and report.passed:
        _OUTCOMES.setdefault(label, "PASS")


_LABELS = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _LABELS[item.nodeid] = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _LABELS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(set(_LABELS.values()), key=lambda lt: int(lt[0].lstrip("AC"))):
        status = _OUTCOMES.get(label, "NOT RUN")
        terminalreporter.write_line(f"{status:7s} {label[0]:5s} {label[1]}")
