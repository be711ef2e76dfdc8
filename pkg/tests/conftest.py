"""Collects one pass/fail line per acceptance criterion for the summary."""

_RESULTS: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): an acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    label, text = mark.args
    _RESULTS[label] = (text, "PASS" if call.excinfo is None else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_RESULTS, key=lambda s: (len(s.split()[0]), s)):
        text, verdict = _RESULTS[label]
        terminalreporter.write_line(f"{verdict}  criterion {label}: {text}")
