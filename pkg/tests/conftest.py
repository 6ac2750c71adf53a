"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

_results: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            number, title = mark.args
            _results.setdefault(number, (title, []))
            item.user_properties.append(("criterion", number))


def pytest_runtest_logreport(report):
    number = dict(report.user_properties).get("criterion")
    if number is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _results[number][1].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, outcomes = _results[number]
        ok = outcomes and all(o == "passed" for o in outcomes)
        verdict = "PASS" if ok else ("NOT RUN" if not outcomes else "FAIL")
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
