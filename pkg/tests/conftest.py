"""Print one PASS/FAIL line per acceptance criterion after the test run."""

RESULTS: dict[str, tuple[str, float | None]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    key = props.get("criterion")
    if key is None:
        return
    if report.when == "call" or report.failed:
        verdict = "PASS" if report.passed else "FAIL"
        if RESULTS.get(key, ("PASS",))[0] == "FAIL":
            verdict = "FAIL"
        RESULTS[key] = (verdict, props.get("elapsed"))


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: (int(k[0]), k)):
        verdict, elapsed = RESULTS[key]
        timing = f" ({elapsed:.2f}s)" if elapsed is not None else ""
        terminalreporter.write_line(f"{verdict} criterion {key}{timing}")
