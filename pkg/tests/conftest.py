import re

CRITERIA = {
    1: "lemma replay",
    2: "lemma-library replay",
    3: "operational results",
    4: "weak-vs-strong separation",
    5: "rule soundness",
    6: "adequacy",
    7: "decoration conformance",
}

_outcomes = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.failed:
        _outcomes[n] = "PASS" if report.passed and _outcomes.get(n) != "FAIL" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        if n in _outcomes:
            terminalreporter.write_line(f"criterion {n} ({title}): {_outcomes[n]}")
