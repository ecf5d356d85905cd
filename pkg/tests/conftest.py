"""Collects acceptance results and prints one line per criterion."""

import pytest

CRITERIA = {
    1: "seed extraction contract",
    2: "stratified quota",
    3: "cleaning",
    4: "decontamination oracle equivalence",
    5: "TF-IDF correctness",
    6: "similarity ordering (released data)",
    7: "language split",
    8: "pair mining",
    9: "end-to-end determinism",
    10: "concurrency bound",
}

_results: dict[str, tuple[int, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    prev = _results.get(item.nodeid)
    if rep.failed:
        _results[item.nodeid] = (n, "failed", str(rep.longrepr).splitlines()[-1] if rep.longrepr else "")
    elif rep.skipped:
        reason = rep.longrepr[2] if isinstance(rep.longrepr, tuple) else "skipped"
        _results[item.nodeid] = (n, "skipped", reason.removeprefix("Skipped: "))
    elif rep.when == "call" and (prev is None or prev[1] != "failed"):
        _results[item.nodeid] = (n, "passed", "")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    by_n: dict[int, list[tuple[str, str]]] = {}
    for n, status, note in _results.values():
        by_n.setdefault(n, []).append((status, note))
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        rows = by_n.get(n)
        if rows is None:
            line = "NOT RUN"
        elif any(s == "failed" for s, _ in rows):
            line = "FAIL  " + "; ".join(note for s, note in rows if s == "failed")
        elif all(s == "skipped" for s, _ in rows):
            line = "SKIP  " + "; ".join(note for _, note in rows)
        elif any(s == "skipped" for s, _ in rows):
            line = "PASS  (partial: " + "; ".join(note for s, note in rows if s == "skipped") + ")"
        else:
            line = "PASS"
        terminalreporter.write_line(f"criterion {n:>2} [{title}]: {line}")
