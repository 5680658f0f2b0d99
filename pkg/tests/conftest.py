"""Acceptance-criterion bookkeeping: one PASS/FAIL line per criterion."""

import pytest

CRITERIA = {
    1: "pit of losses for normal egoists",
    2: "no pit of losses for SP(k=20) egoists",
    3: "full-window altruist ACI matches closed form",
    4: "SP variance equals sigma^2 (quadrature and Monte Carlo)",
    5: "SP quantile inverts the CDF",
    6: "SP approaches Laplace as k grows",
    7: "tail-heaviness suite",
    8: "egoists outlive full-window altruists in harsh SP environments",
    9: "small windows survive better in favorable environments",
    10: "small-instance brute-force voting oracle",
    11: "byte-identical sweeps across reruns and worker counts",
}

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.failed:
        _outcomes.setdefault(crit, []).append((report.nodeid.split("::")[-1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num, title in CRITERIA.items():
        results = _outcomes.get(num)
        if results is None:
            tr.write_line(f"criterion {num:2d}  NOT RUN  {title}")
            continue
        ok = all(passed for _, passed in results)
        failed = [name for name, passed in results if not passed]
        suffix = f"  (failed: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {num:2d}  {'PASS' if ok else 'FAIL'}     {title}{suffix}")

